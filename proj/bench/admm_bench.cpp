// Serial reference kernels against their OpenMP counterparts on grounded
// synthetic problems (7 mutually exclusive domains, 6 classifiers). The
// argument is the instance count. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "errest/admm.hpp"
#include "errest/admm_kernels.hpp"
#include "errest/grounding.hpp"
#include "errest/synth.hpp"

namespace {

using namespace errest;

struct Fixture {
  GroundProblem problem;
  kernels::ConsensusLayout layout;
  kernels::ConsensusState state;
  std::vector<kernels::EntryStats> stats;
  std::vector<double> scratch;
};

const Fixture& fixture(std::size_t instances) {
  static std::map<std::size_t, std::unique_ptr<Fixture>> cache;
  auto& slot = cache[instances];
  if (slot) return *slot;
  SynthSpec spec;
  spec.domains = 7;
  spec.classifiers = 6;
  spec.instances = instances;
  std::vector<DomainId> all;
  for (std::uint32_t d = 0; d < 7; ++d) all.push_back(DomainId{d});
  spec.ontology = build_ontology(7, {all}, {});
  spec.error_rates = uniform_error_rates(7, 6, 0.05, 0.4, 1);
  spec.seed = 1;
  auto data = synth_generate(spec);

  slot = std::make_unique<Fixture>();
  Fixture& f = *slot;
  f.problem = ground(data.observations, spec.ontology);
  f.layout = kernels::build_layout(f.problem.hinges, f.problem.latent_count());
  f.state.consensus.assign(f.layout.variable_count, 0.5);
  f.state.copies.resize(f.layout.copy_count());
  for (std::size_t c = 0; c < f.layout.copy_count(); ++c) {
    f.state.copies[c] = f.state.consensus[f.layout.copy_variable[c]];
  }
  f.state.multipliers.assign(f.layout.copy_count(), 0.0);
  f.stats.resize(f.layout.variable_count);
  f.scratch.resize(f.layout.hinge_count());
  return f;
}

template <auto Kernel>
void BM_Subproblems(benchmark::State& st) {
  const Fixture& base = fixture(st.range(0));
  auto state = base.state;
  for (auto _ : st) {
    Kernel(base.layout, state, 1.0);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * base.layout.hinge_count());
}

template <auto Kernel>
void BM_Consensus(benchmark::State& st) {
  const Fixture& base = fixture(st.range(0));
  auto state = base.state;
  auto stats = base.stats;
  for (auto _ : st) {
    Kernel(base.layout, state, 1.0, stats);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * base.layout.variable_count);
}

template <auto Kernel>
void BM_Distances(benchmark::State& st) {
  const Fixture& base = fixture(st.range(0));
  auto out = base.scratch;
  for (auto _ : st) {
    Kernel(base.layout, base.state, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * base.layout.hinge_count());
}

// Fixed number of full iterations, no early stop.
void BM_Solve(benchmark::State& st, Backend backend) {
  const Fixture& base = fixture(st.range(0));
  SolverSettings s;
  s.backend = backend;
  s.eps_abs = 1e-300;
  s.eps_rel = 0.0;
  s.max_iterations = 20;
  s.trace_every = 1'000'000;
  for (auto _ : st) benchmark::DoNotOptimize(solve(base.problem, s).objective);
  st.SetItemsProcessed(st.iterations() * 20 * base.layout.hinge_count());
}

using ConsensusKernel = void (*)(const kernels::ConsensusLayout&, kernels::ConsensusState&, double,
                                 std::span<kernels::EntryStats>);
using SubproblemKernel = void (*)(const kernels::ConsensusLayout&, kernels::ConsensusState&,
                                  double);

constexpr SubproblemKernel kSerialSub = kernels::serial::update_subproblems;
constexpr SubproblemKernel kOmpSub = kernels::omp::update_subproblems;
constexpr ConsensusKernel kSerialCons = kernels::serial::update_consensus;
constexpr ConsensusKernel kOmpCons = kernels::omp::update_consensus;

BENCHMARK(BM_Subproblems<kSerialSub>)->Name("subproblems/serial")->Arg(500)->Arg(2000);
BENCHMARK(BM_Subproblems<kOmpSub>)->Name("subproblems/omp")->Arg(500)->Arg(2000);
BENCHMARK(BM_Consensus<kSerialCons>)->Name("consensus/serial")->Arg(500)->Arg(2000);
BENCHMARK(BM_Consensus<kOmpCons>)->Name("consensus/omp")->Arg(500)->Arg(2000);
BENCHMARK(BM_Distances<kernels::serial::copy_distances>)
    ->Name("distances/serial")
    ->Arg(500)
    ->Arg(2000);
BENCHMARK(BM_Distances<kernels::omp::copy_distances>)->Name("distances/omp")->Arg(500)->Arg(2000);
BENCHMARK_CAPTURE(BM_Solve, serial, Backend::Serial)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, omp, Backend::OpenMP)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
