#include "errest/admm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "errest/admm_kernels.hpp"

namespace errest {

void SolverSettings::validate(std::size_t hinge_count) const {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (!(eps_abs > 0.0)) throw std::invalid_argument("eps_abs must be positive");
  if (!(eps_rel >= 0.0)) throw std::invalid_argument("eps_rel must be non-negative");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
  if (trace_every < 1) throw std::invalid_argument("trace_every must be at least 1");
  if (mode == SamplingMode::Stochastic) {
    if (sample_size == 0) throw std::invalid_argument("stochastic mode needs K > 0");
    if (sample_size > hinge_count) {
      throw std::invalid_argument("K = " + std::to_string(sample_size) +
                                  " exceeds the number of subproblems (" +
                                  std::to_string(hinge_count) + ")");
    }
    if (!(distance_floor >= 0.0)) throw std::invalid_argument("distance floor must be >= 0");
  }
}

void subproblem_solve(std::span<const double> coeffs, double constant, double weight, int exponent,
                      std::span<const double> z, double rho, std::span<double> out) {
  if (coeffs.size() != z.size() || out.size() != z.size()) {
    throw std::invalid_argument("subproblem dimensions disagree");
  }
  kernels::prox_hinge(coeffs.data(), coeffs.size(), constant, weight, exponent, z.data(), rho,
                      out.data());
}

std::vector<double> subproblem_solve(const LinearHinge& hinge, std::span<const double> z,
                                     double rho) {
  std::vector<double> coeffs;
  for (const auto& t : hinge.terms) coeffs.push_back(t.coeff);
  std::vector<double> out(z.size());
  subproblem_solve(coeffs, hinge.constant, hinge.weight, hinge.exponent, z, rho, out);
  return out;
}

std::vector<std::uint32_t> sample_subproblems(std::span<const double> distances, std::size_t count,
                                              double floor, std::mt19937_64& rng) {
  const std::size_t k = distances.size();
  if (count > k) throw std::invalid_argument("sample size exceeds population");

  bool all_zero = true;
  for (double d : distances) {
    if (d + floor > 0.0) {
      all_zero = false;
      break;
    }
  }

  // Key log(u)/w; the largest `count` keys form a weighted sample without
  // replacement.
  std::vector<double> keys(k);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t j = 0; j < k; ++j) {
    double u = unit(rng);
    if (u <= 0.0) u = std::numeric_limits<double>::min();
    const double w = all_zero ? 1.0 : distances[j] + floor;
    keys[j] = w > 0.0 ? std::log(u) / w : -std::numeric_limits<double>::infinity();
  }
  std::vector<std::uint32_t> order(k);
  std::iota(order.begin(), order.end(), 0u);
  auto better = [&](std::uint32_t a, std::uint32_t b) {
    return keys[a] > keys[b] || (keys[a] == keys[b] && a < b);
  };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                   better);
  order.resize(count);
  std::sort(order.begin(), order.end());
  return order;
}

namespace {

struct KernelSet {
  void (*update_all)(const kernels::ConsensusLayout&, kernels::ConsensusState&, double);
  void (*update_subset)(const kernels::ConsensusLayout&, kernels::ConsensusState&, double,
                        std::span<const std::uint32_t>);
  void (*consensus_all)(const kernels::ConsensusLayout&, kernels::ConsensusState&, double,
                        std::span<kernels::EntryStats>);
  void (*consensus_subset)(const kernels::ConsensusLayout&, kernels::ConsensusState&, double,
                           std::span<const std::uint32_t>, std::span<kernels::EntryStats>);
  void (*distances)(const kernels::ConsensusLayout&, const kernels::ConsensusState&,
                    std::span<double>);
  void (*objectives)(const kernels::ConsensusLayout&, std::span<const double>, std::span<double>);
};

KernelSet kernel_set(Backend backend) {
  using namespace kernels;
  if (backend == Backend::Serial) {
    return {serial::update_subproblems, serial::update_subproblems, serial::update_consensus,
            serial::update_consensus,   serial::copy_distances,     serial::hinge_objectives};
  }
  return {omp::update_subproblems, omp::update_subproblems, omp::update_consensus,
          omp::update_consensus,   omp::copy_distances,     omp::hinge_objectives};
}

class Driver {
 public:
  Driver(std::span<const LinearHinge> hinges, std::size_t m, const SolverSettings& settings)
      : settings_(settings),
        layout_(kernels::build_layout(hinges, m)),
        kernels_(kernel_set(settings.backend)),
        rng_(settings.seed),
        stats_(m),
        hinge_values_(layout_.hinge_count()) {
    settings_.validate(layout_.hinge_count());
    initialise();
  }

  Solution run() {
    const auto started = std::chrono::steady_clock::now();
    Solution solution;
    auto& diag = solution.diagnostics;
    for (std::size_t i = 0; i < layout_.variable_count; ++i) {
      if (layout_.copies_of(i) == 0) ++diag.unconstrained_variables;
    }

    if (layout_.hinge_count() == 0) {
      diag.converged = true;
      solution.y = state_.consensus;
      solution.objective = objective(solution.y);
      diag.trace.push_back({0, solution.objective, 0.0, 0.0, 0});
      diag.seconds = elapsed(started);
      return solution;
    }

    const bool stochastic = settings_.mode == SamplingMode::Stochastic;
    const std::size_t k = layout_.hinge_count();
    const std::size_t epoch =
        stochastic ? (k + settings_.sample_size - 1) / settings_.sample_size : 1;
    std::vector<double> epoch_start = state_.consensus;
    std::vector<double> best = state_.consensus;
    double best_objective = std::numeric_limits<double>::infinity();

    int iteration = 0;
    while (iteration < settings_.max_iterations) {
      ++iteration;
      if (stochastic) {
        stochastic_step();
      } else {
        kernels_.update_all(layout_, state_, settings_.rho);
        kernels_.consensus_all(layout_, state_, settings_.rho, stats_);
        solves_ += k;
      }

      const bool check = iteration % static_cast<int>(epoch) == 0;
      const bool record = iteration % settings_.trace_every == 0;
      if (check) {
        apply_stopping_rule(stochastic ? full_norms(epoch_start) : kernels::reduce(stats_), diag);
        if (stochastic) epoch_start = state_.consensus;
      }
      const bool done = check && converged_;
      if (record || done || iteration == settings_.max_iterations) {
        const double value = objective(state_.consensus);
        diag.trace.push_back({iteration, value, diag.primal_residual, diag.dual_residual, solves_});
        if (value < best_objective) {
          best_objective = value;
          best = state_.consensus;
        }
      }
      if (done) break;
    }

    diag.iterations = iteration;
    diag.converged = converged_;
    diag.subproblem_solves = solves_;
    solution.y = converged_ ? state_.consensus : best;
    solution.objective = objective(solution.y);
    diag.seconds = elapsed(started);
    return solution;
  }

 private:
  void initialise() {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    state_.consensus.resize(layout_.variable_count);
    for (std::size_t i = 0; i < layout_.variable_count; ++i) {
      const double draw = unit(rng_);
      state_.consensus[i] = layout_.copies_of(i) == 0 ? 0.5 : draw;
    }
    state_.copies.resize(layout_.copy_count());
    state_.multipliers.assign(layout_.copy_count(), 0.0);
    for (std::size_t c = 0; c < layout_.copy_count(); ++c) {
      state_.copies[c] = state_.consensus[layout_.copy_variable[c]];
    }
    if (settings_.random_multipliers) {
      std::uniform_real_distribution<double> sym(-1.0, 1.0);
      for (auto& a : state_.multipliers) a = sym(rng_);
    }
  }

  void stochastic_step() {
    std::vector<double> distances(layout_.hinge_count());
    kernels_.distances(layout_, state_, distances);
    const auto sampled =
        sample_subproblems(distances, settings_.sample_size, settings_.distance_floor, rng_);
    kernels_.update_subset(layout_, state_, settings_.rho, sampled);
    solves_ += sampled.size();

    touched_.clear();
    for (auto j : sampled) {
      for (auto c = layout_.hinge_offset[j]; c < layout_.hinge_offset[j + 1]; ++c) {
        touched_.push_back(layout_.copy_variable[c]);
      }
    }
    std::sort(touched_.begin(), touched_.end());
    touched_.erase(std::unique(touched_.begin(), touched_.end()), touched_.end());
    kernels_.consensus_subset(layout_, state_, settings_.rho, touched_, stats_);
  }

  /// Residual norms over every copy; the dual step is measured against
  /// `previous`. Used in stochastic mode, where only some entries moved.
  kernels::Norms full_norms(const std::vector<double>& previous) const {
    const std::size_t m = layout_.variable_count;
    kernels::EntryStats total;
    for (std::size_t i = 0; i < m; ++i) {
      const double y = state_.consensus[i];
      total.consensus_sq += y * y;
      const double d = y - previous[i];
      total.delta_sq += d * d;
      for (auto k = layout_.var_offset[i]; k < layout_.var_offset[i + 1]; ++k) {
        const auto c = layout_.var_copies[k];
        const double r = state_.copies[c] - y;
        total.primal_sq += r * r;
        total.copy_sq += state_.copies[c] * state_.copies[c];
        total.multiplier_sq += state_.multipliers[c] * state_.multipliers[c];
      }
    }
    return kernels::reduce(std::span(&total, 1));
  }

  void apply_stopping_rule(const kernels::Norms& norms, Diagnostics& diag) {
    const double dual = settings_.rho * norms.dual_step;
    const double eps_primal =
        std::sqrt(static_cast<double>(layout_.copy_count())) * settings_.eps_abs +
        settings_.eps_rel * std::max(norms.copies, norms.consensus);
    const double eps_dual =
        std::sqrt(static_cast<double>(layout_.variable_count)) * settings_.eps_abs +
        settings_.eps_rel * norms.multipliers;
    diag.primal_residual = norms.primal;
    diag.dual_residual = dual;
    converged_ = norms.primal <= eps_primal && dual <= eps_dual;
  }

  double objective(std::span<const double> y) {
    kernels_.objectives(layout_, y, hinge_values_);
    double total = layout_.constant_objective;
    for (double v : hinge_values_) total += v;
    return total;
  }

  static double elapsed(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
  }

  SolverSettings settings_;
  kernels::ConsensusLayout layout_;
  KernelSet kernels_;
  std::mt19937_64 rng_;
  kernels::ConsensusState state_;
  std::vector<kernels::EntryStats> stats_;
  std::vector<double> hinge_values_;
  std::vector<std::uint32_t> touched_;
  std::uint64_t solves_ = 0;
  bool converged_ = false;
};

}  // namespace

Solution solve(std::span<const LinearHinge> hinges, std::size_t variable_count,
               const SolverSettings& settings) {
  for (const auto& h : hinges) {
    for (const auto& t : h.terms) {
      if (t.index >= variable_count) {
        throw std::invalid_argument("hinge references variable " + std::to_string(t.index) +
                                    " but only " + std::to_string(variable_count) + " exist");
      }
    }
  }
  return Driver(hinges, variable_count, settings).run();
}

Solution solve(const GroundProblem& problem, const SolverSettings& settings) {
  return solve(problem.hinges, problem.latent_count(), settings);
}

}  // namespace errest
