#include "admm_steps.hpp"

namespace errest::kernels::omp {

using detail::entry_step;
using detail::hinge_step;

void update_subproblems(const ConsensusLayout& layout, ConsensusState& state, double rho) {
  const std::size_t k = layout.hinge_count();
#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < k; ++j) hinge_step(layout, state, rho, j);
}

void update_subproblems(const ConsensusLayout& layout, ConsensusState& state, double rho,
                        std::span<const std::uint32_t> subset) {
  const std::size_t n = subset.size();
#pragma omp parallel for schedule(static)
  for (std::size_t s = 0; s < n; ++s) hinge_step(layout, state, rho, subset[s]);
}

void update_consensus(const ConsensusLayout& layout, ConsensusState& state, double rho,
                      std::span<EntryStats> stats) {
  const std::size_t m = layout.variable_count;
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < m; ++i) entry_step(layout, state, rho, i, stats[i]);
}

void update_consensus(const ConsensusLayout& layout, ConsensusState& state, double rho,
                      std::span<const std::uint32_t> subset, std::span<EntryStats> stats) {
  const std::size_t n = subset.size();
#pragma omp parallel for schedule(static)
  for (std::size_t s = 0; s < n; ++s) entry_step(layout, state, rho, subset[s], stats[subset[s]]);
}

void copy_distances(const ConsensusLayout& layout, const ConsensusState& state,
                    std::span<double> out) {
  const std::size_t k = layout.hinge_count();
#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < k; ++j) out[j] = detail::copy_distance(layout, state, j);
}

void hinge_objectives(const ConsensusLayout& layout, std::span<const double> y,
                      std::span<double> out) {
  const std::size_t k = layout.hinge_count();
#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < k; ++j) out[j] = detail::hinge_objective(layout, y, j);
}

}  // namespace errest::kernels::omp
