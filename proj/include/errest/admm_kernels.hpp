#pragma once

// Flat consensus-ADMM data layout and the per-iteration kernels. Two
// implementations share one interface: `serial` is the reference, `omp`
// parallelises over subproblems and consensus entries. Both use the same
// arithmetic order per element, so they produce bit-identical iterates.

#include <cstdint>
#include <span>
#include <vector>

#include "errest/logic.hpp"

namespace errest::kernels {

/// Copies are grouped by hinge: hinge j owns copies
/// [hinge_offset[j], hinge_offset[j+1]). Copy c mirrors consensus entry
/// copy_variable[c]. var_offset/var_copies list each entry's copies in
/// ascending copy order.
struct ConsensusLayout {
  std::size_t variable_count = 0;
  std::vector<std::uint32_t> hinge_offset;
  std::vector<std::uint32_t> copy_variable;
  std::vector<double> coeff;
  std::vector<double> constant;
  std::vector<double> weight;
  std::vector<std::uint8_t> exponent;
  std::vector<std::uint32_t> var_offset;
  std::vector<std::uint32_t> var_copies;
  /// Objective contribution of hinges with no latent terms.
  double constant_objective = 0.0;
  /// Source hinge of each layout hinge.
  std::vector<std::uint32_t> source;

  std::size_t hinge_count() const { return constant.size(); }
  std::size_t copy_count() const { return copy_variable.size(); }
  std::size_t copies_of(std::size_t var) const { return var_offset[var + 1] - var_offset[var]; }
};

ConsensusLayout build_layout(std::span<const LinearHinge> hinges, std::size_t variable_count);

struct ConsensusState {
  std::vector<double> consensus;    // Y, size m
  std::vector<double> copies;       // y_j, size C
  std::vector<double> multipliers;  // alpha_j, size C
};

/// Per-entry quantities gathered during the consensus update; summed
/// serially in index order for reproducible norms.
struct EntryStats {
  double delta_sq = 0.0;      // (Y_new - Y_old)^2
  double primal_sq = 0.0;     // sum over copies (y_c - Y_new)^2
  double copy_sq = 0.0;       // sum y_c^2
  double consensus_sq = 0.0;  // Y_new^2
  double multiplier_sq = 0.0;
};

struct Norms {
  double primal = 0.0;
  double dual_step = 0.0;  // |Y_new - Y_old|
  double copies = 0.0;
  double consensus = 0.0;
  double multipliers = 0.0;
};

Norms reduce(std::span<const EntryStats> stats);

namespace serial {
/// Multiplier then copy update for every hinge (or only `subset`).
void update_subproblems(const ConsensusLayout& layout, ConsensusState& state, double rho);
void update_subproblems(const ConsensusLayout& layout, ConsensusState& state, double rho,
                        std::span<const std::uint32_t> subset);
/// Clamped average of copies plus scaled multipliers for every entry that has
/// copies (or only `subset`); fills `stats` for the updated entries.
void update_consensus(const ConsensusLayout& layout, ConsensusState& state, double rho,
                      std::span<EntryStats> stats);
void update_consensus(const ConsensusLayout& layout, ConsensusState& state, double rho,
                      std::span<const std::uint32_t> subset, std::span<EntryStats> stats);
/// |y_j - Y_G(j)|_2 per hinge.
void copy_distances(const ConsensusLayout& layout, const ConsensusState& state,
                    std::span<double> out);
/// Weighted potentials of each layout hinge at the consensus vector.
void hinge_objectives(const ConsensusLayout& layout, std::span<const double> y,
                      std::span<double> out);
}  // namespace serial

namespace omp {
void update_subproblems(const ConsensusLayout& layout, ConsensusState& state, double rho);
void update_subproblems(const ConsensusLayout& layout, ConsensusState& state, double rho,
                        std::span<const std::uint32_t> subset);
void update_consensus(const ConsensusLayout& layout, ConsensusState& state, double rho,
                      std::span<EntryStats> stats);
void update_consensus(const ConsensusLayout& layout, ConsensusState& state, double rho,
                      std::span<const std::uint32_t> subset, std::span<EntryStats> stats);
void copy_distances(const ConsensusLayout& layout, const ConsensusState& state,
                    std::span<double> out);
void hinge_objectives(const ConsensusLayout& layout, std::span<const double> y,
                      std::span<double> out);
}  // namespace omp

/// Shared per-hinge proximal step on raw arrays; `z` and `out` may alias.
void prox_hinge(const double* coeffs, std::size_t n, double constant, double weight, int exponent,
                const double* z, double rho, double* out);

}  // namespace errest::kernels
