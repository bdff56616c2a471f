#pragma once

// Per-element ADMM steps shared by the serial and OpenMP kernels.

#include <algorithm>
#include <cmath>

#include "errest/admm_kernels.hpp"

namespace errest::kernels::detail {

inline void hinge_step(const ConsensusLayout& layout, ConsensusState& state, double rho,
                       std::size_t j) {
  const std::size_t begin = layout.hinge_offset[j];
  const std::size_t end = layout.hinge_offset[j + 1];
  double* y = state.copies.data();
  double* alpha = state.multipliers.data();
  for (std::size_t c = begin; c < end; ++c) {
    const double target = state.consensus[layout.copy_variable[c]];
    alpha[c] += rho * (y[c] - target);
    y[c] = target - alpha[c] / rho;
  }
  prox_hinge(layout.coeff.data() + begin, end - begin, layout.constant[j], layout.weight[j],
             layout.exponent[j], y + begin, rho, y + begin);
}

inline void entry_step(const ConsensusLayout& layout, ConsensusState& state, double rho,
                       std::size_t i, EntryStats& stats) {
  const std::size_t begin = layout.var_offset[i];
  const std::size_t end = layout.var_offset[i + 1];
  if (begin == end) {
    stats = {};
    stats.consensus_sq = state.consensus[i] * state.consensus[i];
    return;
  }
  double sum = 0.0;
  for (std::size_t k = begin; k < end; ++k) {
    const auto c = layout.var_copies[k];
    sum += state.copies[c] + state.multipliers[c] / rho;
  }
  const double updated = std::clamp(sum / static_cast<double>(end - begin), 0.0, 1.0);
  const double delta = updated - state.consensus[i];
  state.consensus[i] = updated;

  EntryStats s;
  s.delta_sq = delta * delta;
  s.consensus_sq = updated * updated;
  for (std::size_t k = begin; k < end; ++k) {
    const auto c = layout.var_copies[k];
    const double r = state.copies[c] - updated;
    s.primal_sq += r * r;
    s.copy_sq += state.copies[c] * state.copies[c];
    s.multiplier_sq += state.multipliers[c] * state.multipliers[c];
  }
  stats = s;
}

inline double copy_distance(const ConsensusLayout& layout, const ConsensusState& state,
                            std::size_t j) {
  double sq = 0.0;
  for (std::size_t c = layout.hinge_offset[j]; c < layout.hinge_offset[j + 1]; ++c) {
    const double r = state.copies[c] - state.consensus[layout.copy_variable[c]];
    sq += r * r;
  }
  return std::sqrt(sq);
}

inline double hinge_objective(const ConsensusLayout& layout, std::span<const double> y,
                              std::size_t j) {
  double v = layout.constant[j];
  for (std::size_t c = layout.hinge_offset[j]; c < layout.hinge_offset[j + 1]; ++c) {
    v += layout.coeff[c] * y[layout.copy_variable[c]];
  }
  v = std::max(v, 0.0);
  return layout.weight[j] * (layout.exponent[j] == 2 ? v * v : v);
}

}  // namespace errest::kernels::detail
