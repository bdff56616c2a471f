#include <cmath>

#include "errest/admm_kernels.hpp"

namespace errest::kernels {

ConsensusLayout build_layout(std::span<const LinearHinge> hinges, std::size_t variable_count) {
  ConsensusLayout layout;
  layout.variable_count = variable_count;
  layout.hinge_offset.reserve(hinges.size() + 1);
  layout.hinge_offset.push_back(0);

  for (std::size_t j = 0; j < hinges.size(); ++j) {
    const auto& h = hinges[j];
    if (h.terms.empty()) {
      double v = std::max(h.constant, 0.0);
      layout.constant_objective += h.weight * (h.exponent == 2 ? v * v : v);
      continue;
    }
    for (const auto& t : h.terms) {
      layout.copy_variable.push_back(t.index);
      layout.coeff.push_back(t.coeff);
    }
    layout.hinge_offset.push_back(static_cast<std::uint32_t>(layout.copy_variable.size()));
    layout.constant.push_back(h.constant);
    layout.weight.push_back(h.weight);
    layout.exponent.push_back(static_cast<std::uint8_t>(h.exponent));
    layout.source.push_back(static_cast<std::uint32_t>(j));
  }

  layout.var_offset.assign(variable_count + 1, 0);
  for (auto v : layout.copy_variable) ++layout.var_offset[v + 1];
  for (std::size_t i = 0; i < variable_count; ++i) {
    layout.var_offset[i + 1] += layout.var_offset[i];
  }
  layout.var_copies.resize(layout.copy_variable.size());
  std::vector<std::uint32_t> cursor(layout.var_offset.begin(), layout.var_offset.end() - 1);
  for (std::uint32_t c = 0; c < layout.copy_variable.size(); ++c) {
    layout.var_copies[cursor[layout.copy_variable[c]]++] = c;
  }
  return layout;
}

Norms reduce(std::span<const EntryStats> stats) {
  EntryStats total;
  for (const auto& s : stats) {
    total.delta_sq += s.delta_sq;
    total.primal_sq += s.primal_sq;
    total.copy_sq += s.copy_sq;
    total.consensus_sq += s.consensus_sq;
    total.multiplier_sq += s.multiplier_sq;
  }
  return {std::sqrt(total.primal_sq), std::sqrt(total.delta_sq), std::sqrt(total.copy_sq),
          std::sqrt(total.consensus_sq), std::sqrt(total.multiplier_sq)};
}

void prox_hinge(const double* coeffs, std::size_t n, double constant, double weight, int exponent,
                const double* z, double rho, double* out) {
  double at_z = constant;
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    at_z += coeffs[i] * z[i];
    norm_sq += coeffs[i] * coeffs[i];
  }
  // Inactive at z, or a constant hinge: the quadratic term alone decides.
  if (at_z <= 0.0 || norm_sq == 0.0) {
    if (out != z) {
      for (std::size_t i = 0; i < n; ++i) out[i] = z[i];
    }
    return;
  }
  double step;
  if (exponent == 2) {
    double active = at_z / (1.0 + 2.0 * weight * norm_sq / rho);
    step = 2.0 * weight * active / rho;
  } else {
    step = weight / rho;
    // The gradient step overshoots past the kink: land on the hyperplane.
    if (at_z - step * norm_sq < 0.0) step = at_z / norm_sq;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = z[i] - step * coeffs[i];
}

}  // namespace errest::kernels
