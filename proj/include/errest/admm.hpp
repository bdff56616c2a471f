#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "errest/grounding.hpp"
#include "errest/logic.hpp"

namespace errest {

enum class SamplingMode { Full, Stochastic };
enum class Backend { Serial, OpenMP };

struct SolverSettings {
  double rho = 1.0;
  double eps_abs = 1e-5;
  double eps_rel = 1e-3;
  int max_iterations = 25'000;
  SamplingMode mode = SamplingMode::Full;
  /// Subproblems per iteration in stochastic mode (K).
  std::size_t sample_size = 0;
  /// Added to every copy/consensus distance before sampling.
  double distance_floor = 1e-6;
  std::uint64_t seed = 0;
  /// Start multipliers at U[-1,1] instead of 0.
  bool random_multipliers = false;
  Backend backend = Backend::OpenMP;
  /// Objective is recorded every `trace_every` iterations (and at the end).
  int trace_every = 1;

  /// Throws std::invalid_argument on out-of-range values. `hinge_count` is
  /// used to bound sample_size in stochastic mode.
  void validate(std::size_t hinge_count) const;
};

struct TracePoint {
  int iteration = 0;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  std::uint64_t subproblem_solves = 0;
};

struct Diagnostics {
  int iterations = 0;
  bool converged = false;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  std::uint64_t subproblem_solves = 0;
  /// Latent variables touched by no non-constant hinge; fixed at 0.5.
  std::size_t unconstrained_variables = 0;
  double seconds = 0.0;
  std::vector<TracePoint> trace;
};

struct Solution {
  std::vector<double> y;
  double objective = 0.0;
  Diagnostics diagnostics;
};

/// Minimises sum_j weight_j * max(l_j(y), 0)^p_j over y in [0,1]^m by
/// consensus ADMM. Returns the final consensus vector when converged, else
/// the best traced iterate.
Solution solve(std::span<const LinearHinge> hinges, std::size_t variable_count,
               const SolverSettings& settings);
Solution solve(const GroundProblem& problem, const SolverSettings& settings);

/// Exact minimiser of weight * max(a.y + b, 0)^p + (rho/2)|y - z|^2.
void subproblem_solve(std::span<const double> coeffs, double constant, double weight, int exponent,
                      std::span<const double> z, double rho, std::span<double> out);
std::vector<double> subproblem_solve(const LinearHinge& hinge, std::span<const double> z,
                                     double rho);

/// Draws `count` distinct indices with probability proportional to
/// distances[i] + floor (Efraimidis-Spirakis keys). All-zero weights fall back
/// to uniform. Result is sorted ascending.
std::vector<std::uint32_t> sample_subproblems(std::span<const double> distances, std::size_t count,
                                              double floor, std::mt19937_64& rng);

}  // namespace errest
