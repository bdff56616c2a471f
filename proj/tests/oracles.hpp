#pragma once

// Reference implementations used as test oracles. Each one is written
// independently of the library code it checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "errest/logic.hpp"

namespace errest::oracle {

inline double l_and(double p, double q) { return std::max(p + q - 1.0, 0.0); }
inline double l_not(double p) { return 1.0 - p; }
inline double l_implies(double p, double q) { return std::min(1.0 - p + q, 1.0); }

/// Truth value of a rule template by composing the Lukasiewicz operators on
/// the rule as written. `target` is f for the ensemble and prior rules and
/// f of the second domain for ME and SUB.
inline double rule_truth(RuleTemplate t, double guard, double approx, double target, double error) {
  switch (t) {
    case RuleTemplate::EnsemblePosCorrect:
      return l_implies(l_and(approx, l_not(error)), target);
    case RuleTemplate::EnsembleNegCorrect:
      return l_implies(l_and(l_not(approx), l_not(error)), l_not(target));
    case RuleTemplate::EnsemblePosError:
      return l_implies(l_and(approx, error), l_not(target));
    case RuleTemplate::EnsembleNegError:
      return l_implies(l_and(l_not(approx), error), target);
    case RuleTemplate::PriorPos:
      return l_implies(approx, target);
    case RuleTemplate::PriorNeg:
      return l_implies(l_not(approx), l_not(target));
    case RuleTemplate::MutualExclusion:
      return l_implies(l_and(l_and(guard, approx), target), error);
    case RuleTemplate::Subsumption:
      return l_implies(l_and(l_and(guard, l_not(approx)), target), error);
  }
  return 0.0;
}

inline double objective(const std::vector<LinearHinge>& hinges, const std::vector<double>& y) {
  double total = 0.0;
  for (const auto& h : hinges) {
    double l = h.constant;
    for (const auto& t : h.terms) l += t.coeff * y[t.index];
    const double v = std::max(l, 0.0);
    total += h.weight * (h.exponent == 2 ? v * v : v);
  }
  return total;
}

/// Random hinge problem over m variables with k hinges.
inline std::vector<LinearHinge> random_problem(std::mt19937_64& rng, std::size_t m, std::size_t k,
                                               int exponent) {
  std::uniform_real_distribution<double> coeff(-1.5, 1.5);
  std::uniform_real_distribution<double> constant(-1.0, 1.0);
  std::uniform_real_distribution<double> weight(0.1, 2.0);
  std::uniform_int_distribution<std::size_t> arity(1, std::min<std::size_t>(m, 3));
  std::vector<LinearHinge> hinges(k);
  for (auto& h : hinges) {
    std::vector<std::uint32_t> vars(m);
    for (std::uint32_t i = 0; i < m; ++i) vars[i] = i;
    std::shuffle(vars.begin(), vars.end(), rng);
    vars.resize(arity(rng));
    std::sort(vars.begin(), vars.end());
    for (auto v : vars) h.terms.push_back({v, coeff(rng)});
    h.constant = constant(rng);
    h.weight = weight(rng);
    h.exponent = exponent;
  }
  return hinges;
}

/// Minimum over the grid {0, step, ..., 1}^m for m <= 3. For m = 3 the last
/// coordinate is searched by bisection on the forward difference, which is
/// exact because a convex function restricted to an arithmetic grid is
/// discretely convex.
inline double grid_minimum(const std::vector<LinearHinge>& hinges, std::size_t m, int cells) {
  const double step = 1.0 / cells;
  std::vector<double> y(m, 0.0);
  double best = std::numeric_limits<double>::infinity();
  auto at = [&](int i) { return std::min(i * step, 1.0); };
  auto line_min = [&](std::size_t axis) {
    auto f = [&](int i) {
      y[axis] = at(i);
      return objective(hinges, y);
    };
    int lo = 0, hi = cells;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (f(mid + 1) < f(mid)) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return f(lo);
  };
  if (m == 0) return objective(hinges, y);
  if (m == 1) {
    for (int i = 0; i <= cells; ++i) {
      y[0] = at(i);
      best = std::min(best, objective(hinges, y));
    }
    return best;
  }
  if (m == 2) {
    for (int i = 0; i <= cells; ++i) {
      y[0] = at(i);
      for (int j = 0; j <= cells; ++j) {
        y[1] = at(j);
        best = std::min(best, objective(hinges, y));
      }
    }
    return best;
  }
  for (int i = 0; i <= cells; ++i) {
    for (int j = 0; j <= cells; ++j) {
      y[0] = at(i);
      y[1] = at(j);
      best = std::min(best, line_min(2));
    }
  }
  return best;
}

/// Solves the n x n system A x = b by Gaussian elimination with partial
/// pivoting. Returns false when A is (numerically) singular.
inline bool solve_linear(std::vector<std::vector<double>> a, std::vector<double> b,
                         std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[pivot][c])) pivot = r;
    }
    if (std::abs(a[pivot][c]) < 1e-10) return false;
    std::swap(a[c], a[pivot]);
    std::swap(b[c], b[pivot]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return true;
}

/// Exact minimum of a sum of weighted linear hinges (exponent 1) over
/// [0,1]^m. The objective is convex and piecewise linear, so its minimum is
/// attained at a vertex of the arrangement formed by the hinge hyperplanes
/// and the box faces; every vertex is enumerated.
inline double vertex_minimum(const std::vector<LinearHinge>& hinges, std::size_t m) {
  // Hyperplanes as (normal, offset) with normal . y = offset.
  std::vector<std::pair<std::vector<double>, double>> planes;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> n(m, 0.0);
    n[i] = 1.0;
    planes.emplace_back(n, 0.0);
    planes.emplace_back(n, 1.0);
  }
  for (const auto& h : hinges) {
    std::vector<double> n(m, 0.0);
    for (const auto& t : h.terms) n[t.index] += t.coeff;
    planes.emplace_back(n, -h.constant);
  }
  double best = std::numeric_limits<double>::infinity();
  if (m == 0) return objective(hinges, {});
  std::vector<std::size_t> pick(m);
  for (std::size_t i = 0; i < m; ++i) pick[i] = i;
  const std::size_t n = planes.size();
  for (;;) {
    std::vector<std::vector<double>> a(m);
    std::vector<double> b(m), y;
    for (std::size_t r = 0; r < m; ++r) {
      a[r] = planes[pick[r]].first;
      b[r] = planes[pick[r]].second;
    }
    if (solve_linear(a, b, y)) {
      bool inside = true;
      for (auto& v : y) {
        if (v < -1e-9 || v > 1.0 + 1e-9) inside = false;
        v = std::clamp(v, 0.0, 1.0);
      }
      if (inside) best = std::min(best, objective(hinges, y));
    }
    // Next combination in lexicographic order.
    std::size_t i = m;
    while (i-- > 0) {
      if (pick[i] != i + n - m) break;
      if (i == 0) return best;
    }
    if (pick[i] == i + n - m) return best;
    ++pick[i];
    for (std::size_t j = i + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace errest::oracle
