#pragma once

#include <algorithm>
#include <array>
#include <boost/container/small_vector.hpp>
#include <cstdint>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "errest/model.hpp"

namespace errest {

// Lukasiewicz operators on [0,1].
constexpr double luk_and(double p, double q) { return std::max(p + q - 1.0, 0.0); }
constexpr double luk_or(double p, double q) { return std::min(p + q, 1.0); }
constexpr double luk_not(double p) { return 1.0 - p; }
constexpr double luk_implies(double p, double q) { return std::min(1.0 - p + q, 1.0); }

/// 1 minus the truth value of (B1 & ... & Bs) -> (H1 | ... | Ht).
/// Throws std::invalid_argument if `bodies` is empty.
double distance_to_satisfiability(std::span<const double> bodies, std::span<const double> heads);

enum class RuleTemplate : std::uint8_t {
  EnsemblePosCorrect,  // f^ & !e -> f
  EnsembleNegCorrect,  // !f^ & !e -> !f
  EnsemblePosError,    // f^ & e -> !f
  EnsembleNegError,    // !f^ & e -> f
  PriorPos,            // f^ -> f
  PriorNeg,            // !f^ -> !f
  MutualExclusion,     // ME(d1,d2) & f^{d1}_j & f^{d2} -> e^{d1}_j
  Subsumption,         // SUB(d1,d2) & !f^{d1}_j & f^{d2} -> e^{d1}_j
};

inline constexpr std::array<RuleTemplate, 8> kAllTemplates = {
    RuleTemplate::EnsemblePosCorrect, RuleTemplate::EnsembleNegCorrect,
    RuleTemplate::EnsemblePosError,   RuleTemplate::EnsembleNegError,
    RuleTemplate::PriorPos,           RuleTemplate::PriorNeg,
    RuleTemplate::MutualExclusion,    RuleTemplate::Subsumption};

std::string_view template_name(RuleTemplate t);
bool is_prior(RuleTemplate t);

/// Which argument of a ground rule a literal refers to.
enum class Slot : std::uint8_t { Guard, Approx, Target, Error };

struct Literal {
  Slot slot;
  bool negated;
};

struct RuleShape {
  std::vector<Literal> body;
  std::vector<Literal> head;
};

/// Body/head structure of a template.
const RuleShape& rule_shape(RuleTemplate t);

/// A template bound to concrete predicates. For ME/SUB, `approx` and `error`
/// belong to the constrained domain d1 and `target` to d2; `guard` is the
/// observed truth of ME(d1,d2) / SUB(d1,d2). Prior rules ignore `error`.
struct GroundRule {
  RuleTemplate rule;
  GroundPredicate approx;
  GroundPredicate target;
  GroundPredicate error;
  double guard = 1.0;

  friend auto operator<=>(const GroundRule&, const GroundRule&) = default;
};

struct GroundRuleHash {
  std::size_t operator()(const GroundRule& r) const noexcept {
    GroundPredicateHash h;
    std::size_t v = static_cast<std::size_t>(r.rule);
    v = v * 31 + h(r.approx);
    v = v * 31 + h(r.target);
    v = v * 31 + h(r.error);
    return v;
  }
};

struct HingeTerm {
  std::uint32_t index;
  double coeff;
  friend bool operator==(const HingeTerm&, const HingeTerm&) = default;
};

/// weight * max(sum coeff * Y[index] + constant, 0)^exponent
struct LinearHinge {
  boost::container::small_vector<HingeTerm, 3> terms;
  double constant = 0.0;
  double weight = 1.0;
  int exponent = 1;

  double linear(std::span<const double> y) const;
  /// Unweighted potential.
  double potential(std::span<const double> y) const;
  double weighted(std::span<const double> y) const { return weight * potential(y); }
  /// True when the hinge is zero everywhere on the unit box.
  bool trivially_satisfied() const;

  friend bool operator==(const LinearHinge&, const LinearHinge&) = default;
};

/// How a predicate enters a linear form: a known value or a latent index.
struct Operand {
  bool observed = false;
  double value = 0.0;
  std::uint32_t index = 0;

  static Operand known(double v) { return {true, v, 0}; }
  static Operand latent(std::uint32_t i) { return {false, 0.0, i}; }
};

/// Compiles a ground rule into its linear hinge. `resolve(pred)` returns the
/// Operand for each predicate the rule mentions. Negated literals enter as
/// (1 - v) and observed operands fold into the constant, so that
/// max(linear, 0) equals the rule's distance to satisfiability.
template <class Resolve>
LinearHinge compile_hinge(const GroundRule& rule, Resolve&& resolve, double weight, int exponent) {
  const RuleShape& shape = rule_shape(rule.rule);
  LinearHinge h;
  h.weight = weight;
  h.exponent = exponent;
  h.constant = 1.0 - static_cast<double>(shape.body.size());

  auto add = [&](const Literal& lit, double sign) {
    Operand op;
    switch (lit.slot) {
      case Slot::Guard:
        op = Operand::known(rule.guard);
        break;
      case Slot::Approx:
        op = resolve(rule.approx);
        break;
      case Slot::Target:
        op = resolve(rule.target);
        break;
      case Slot::Error:
        op = resolve(rule.error);
        break;
    }
    if (op.observed) {
      h.constant += sign * (lit.negated ? 1.0 - op.value : op.value);
      return;
    }
    double coeff = lit.negated ? -sign : sign;
    if (lit.negated) h.constant += sign;
    for (auto& t : h.terms) {
      if (t.index == op.index) {
        t.coeff += coeff;
        return;
      }
    }
    h.terms.push_back({op.index, coeff});
  };
  for (const auto& lit : shape.body) add(lit, 1.0);
  for (const auto& lit : shape.head) add(lit, -1.0);
  h.terms.erase(std::remove_if(h.terms.begin(), h.terms.end(),
                               [](const HingeTerm& t) { return t.coeff == 0.0; }),
                h.terms.end());
  std::sort(h.terms.begin(), h.terms.end(),
            [](const HingeTerm& a, const HingeTerm& b) { return a.index < b.index; });
  return h;
}

/// Convenience overload over an observation set and a latent index map.
/// Throws InputError if a predicate is neither observed nor indexed.
LinearHinge compile_hinge(
    const GroundRule& rule, const ObservationSet& obs,
    const std::unordered_map<GroundPredicate, std::uint32_t, GroundPredicateHash>& var_index,
    double weight, int exponent);

}  // namespace errest
