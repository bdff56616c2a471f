#include "errest/logic.hpp"

#include <stdexcept>

namespace errest {

double distance_to_satisfiability(std::span<const double> bodies, std::span<const double> heads) {
  if (bodies.empty()) throw std::invalid_argument("rule body must not be empty");
  double sum = 1.0 - static_cast<double>(bodies.size());
  for (double b : bodies) sum += b;
  for (double h : heads) sum -= h;
  return std::clamp(sum, 0.0, 1.0);
}

std::string_view template_name(RuleTemplate t) {
  switch (t) {
    case RuleTemplate::EnsemblePosCorrect:
      return "EnsemblePosCorrect";
    case RuleTemplate::EnsembleNegCorrect:
      return "EnsembleNegCorrect";
    case RuleTemplate::EnsemblePosError:
      return "EnsemblePosError";
    case RuleTemplate::EnsembleNegError:
      return "EnsembleNegError";
    case RuleTemplate::PriorPos:
      return "PriorPos";
    case RuleTemplate::PriorNeg:
      return "PriorNeg";
    case RuleTemplate::MutualExclusion:
      return "MutualExclusion";
    case RuleTemplate::Subsumption:
      return "Subsumption";
  }
  return "?";
}

bool is_prior(RuleTemplate t) { return t == RuleTemplate::PriorPos || t == RuleTemplate::PriorNeg; }

const RuleShape& rule_shape(RuleTemplate t) {
  using S = Slot;
  static const std::array<RuleShape, 8> shapes = {{
      {{{S::Approx, false}, {S::Error, true}}, {{S::Target, false}}},
      {{{S::Approx, true}, {S::Error, true}}, {{S::Target, true}}},
      {{{S::Approx, false}, {S::Error, false}}, {{S::Target, true}}},
      {{{S::Approx, true}, {S::Error, false}}, {{S::Target, false}}},
      {{{S::Approx, false}}, {{S::Target, false}}},
      {{{S::Approx, true}}, {{S::Target, true}}},
      {{{S::Guard, false}, {S::Approx, false}, {S::Target, false}}, {{S::Error, false}}},
      {{{S::Guard, false}, {S::Approx, true}, {S::Target, false}}, {{S::Error, false}}},
  }};
  return shapes[static_cast<std::size_t>(t)];
}

double LinearHinge::linear(std::span<const double> y) const {
  double v = constant;
  for (const auto& t : terms) v += t.coeff * y[t.index];
  return v;
}

double LinearHinge::potential(std::span<const double> y) const {
  double v = std::max(linear(y), 0.0);
  return exponent == 2 ? v * v : v;
}

bool LinearHinge::trivially_satisfied() const {
  double max_linear = constant;
  for (const auto& t : terms) max_linear += std::max(t.coeff, 0.0);
  return max_linear <= 0.0;
}

LinearHinge compile_hinge(
    const GroundRule& rule, const ObservationSet& obs,
    const std::unordered_map<GroundPredicate, std::uint32_t, GroundPredicateHash>& var_index,
    double weight, int exponent) {
  auto resolve = [&](const GroundPredicate& p) {
    if (auto v = obs.get(p)) return Operand::known(*v);
    auto it = var_index.find(p);
    if (it == var_index.end()) throw InputError(describe(p) + ": unbound predicate");
    return Operand::latent(it->second);
  };
  return compile_hinge(rule, resolve, weight, exponent);
}

}  // namespace errest
