#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "errest/logic.hpp"
#include "errest/model.hpp"

namespace errest {

struct RuleWeights {
  /// Ensemble and constraint rules.
  double rule_weight = 1.0;
  /// Prior (identifiability) rules.
  double prior_weight = 0.1;
  int exponent = 1;

  double weight_for(RuleTemplate t) const { return is_prior(t) ? prior_weight : rule_weight; }
};

/// Compiled hinge-loss MRF: latent variables Y, observed values X, and one
/// hinge per ground rule (`rules[i]` compiles to `hinges[i]`).
struct GroundProblem {
  std::vector<GroundPredicate> latent;
  std::unordered_map<GroundPredicate, std::uint32_t, GroundPredicateHash> latent_index;
  std::vector<ObservationSet::Entry> observed;
  std::vector<GroundRule> rules;
  std::vector<LinearHinge> hinges;

  std::size_t latent_count() const { return latent.size(); }
  std::size_t observed_count() const { return observed.size(); }
  std::size_t hinge_count() const { return hinges.size(); }

  std::optional<std::uint32_t> index_of(const GroundPredicate& p) const;
  /// Sum of weighted potentials at Y (size latent_count()).
  double objective(std::span<const double> y) const;
};

/// Grounds only the rules whose approximation-output predicate is observed.
/// Observations are visited grouped by instance. TargetOutput observations are
/// clamped into X. Deterministic.
GroundProblem ground(const ObservationSet& obs, const Ontology& ontology,
                     const RuleWeights& weights = {});

struct NaiveGroundingOptions {
  std::size_t max_ground_rules = 1'000'000;
};

/// Reference grounding over the full Cartesian product of domain pairs for
/// the constraint templates, with ME/SUB guard values taken from the
/// ontology (false guards included). Throws InputError when the rule count
/// would exceed the cap. Test oracle for ground().
GroundProblem naive_ground(const ObservationSet& obs, const Ontology& ontology,
                           const RuleWeights& weights = {},
                           const NaiveGroundingOptions& options = {});

}  // namespace errest
