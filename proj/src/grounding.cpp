#include "errest/grounding.hpp"

#include <algorithm>
#include <unordered_set>

namespace errest {

std::optional<std::uint32_t> GroundProblem::index_of(const GroundPredicate& p) const {
  auto it = latent_index.find(p);
  if (it == latent_index.end()) return std::nullopt;
  return it->second;
}

double GroundProblem::objective(std::span<const double> y) const {
  double total = 0.0;
  for (const auto& h : hinges) total += h.weighted(y);
  return total;
}

namespace {

constexpr std::array<RuleTemplate, 6> kPerOutputTemplates = {
    RuleTemplate::EnsemblePosCorrect, RuleTemplate::EnsembleNegCorrect,
    RuleTemplate::EnsemblePosError,   RuleTemplate::EnsembleNegError,
    RuleTemplate::PriorPos,           RuleTemplate::PriorNeg};

/// Accumulates predicates and rules into a GroundProblem. Rules never span
/// instances, so deduplication state is reset per instance group.
class ProblemBuilder {
 public:
  ProblemBuilder(const ObservationSet& obs, const RuleWeights& weights)
      : obs_(obs), weights_(weights) {}

  void begin_instance() { seen_rules_.clear(); }

  void add_observed(const GroundPredicate& p, double v) {
    if (observed_seen_.insert(p).second) problem_.observed.emplace_back(p, v);
  }

  /// Registers a predicate; latent unless the observation set has it.
  Operand add(const GroundPredicate& p) {
    if (auto v = obs_.get(p)) {
      add_observed(p, *v);
      return Operand::known(*v);
    }
    auto [it, inserted] =
        problem_.latent_index.try_emplace(p, static_cast<std::uint32_t>(problem_.latent.size()));
    if (inserted) problem_.latent.push_back(p);
    return Operand::latent(it->second);
  }

  void add_rule(const GroundRule& rule) {
    if (!seen_rules_.insert(rule).second) return;
    auto resolve = [this](const GroundPredicate& p) { return add(p); };
    problem_.hinges.push_back(
        compile_hinge(rule, resolve, weights_.weight_for(rule.rule), weights_.exponent));
    problem_.rules.push_back(rule);
  }

  GroundProblem finish() {
    std::sort(problem_.observed.begin(), problem_.observed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return std::move(problem_);
  }

 private:
  const ObservationSet& obs_;
  RuleWeights weights_;
  GroundProblem problem_;
  std::unordered_set<GroundRule, GroundRuleHash> seen_rules_;
  std::unordered_set<GroundPredicate, GroundPredicateHash> observed_seen_;
};

template <class Visit>
void for_each_instance_group(const std::vector<ObservationSet::Entry>& outputs, Visit&& visit) {
  std::size_t begin = 0;
  while (begin < outputs.size()) {
    std::size_t end = begin;
    while (end < outputs.size() && outputs[end].first.instance == outputs[begin].first.instance) {
      ++end;
    }
    visit(std::span(outputs).subspan(begin, end - begin));
    begin = end;
  }
}

}  // namespace

GroundProblem ground(const ObservationSet& obs, const Ontology& ontology,
                     const RuleWeights& weights) {
  ProblemBuilder builder(obs, weights);
  const auto outputs = obs.approx_by_instance();

  for_each_instance_group(outputs, [&](std::span<const ObservationSet::Entry> group) {
    builder.begin_instance();
    for (const auto& [approx, value] : group) {
      const DomainId d = approx.domain;
      const InstanceId x = approx.instance;
      const auto error = GroundPredicate::error_rate(d, approx.classifier);
      const auto target = GroundPredicate::target(d, x);

      builder.add_observed(approx, value);
      builder.add(error);
      builder.add(target);
      for (RuleTemplate t : kPerOutputTemplates) builder.add_rule({t, approx, target, error});

      // ME pairs are symmetric: both orientations reach here through d.
      for (DomainId other : ontology.me_partners(d)) {
        const auto other_target = GroundPredicate::target(other, x);
        builder.add(other_target);
        builder.add_rule({RuleTemplate::MutualExclusion, approx, other_target, error});
      }
      // Subsumption only from the subsumer's side.
      for (DomainId child : ontology.sub_children(d)) {
        const auto child_target = GroundPredicate::target(child, x);
        builder.add(child_target);
        builder.add_rule({RuleTemplate::Subsumption, approx, child_target, error});
      }
    }
  });
  return builder.finish();
}

GroundProblem naive_ground(const ObservationSet& obs, const Ontology& ontology,
                           const RuleWeights& weights, const NaiveGroundingOptions& options) {
  const auto outputs = obs.approx_by_instance();
  std::size_t domain_count = ontology.domain_count();
  for (const auto& [p, v] : outputs) {
    domain_count = std::max<std::size_t>(domain_count, p.domain.value + 1);
  }
  const std::size_t per_output = 6 + 2 * (domain_count > 0 ? domain_count - 1 : 0);
  const std::size_t projected = outputs.size() * per_output;
  if (projected > options.max_ground_rules) {
    throw InputError("naive grounding would create " + std::to_string(projected) +
                     " ground rules (cap " + std::to_string(options.max_ground_rules) + ")");
  }

  ProblemBuilder builder(obs, weights);
  for_each_instance_group(outputs, [&](std::span<const ObservationSet::Entry> group) {
    builder.begin_instance();
    for (const auto& [approx, value] : group) {
      const DomainId d = approx.domain;
      const InstanceId x = approx.instance;
      const auto error = GroundPredicate::error_rate(d, approx.classifier);
      const auto target = GroundPredicate::target(d, x);

      builder.add_observed(approx, value);
      builder.add(error);
      builder.add(target);
      for (RuleTemplate t : kPerOutputTemplates) builder.add_rule({t, approx, target, error});

      for (std::uint32_t o = 0; o < domain_count; ++o) {
        const DomainId other{o};
        if (other == d) continue;
        const auto other_target = GroundPredicate::target(other, x);
        builder.add(other_target);
        builder.add_rule({RuleTemplate::MutualExclusion, approx, other_target, error,
                          ontology.mutually_exclusive(d, other) ? 1.0 : 0.0});
      }
      for (std::uint32_t o = 0; o < domain_count; ++o) {
        const DomainId other{o};
        if (other == d) continue;
        const auto other_target = GroundPredicate::target(other, x);
        builder.add(other_target);
        builder.add_rule({RuleTemplate::Subsumption, approx, other_target, error,
                          ontology.subsumes(d, other) ? 1.0 : 0.0});
      }
    }
  });
  return builder.finish();
}

}  // namespace errest
