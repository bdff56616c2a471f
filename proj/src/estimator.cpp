#include "errest/estimator.hpp"

#include <algorithm>

namespace errest {

Estimates estimate(const ObservationSet& obs, const Ontology& ontology,
                   const EstimatorConfig& config) {
  validate_observations(obs);
  if (obs.approx_count() == 0) throw InputError("no classifier outputs to estimate from");

  const GroundProblem problem = ground(obs, ontology, config.weights);
  Solution solution = solve(problem, config.solver);

  Estimates out;
  for (std::size_t i = 0; i < problem.latent.size(); ++i) {
    const auto& p = problem.latent[i];
    const double v = solution.y[i];
    switch (p.kind) {
      case PredicateKind::ErrorRate:
        out.error_rates.emplace(DomainClassifier{p.domain, p.classifier}, v);
        break;
      case PredicateKind::TargetOutput:
        out.target_soft.emplace(DomainInstance{p.domain, p.instance}, v);
        break;
      case PredicateKind::ApproxOutput:
        break;
    }
  }
  for (const auto& [p, v] : obs.sorted()) {
    if (p.kind == PredicateKind::TargetOutput) {
      out.target_soft.insert_or_assign(DomainInstance{p.domain, p.instance}, v);
    }
  }
  for (const auto& [key, v] : out.target_soft) {
    out.target_hard.emplace(key, v >= config.threshold ? 1 : 0);
  }
  out.diagnostics = std::move(solution.diagnostics);
  out.objective = solution.objective;
  out.latent_count = problem.latent_count();
  out.hinge_count = problem.hinge_count();
  return out;
}

std::map<DomainInstance, double> combine_weighted_majority(
    const ObservationSet& obs, const std::map<DomainClassifier, double>& error_rates) {
  struct Acc {
    double weighted = 0.0;
    double weights = 0.0;
    double plain = 0.0;
    std::size_t count = 0;
  };
  std::map<DomainInstance, Acc> acc;
  for (const auto& [p, v] : obs.approx_by_instance()) {
    auto e = error_rates.find({p.domain, p.classifier});
    if (e == error_rates.end()) continue;
    const double w = std::max(1.0 - 2.0 * e->second, 0.0);
    auto& a = acc[{p.domain, p.instance}];
    a.weighted += w * v;
    a.weights += w;
    a.plain += v;
    ++a.count;
  }
  std::map<DomainInstance, double> out;
  for (const auto& [key, a] : acc) {
    out.emplace(key,
                a.weights > 0.0 ? a.weighted / a.weights : a.plain / static_cast<double>(a.count));
  }
  return out;
}

}  // namespace errest
