#pragma once

#include <map>

#include "errest/admm.hpp"
#include "errest/grounding.hpp"
#include "errest/metrics.hpp"
#include "errest/model.hpp"

namespace errest {

struct EstimatorConfig {
  RuleWeights weights;
  SolverSettings solver;
  double threshold = 0.5;
};

struct Estimates {
  std::map<DomainClassifier, double> error_rates;
  std::map<DomainInstance, double> target_soft;
  std::map<DomainInstance, int> target_hard;
  Diagnostics diagnostics;
  double objective = 0.0;
  std::size_t latent_count = 0;
  std::size_t hinge_count = 0;
};

/// Grounds the observations against the ontology, runs MPE inference and
/// reads error rates and soft target labels off the consensus vector.
/// Observed TargetOutput values are reported unchanged.
Estimates estimate(const ObservationSet& obs, const Ontology& ontology,
                   const EstimatorConfig& config = {});

/// Per (domain, instance): sum_j w_j f^_j / sum_j w_j with w_j = max(1 - 2 e_j, 0),
/// falling back to the plain mean when every weight is 0. Classifiers without
/// an error rate are skipped.
std::map<DomainInstance, double> combine_weighted_majority(
    const ObservationSet& obs, const std::map<DomainClassifier, double>& error_rates);

}  // namespace errest
