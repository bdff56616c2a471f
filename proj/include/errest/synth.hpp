#pragma once

#include <cstdint>
#include <vector>

#include "errest/metrics.hpp"
#include "errest/model.hpp"

namespace errest {

struct SynthSpec {
  std::size_t domains = 0;
  std::size_t classifiers = 0;
  std::size_t instances = 0;
  Ontology ontology;
  /// error_rates[d][j]; every entry in [0,1].
  std::vector<std::vector<double>> error_rates;
  /// Emit soft outputs in [0,1] rather than {0,1}.
  bool soft = false;
  /// Probability that each output is kept.
  double density = 1.0;
  /// Per-label positive probability before constraint rejection.
  double positive_rate = 0.5;
  std::uint64_t seed = 0;
  /// Rejection-sampling attempts per instance before giving up.
  std::size_t max_attempts = 100'000;
};

struct SynthData {
  ObservationSet observations;
  TruthSet truth;
};

/// True if `labels` (one per domain) satisfies every ME and SUB constraint.
bool satisfies(const Ontology& ontology, const std::vector<int>& labels);

/// Samples constraint-consistent truth labels, then classifier outputs that
/// flip the truth with the classifier's error rate. Ids are dense: domain d,
/// classifier j, instance x map to DomainId{d}, ClassifierId{j}, InstanceId{x}.
/// Throws InputError when the spec is malformed or no consistent label vector
/// is found within max_attempts.
SynthData synth_generate(const SynthSpec& spec);

/// Error rates drawn uniformly from [low, high], D x N.
std::vector<std::vector<double>> uniform_error_rates(std::size_t domains, std::size_t classifiers,
                                                     double low, double high, std::uint64_t seed);

}  // namespace errest
