#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "errest/estimator.hpp"
#include "errest/metrics.hpp"
#include "errest/model.hpp"

namespace errest {

// Text formats. Every reader streams line by line, skips blank and
// '#'-prefixed lines, and collects all problems before throwing InputError
// with "source:line: message" entries. Names are interned into `vocab`, so
// one Vocabulary shared across files keeps ids consistent.

/// instance<TAB>domain<TAB>classifier<TAB>value, value a decimal in [0,1].
ObservationSet read_predictions(std::istream& in, Vocabulary& vocab,
                                std::string_view source = "<predictions>");
ObservationSet parse_predictions(const std::filesystem::path& path, Vocabulary& vocab);
/// ApproxOutput entries only, in (instance, domain, classifier) id order.
/// Values use the shortest decimal form that reads back to the same double.
void write_predictions(std::ostream& out, const ObservationSet& obs, const Vocabulary& vocab);

/// ME<TAB>d1,d2,...,dk (k >= 2) or SUB<TAB>parent<TAB>child.
Ontology read_constraints(std::istream& in, Vocabulary& vocab,
                          std::string_view source = "<constraints>");
Ontology parse_constraints(const std::filesystem::path& path, Vocabulary& vocab);
/// One ME line per pair and one SUB line per pair, in id order.
void write_constraints(std::ostream& out, const Ontology& ontology, const Vocabulary& vocab);

/// instance<TAB>domain<TAB>{0|1}.
TruthSet read_labels(std::istream& in, Vocabulary& vocab, std::string_view source = "<labels>");
TruthSet parse_labels(const std::filesystem::path& path, Vocabulary& vocab);
void write_labels(std::ostream& out, const TruthSet& truth, const Vocabulary& vocab);

/// domain<TAB>classifier<TAB>estimate, 6 decimals.
void write_error_rates(std::ostream& out, const std::map<DomainClassifier, double>& rates,
                       const Vocabulary& vocab);
std::map<DomainClassifier, double> read_error_rates(std::istream& in, Vocabulary& vocab,
                                                    std::string_view source = "<error rates>");

/// instance<TAB>domain<TAB>soft<TAB>hard, soft with 6 decimals.
void write_targets(std::ostream& out, const Estimates& estimates, const Vocabulary& vocab);
/// Soft values keyed by (domain, instance).
std::map<DomainInstance, double> read_targets(std::istream& in, Vocabulary& vocab,
                                              std::string_view source = "<targets>");

/// Fixed-point with `decimals` digits, locale independent.
std::string format_fixed(double value, int decimals = 6);

/// Everything a run needs besides its data.
struct RunConfig {
  double prior_weight = 0.1;
  double rule_weight = 1.0;
  int exponent = 1;
  double rho = 1.0;
  double eps_abs = 1e-5;
  double eps_rel = 1e-3;
  int max_iterations = 25'000;
  /// 0 selects full mode; otherwise the stochastic sample size K.
  std::size_t stochastic = 0;
  std::uint64_t seed = 0;
  double threshold = 0.5;

  EstimatorConfig estimator_config() const;
  /// Throws InputError naming every out-of-range field.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& config);
/// Missing keys keep their defaults; unknown keys and type errors throw InputError.
RunConfig run_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Diagnostics& diagnostics, bool include_timing = false);
nlohmann::json to_json(const MetricsReport& report, const Vocabulary& vocab);

}  // namespace errest
