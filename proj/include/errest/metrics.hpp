#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "errest/model.hpp"

namespace errest {

using DomainClassifier = std::pair<DomainId, ClassifierId>;
using DomainInstance = std::pair<DomainId, InstanceId>;

/// Binary ground-truth labels per (domain, instance).
struct TruthSet {
  std::map<DomainInstance, int> labels;

  void set(DomainId d, InstanceId x, int label) { labels[{d, x}] = label; }
  std::optional<int> get(DomainId d, InstanceId x) const;
  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }
};

/// Mean over labelled instances of f^ * [f != 1] + (1 - f^) * [f != 0].
/// Absent when no instance has both an output and a label.
std::optional<double> empirical_error_rate(const ObservationSet& obs, const TruthSet& truth,
                                           DomainId d, ClassifierId j);
/// empirical_error_rate for every (domain, classifier) with support.
std::map<DomainClassifier, double> empirical_error_rates(const ObservationSet& obs,
                                                         const TruthSet& truth);

/// Average (fractional) ranks, 1-based; ties share the mean of their ranks.
std::vector<double> fractional_ranks(std::span<const double> values);

/// |rank(estimated) - rank(sample)|_1. Throws std::invalid_argument on size
/// mismatch or empty input.
double mad_error_rank(std::span<const double> estimated, std::span<const double> sample);
/// Mean absolute deviation. Throws std::invalid_argument on size mismatch.
double mad_error(std::span<const double> estimated, std::span<const double> sample);

/// Step-wise average precision. Scores are ranked descending with ties broken
/// by position (callers pass instances in id order). Absent without positives.
std::optional<double> auc_pr(std::span<const double> scores, std::span<const int> truth);

/// Votes thresholded at 0.5: 1 if most vote positive, 0 if most vote
/// negative, 0.5 on an exact tie. Absent without responses.
std::optional<double> majority_vote(const ObservationSet& obs, DomainId d, InstanceId x);
/// majority_vote for every (domain, instance) with at least one response.
std::map<DomainInstance, double> majority_vote_all(const ObservationSet& obs);

/// Error rates measured against soft reference labels, e.g. majority votes:
/// mean over instances of |f^ - label|.
std::map<DomainClassifier, double> agreement_error_rates(
    const ObservationSet& obs, const std::map<DomainInstance, double>& labels);

struct DomainMetrics {
  DomainId domain;
  std::size_t classifiers = 0;
  std::optional<double> mad_error_rank;
  std::optional<double> mad_error;
  /// l1 sum of error deviations (mad_error * classifiers).
  std::optional<double> l1_error;
  std::optional<double> auc_target;
};

struct MetricsReport {
  std::vector<DomainMetrics> domains;
  std::optional<double> mad_error_rank;
  std::optional<double> mad_error;
  std::optional<double> l1_error;
  std::optional<double> auc_target;
  /// Fraction of truth-supported (domain, classifier) pairs with an estimate.
  double error_coverage = 0.0;
  /// Fraction of labelled (domain, instance) pairs with a target estimate.
  double target_coverage = 0.0;
};

/// Per-domain metrics on the intersection of estimates and truth, averaged
/// over domains without weighting.
MetricsReport evaluate(const std::map<DomainClassifier, double>& error_estimates,
                       const std::map<DomainInstance, double>& target_estimates,
                       const ObservationSet& obs, const TruthSet& truth);

}  // namespace errest
