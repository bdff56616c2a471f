#include "errest/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace errest {

std::optional<int> TruthSet::get(DomainId d, InstanceId x) const {
  auto it = labels.find({d, x});
  if (it == labels.end()) return std::nullopt;
  return it->second;
}

namespace {

double soft_mismatch(double output, int label) {
  return output * (label != 1 ? 1.0 : 0.0) + (1.0 - output) * (label != 0 ? 1.0 : 0.0);
}

struct Mean {
  double sum = 0.0;
  std::size_t count = 0;
  void add(double v) {
    sum += v;
    ++count;
  }
  double value() const { return sum / static_cast<double>(count); }
};

}  // namespace

std::optional<double> empirical_error_rate(const ObservationSet& obs, const TruthSet& truth,
                                           DomainId d, ClassifierId j) {
  Mean mean;
  for (const auto& [pred, value] : obs.sorted()) {
    if (pred.kind != PredicateKind::ApproxOutput || pred.domain != d || pred.classifier != j) {
      continue;
    }
    if (auto label = truth.get(d, pred.instance)) mean.add(soft_mismatch(value, *label));
  }
  if (mean.count == 0) return std::nullopt;
  return mean.value();
}

std::map<DomainClassifier, double> empirical_error_rates(const ObservationSet& obs,
                                                         const TruthSet& truth) {
  std::map<DomainClassifier, Mean> acc;
  for (const auto& [pred, value] : obs.approx_by_instance()) {
    if (auto label = truth.get(pred.domain, pred.instance)) {
      acc[{pred.domain, pred.classifier}].add(soft_mismatch(value, *label));
    }
  }
  std::map<DomainClassifier, double> out;
  for (const auto& [key, mean] : acc) out.emplace(key, mean.value());
  return out;
}

std::vector<double> fractional_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

double mad_error_rank(std::span<const double> estimated, std::span<const double> sample) {
  if (estimated.size() != sample.size()) {
    throw std::invalid_argument("rank vectors differ in size");
  }
  if (estimated.empty()) throw std::invalid_argument("rank vectors are empty");
  const auto a = fractional_ranks(estimated);
  const auto b = fractional_ranks(sample);
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return total;
}

double mad_error(std::span<const double> estimated, std::span<const double> sample) {
  if (estimated.size() != sample.size()) {
    throw std::invalid_argument("error vectors differ in size");
  }
  if (estimated.empty()) throw std::invalid_argument("error vectors are empty");
  double total = 0.0;
  for (std::size_t i = 0; i < estimated.size(); ++i) {
    total += std::abs(estimated[i] - sample[i]);
  }
  return total / static_cast<double>(estimated.size());
}

std::optional<double> auc_pr(std::span<const double> scores, std::span<const int> truth) {
  if (scores.size() != truth.size()) throw std::invalid_argument("scores and labels differ");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::size_t positives = 0;
  double precision_sum = 0.0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (truth[order[rank]] == 1) {
      ++positives;
      precision_sum += static_cast<double>(positives) / static_cast<double>(rank + 1);
    }
  }
  if (positives == 0) return std::nullopt;
  return precision_sum / static_cast<double>(positives);
}

namespace {

struct VoteCount {
  std::size_t positive = 0;
  std::size_t total = 0;
  double result() const {
    if (2 * positive > total) return 1.0;
    if (2 * positive < total) return 0.0;
    return 0.5;
  }
};

}  // namespace

std::optional<double> majority_vote(const ObservationSet& obs, DomainId d, InstanceId x) {
  VoteCount votes;
  for (const auto& [pred, value] : obs.sorted()) {
    if (pred.kind == PredicateKind::ApproxOutput && pred.domain == d && pred.instance == x) {
      ++votes.total;
      if (value >= 0.5) ++votes.positive;
    }
  }
  if (votes.total == 0) return std::nullopt;
  return votes.result();
}

std::map<DomainInstance, double> majority_vote_all(const ObservationSet& obs) {
  std::map<DomainInstance, VoteCount> counts;
  for (const auto& [pred, value] : obs.approx_by_instance()) {
    auto& votes = counts[{pred.domain, pred.instance}];
    ++votes.total;
    if (value >= 0.5) ++votes.positive;
  }
  std::map<DomainInstance, double> out;
  for (const auto& [key, votes] : counts) out.emplace(key, votes.result());
  return out;
}

std::map<DomainClassifier, double> agreement_error_rates(
    const ObservationSet& obs, const std::map<DomainInstance, double>& labels) {
  std::map<DomainClassifier, Mean> acc;
  for (const auto& [pred, value] : obs.approx_by_instance()) {
    auto it = labels.find({pred.domain, pred.instance});
    if (it == labels.end()) continue;
    acc[{pred.domain, pred.classifier}].add(std::abs(value - it->second));
  }
  std::map<DomainClassifier, double> out;
  for (const auto& [key, mean] : acc) out.emplace(key, mean.value());
  return out;
}

MetricsReport evaluate(const std::map<DomainClassifier, double>& error_estimates,
                       const std::map<DomainInstance, double>& target_estimates,
                       const ObservationSet& obs, const TruthSet& truth) {
  const auto sample = empirical_error_rates(obs, truth);

  std::set<DomainId> domains;
  for (const auto& [key, v] : sample) domains.insert(key.first);
  for (const auto& [key, v] : truth.labels) domains.insert(key.first);

  MetricsReport report;
  std::size_t error_hits = 0;
  for (const auto& [key, v] : sample) error_hits += error_estimates.contains(key);
  report.error_coverage =
      sample.empty() ? 0.0 : static_cast<double>(error_hits) / static_cast<double>(sample.size());
  std::size_t target_hits = 0;
  for (const auto& [key, v] : truth.labels) target_hits += target_estimates.contains(key);
  report.target_coverage =
      truth.empty() ? 0.0 : static_cast<double>(target_hits) / static_cast<double>(truth.size());

  Mean rank_mean, error_mean, l1_mean, auc_mean;
  for (DomainId d : domains) {
    DomainMetrics m;
    m.domain = d;
    std::vector<double> est, emp;
    for (auto it = sample.lower_bound({d, ClassifierId{0}});
         it != sample.end() && it->first.first == d; ++it) {
      auto e = error_estimates.find(it->first);
      if (e == error_estimates.end()) continue;
      est.push_back(e->second);
      emp.push_back(it->second);
    }
    m.classifiers = est.size();
    if (!est.empty()) {
      m.mad_error_rank = mad_error_rank(est, emp);
      m.mad_error = mad_error(est, emp);
      m.l1_error = *m.mad_error * static_cast<double>(est.size());
      rank_mean.add(*m.mad_error_rank);
      error_mean.add(*m.mad_error);
      l1_mean.add(*m.l1_error);
    }

    std::vector<double> scores;
    std::vector<int> labels;
    for (auto it = truth.labels.lower_bound({d, InstanceId{0}});
         it != truth.labels.end() && it->first.first == d; ++it) {
      auto t = target_estimates.find(it->first);
      if (t == target_estimates.end()) continue;
      scores.push_back(t->second);
      labels.push_back(it->second);
    }
    m.auc_target = auc_pr(scores, labels);
    if (m.auc_target) auc_mean.add(*m.auc_target);
    report.domains.push_back(m);
  }
  if (rank_mean.count) report.mad_error_rank = rank_mean.value();
  if (error_mean.count) report.mad_error = error_mean.value();
  if (l1_mean.count) report.l1_error = l1_mean.value();
  if (auc_mean.count) report.auc_target = auc_mean.value();
  return report;
}

}  // namespace errest
