#include "errest/synth.hpp"

#include <random>

namespace errest {

bool satisfies(const Ontology& ontology, const std::vector<int>& labels) {
  for (const auto& [a, b] : ontology.me_pairs()) {
    if (labels[a.value] == 1 && labels[b.value] == 1) return false;
  }
  for (const auto& [parent, child] : ontology.sub_pairs()) {
    if (labels[child.value] == 1 && labels[parent.value] == 0) return false;
  }
  return true;
}

SynthData synth_generate(const SynthSpec& spec) {
  std::vector<std::string> problems;
  if (spec.ontology.domain_count() > spec.domains) {
    problems.push_back("ontology references more domains than requested");
  }
  if (spec.error_rates.size() != spec.domains) {
    problems.push_back("error_rates must have one row per domain");
  }
  for (const auto& row : spec.error_rates) {
    if (row.size() != spec.classifiers) {
      problems.push_back("error_rates rows must have one entry per classifier");
      break;
    }
    for (double e : row) {
      if (!(e >= 0.0 && e <= 1.0)) problems.push_back("error rate outside [0,1]");
    }
  }
  if (!(spec.density >= 0.0 && spec.density <= 1.0)) {
    problems.push_back("density outside [0,1]");
  }
  if (!(spec.positive_rate >= 0.0 && spec.positive_rate <= 1.0)) {
    problems.push_back("positive rate outside [0,1]");
  }
  if (!problems.empty()) throw InputError(std::move(problems));

  std::mt19937_64 rng(spec.seed);
  std::bernoulli_distribution positive(spec.positive_rate);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.2);

  // Soft outputs: distance from the chosen side, |N(0, 0.2)| truncated below 0.5.
  auto soft_offset = [&] {
    for (;;) {
      double t = std::abs(noise(rng));
      if (t < 0.5) return t;
    }
  };

  SynthData data;
  std::vector<int> labels(spec.domains);
  for (std::size_t x = 0; x < spec.instances; ++x) {
    bool found = false;
    for (std::size_t attempt = 0; attempt < spec.max_attempts; ++attempt) {
      for (auto& l : labels) l = positive(rng) ? 1 : 0;
      if (satisfies(spec.ontology, labels)) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw InputError("no constraint-consistent label vector found for instance " +
                       std::to_string(x) + " after " + std::to_string(spec.max_attempts) +
                       " attempts");
    }
    const InstanceId instance{static_cast<std::uint32_t>(x)};
    for (std::size_t d = 0; d < spec.domains; ++d) {
      const DomainId domain{static_cast<std::uint32_t>(d)};
      data.truth.set(domain, instance, labels[d]);
      for (std::size_t j = 0; j < spec.classifiers; ++j) {
        const bool flip = unit(rng) < spec.error_rates[d][j];
        const bool keep = unit(rng) < spec.density;
        const int side = flip ? 1 - labels[d] : labels[d];
        double value = side;
        if (spec.soft) {
          const double t = soft_offset();
          value = side == 1 ? 1.0 - t : t;
        }
        if (keep) {
          data.observations.set(GroundPredicate::approx(
                                    domain, ClassifierId{static_cast<std::uint32_t>(j)}, instance),
                                value);
        }
      }
    }
  }
  return data;
}

std::vector<std::vector<double>> uniform_error_rates(std::size_t domains, std::size_t classifiers,
                                                     double low, double high, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(low, high);
  std::vector<std::vector<double>> rates(domains, std::vector<double>(classifiers));
  for (auto& row : rates) {
    for (auto& e : row) e = dist(rng);
  }
  return rates;
}

}  // namespace errest
