#pragma once

// Random problem generators shared by the unit tests and the acceptance run.

#include <random>
#include <utility>
#include <vector>

#include "errest/logic.hpp"
#include "errest/model.hpp"

namespace errest::fixture {

inline GroundPredicate A(std::uint32_t d, std::uint32_t j, std::uint32_t x) {
  return GroundPredicate::approx(DomainId{d}, ClassifierId{j}, InstanceId{x});
}

inline LinearHinge hinge(std::vector<std::pair<std::uint32_t, double>> terms, double constant,
                         double weight = 1.0, int exponent = 1) {
  LinearHinge h;
  for (auto [i, c] : terms) h.terms.push_back({i, c});
  h.constant = constant;
  h.weight = weight;
  h.exponent = exponent;
  return h;
}

/// weight * max(a.y + b, 0)^p + (rho/2)|y - z|^2
inline double prox_objective(const LinearHinge& h, const std::vector<double>& y,
                             const std::vector<double>& z, double rho) {
  double l = h.constant, q = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    l += h.terms[i].coeff * y[i];
    q += (y[i] - z[i]) * (y[i] - z[i]);
  }
  const double v = std::max(l, 0.0);
  return h.weight * (h.exponent == 2 ? v * v : v) + 0.5 * rho * q;
}

struct RandomInstance {
  ObservationSet obs;
  Ontology ontology;
};

/// Mixed hard and soft outputs kept with probability `density`, plus random
/// ME pairs (p = 0.3) and SUB pairs (p = 0.2 per ordered pair).
inline RandomInstance random_instance(std::mt19937_64& rng, std::size_t domains,
                                      std::size_t classifiers, std::size_t instances,
                                      double density) {
  RandomInstance r;
  std::bernoulli_distribution keep(density), coin(0.5);
  std::uniform_real_distribution<double> u(0, 1);
  for (std::uint32_t x = 0; x < instances; ++x) {
    for (std::uint32_t d = 0; d < domains; ++d) {
      for (std::uint32_t j = 0; j < classifiers; ++j) {
        if (keep(rng)) r.obs.set(A(d, j, x), coin(rng) ? u(rng) : double(coin(rng)));
      }
    }
  }
  std::vector<std::vector<DomainId>> me;
  std::vector<Ontology::Pair> sub;
  for (std::uint32_t a = 0; a < domains; ++a) {
    for (std::uint32_t b = 0; b < domains; ++b) {
      if (a == b) continue;
      const double roll = u(rng);
      if (a < b && roll < 0.3) me.push_back({DomainId{a}, DomainId{b}});
      if (roll > 0.8) sub.emplace_back(DomainId{a}, DomainId{b});
    }
  }
  r.ontology = build_ontology(domains, me, sub);
  return r;
}

}  // namespace errest::fixture
