#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace errest {

/// Raised when user-supplied data fails validation. Carries every problem
/// found, not just the first.
class InputError : public std::runtime_error {
 public:
  explicit InputError(std::string message)
      : std::runtime_error(message), problems_{std::move(message)} {}
  explicit InputError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

template <class Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t v) : value(v) {}
  friend constexpr auto operator<=>(Id, Id) = default;
};

struct DomainTag {};
struct ClassifierTag {};
struct InstanceTag {};

using DomainId = Id<DomainTag>;
using ClassifierId = Id<ClassifierTag>;
using InstanceId = Id<InstanceTag>;

/// Bijective string <-> dense integer mapping.
class NameTable {
 public:
  std::uint32_t intern(std::string_view name);
  std::optional<std::uint32_t> find(std::string_view name) const;
  const std::string& name(std::uint32_t id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Name tables for the three id spaces. Shared by every file parsed in a run
/// so that ids agree across predictions, labels and constraints.
struct Vocabulary {
  NameTable domains;
  NameTable classifiers;
  NameTable instances;

  DomainId domain(std::string_view n) { return DomainId{domains.intern(n)}; }
  ClassifierId classifier(std::string_view n) { return ClassifierId{classifiers.intern(n)}; }
  InstanceId instance(std::string_view n) { return InstanceId{instances.intern(n)}; }
};

/// Pairwise mutual-exclusion and subsumption constraints over domains.
class Ontology {
 public:
  using Pair = std::pair<DomainId, DomainId>;

  Ontology() = default;

  std::size_t domain_count() const { return domain_count_; }
  /// Canonical (first < second), sorted.
  const std::vector<Pair>& me_pairs() const { return me_pairs_; }
  /// (parent, child), sorted.
  const std::vector<Pair>& sub_pairs() const { return sub_pairs_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  bool mutually_exclusive(DomainId a, DomainId b) const;
  bool subsumes(DomainId parent, DomainId child) const;

  /// Domains ME-paired with d (either side).
  const std::vector<DomainId>& me_partners(DomainId d) const;
  /// Domains that d subsumes.
  const std::vector<DomainId>& sub_children(DomainId d) const;

  bool empty() const { return me_pairs_.empty() && sub_pairs_.empty(); }

 private:
  friend Ontology build_ontology(std::size_t, const std::vector<std::vector<DomainId>>&,
                                 const std::vector<Pair>&);

  std::size_t domain_count_ = 0;
  std::vector<Pair> me_pairs_;
  std::vector<Pair> sub_pairs_;
  std::vector<std::vector<DomainId>> me_adjacent_;
  std::vector<std::vector<DomainId>> sub_adjacent_;
  std::vector<std::string> warnings_;
};

/// Expands each ME set into all of its unordered pairs and validates every
/// reference against `domain_count`. Throws InputError listing all problems.
/// Subsumption cycles and pairs that are both ME and SUB are allowed but
/// recorded in Ontology::warnings().
Ontology build_ontology(std::size_t domain_count, const std::vector<std::vector<DomainId>>& me_sets,
                        const std::vector<Ontology::Pair>& sub_pairs);

enum class PredicateKind : std::uint8_t { ApproxOutput = 0, TargetOutput = 1, ErrorRate = 2 };

/// Identity of one soft-truth variable. Fields that a kind does not use are
/// zero, so the defaulted ordering is total.
struct GroundPredicate {
  PredicateKind kind = PredicateKind::ApproxOutput;
  DomainId domain;
  ClassifierId classifier;
  InstanceId instance;

  static GroundPredicate approx(DomainId d, ClassifierId j, InstanceId x) {
    return {PredicateKind::ApproxOutput, d, j, x};
  }
  static GroundPredicate target(DomainId d, InstanceId x) {
    return {PredicateKind::TargetOutput, d, ClassifierId{}, x};
  }
  static GroundPredicate error_rate(DomainId d, ClassifierId j) {
    return {PredicateKind::ErrorRate, d, j, InstanceId{}};
  }

  friend auto operator<=>(const GroundPredicate&, const GroundPredicate&) = default;
};

std::string describe(const GroundPredicate& p);
std::string describe(const GroundPredicate& p, const Vocabulary& vocab);

struct GroundPredicateHash {
  std::size_t operator()(const GroundPredicate& p) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(p.kind);
    h = h * 0x9E3779B97F4A7C15ULL + p.domain.value;
    h = h * 0x9E3779B97F4A7C15ULL + p.classifier.value;
    h = h * 0x9E3779B97F4A7C15ULL + p.instance.value;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

/// Observed predicate values. Insertion does not validate; call
/// validate_observations() to check the whole set at once.
class ObservationSet {
 public:
  using Entry = std::pair<GroundPredicate, double>;

  void set(const GroundPredicate& p, double value);
  std::optional<double> get(const GroundPredicate& p) const;
  bool contains(const GroundPredicate& p) const { return values_.contains(p); }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  /// All entries in GroundPredicate order.
  std::vector<Entry> sorted() const;
  /// All ApproxOutput entries ordered by (instance, domain, classifier).
  std::vector<Entry> approx_by_instance() const;
  std::size_t approx_count() const { return approx_count_; }

 private:
  std::unordered_map<GroundPredicate, double, GroundPredicateHash> values_;
  std::size_t approx_count_ = 0;
};

/// Throws InputError naming every out-of-range value and every ErrorRate key.
void validate_observations(const ObservationSet& obs);

}  // namespace errest
