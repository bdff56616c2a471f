#include "errest/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace errest {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::ostringstream out;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    if (i) out << "; ";
    out << problems[i];
  }
  return out.str();
}

const std::vector<DomainId>& empty_domains() {
  static const std::vector<DomainId> none;
  return none;
}

}  // namespace

InputError::InputError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

std::uint32_t NameTable::intern(std::string_view name) {
  auto it = index_.find(std::string(name));
  if (it != index_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  index_.emplace(names_.back(), id);
  return id;
}

std::optional<std::uint32_t> NameTable::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Ontology::mutually_exclusive(DomainId a, DomainId b) const {
  if (b < a) std::swap(a, b);
  return std::binary_search(me_pairs_.begin(), me_pairs_.end(), Pair{a, b});
}

bool Ontology::subsumes(DomainId parent, DomainId child) const {
  return std::binary_search(sub_pairs_.begin(), sub_pairs_.end(), Pair{parent, child});
}

const std::vector<DomainId>& Ontology::me_partners(DomainId d) const {
  if (d.value >= me_adjacent_.size()) return empty_domains();
  return me_adjacent_[d.value];
}

const std::vector<DomainId>& Ontology::sub_children(DomainId d) const {
  if (d.value >= sub_adjacent_.size()) return empty_domains();
  return sub_adjacent_[d.value];
}

Ontology build_ontology(std::size_t domain_count, const std::vector<std::vector<DomainId>>& me_sets,
                        const std::vector<Ontology::Pair>& sub_pairs) {
  std::vector<std::string> problems;
  auto check = [&](DomainId d, const std::string& where) {
    if (d.value >= domain_count) {
      problems.push_back(where + ": unknown domain id " + std::to_string(d.value));
      return false;
    }
    return true;
  };

  std::set<Ontology::Pair> me;
  for (std::size_t s = 0; s < me_sets.size(); ++s) {
    const auto& set = me_sets[s];
    std::string where = "ME set " + std::to_string(s);
    std::set<DomainId> distinct(set.begin(), set.end());
    if (distinct.size() < 2) {
      problems.push_back(where + ": needs at least 2 distinct domains");
    }
    std::vector<bool> known(set.size());
    for (std::size_t a = 0; a < set.size(); ++a) known[a] = check(set[a], where);
    for (std::size_t a = 0; a < set.size(); ++a) {
      if (!known[a]) continue;
      for (std::size_t b = a + 1; b < set.size(); ++b) {
        if (!known[b]) continue;
        if (set[a] == set[b]) {
          problems.push_back(where + ": self-pair (" + std::to_string(set[a].value) + ", " +
                             std::to_string(set[b].value) + ")");
          continue;
        }
        me.insert(std::minmax(set[a], set[b]));
      }
    }
  }

  std::set<Ontology::Pair> sub;
  for (const auto& [parent, child] : sub_pairs) {
    std::string where =
        "SUB pair (" + std::to_string(parent.value) + ", " + std::to_string(child.value) + ")";
    bool ok = check(parent, where) & check(child, where);
    if (!ok) continue;
    if (parent == child) {
      problems.push_back(where + ": self-subsumption");
      continue;
    }
    sub.insert({parent, child});
  }

  if (!problems.empty()) throw InputError(std::move(problems));

  Ontology o;
  o.domain_count_ = domain_count;
  o.me_pairs_.assign(me.begin(), me.end());
  o.sub_pairs_.assign(sub.begin(), sub.end());
  o.me_adjacent_.resize(domain_count);
  o.sub_adjacent_.resize(domain_count);
  for (const auto& [a, b] : o.me_pairs_) {
    o.me_adjacent_[a.value].push_back(b);
    o.me_adjacent_[b.value].push_back(a);
  }
  for (auto& adj : o.me_adjacent_) std::sort(adj.begin(), adj.end());
  for (const auto& [parent, child] : o.sub_pairs_) {
    o.sub_adjacent_[parent.value].push_back(child);
    if (me.contains(std::minmax(parent, child))) {
      o.warnings_.push_back("domains " + std::to_string(parent.value) + " and " +
                            std::to_string(child.value) +
                            " are both mutually exclusive and in a subsumption pair");
    }
  }

  // Cycle check over the subsumption graph (iterative three-colour DFS).
  std::vector<int> colour(domain_count, 0);
  for (std::size_t root = 0; root < domain_count; ++root) {
    if (colour[root]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    colour[root] = 1;
    bool reported = false;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& children = o.sub_adjacent_[node];
      if (next == children.size()) {
        colour[node] = 2;
        stack.pop_back();
        continue;
      }
      std::size_t c = children[next++].value;
      if (colour[c] == 1 && !reported) {
        o.warnings_.push_back("subsumption cycle through domain " + std::to_string(c));
        reported = true;
      } else if (colour[c] == 0) {
        colour[c] = 1;
        stack.emplace_back(c, 0);
      }
    }
  }
  return o;
}

std::string describe(const GroundPredicate& p) {
  std::ostringstream out;
  switch (p.kind) {
    case PredicateKind::ApproxOutput:
      out << "ApproxOutput(" << p.domain.value << "," << p.classifier.value << ","
          << p.instance.value << ")";
      break;
    case PredicateKind::TargetOutput:
      out << "TargetOutput(" << p.domain.value << "," << p.instance.value << ")";
      break;
    case PredicateKind::ErrorRate:
      out << "ErrorRate(" << p.domain.value << "," << p.classifier.value << ")";
      break;
  }
  return out.str();
}

std::string describe(const GroundPredicate& p, const Vocabulary& vocab) {
  auto safe = [](const NameTable& t, std::uint32_t id) {
    return id < t.size() ? t.name(id) : std::to_string(id);
  };
  std::ostringstream out;
  switch (p.kind) {
    case PredicateKind::ApproxOutput:
      out << "ApproxOutput(" << safe(vocab.domains, p.domain.value) << ","
          << safe(vocab.classifiers, p.classifier.value) << ","
          << safe(vocab.instances, p.instance.value) << ")";
      break;
    case PredicateKind::TargetOutput:
      out << "TargetOutput(" << safe(vocab.domains, p.domain.value) << ","
          << safe(vocab.instances, p.instance.value) << ")";
      break;
    case PredicateKind::ErrorRate:
      out << "ErrorRate(" << safe(vocab.domains, p.domain.value) << ","
          << safe(vocab.classifiers, p.classifier.value) << ")";
      break;
  }
  return out.str();
}

void ObservationSet::set(const GroundPredicate& p, double value) {
  auto [it, inserted] = values_.insert_or_assign(p, value);
  if (inserted && p.kind == PredicateKind::ApproxOutput) ++approx_count_;
}

std::optional<double> ObservationSet::get(const GroundPredicate& p) const {
  auto it = values_.find(p);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::vector<ObservationSet::Entry> ObservationSet::sorted() const {
  std::vector<Entry> out(values_.begin(), values_.end());
  std::sort(out.begin(), out.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  return out;
}

std::vector<ObservationSet::Entry> ObservationSet::approx_by_instance() const {
  std::vector<Entry> out;
  out.reserve(approx_count_);
  for (const auto& e : values_) {
    if (e.first.kind == PredicateKind::ApproxOutput) out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    const auto& p = a.first;
    const auto& q = b.first;
    return std::tie(p.instance, p.domain, p.classifier) <
           std::tie(q.instance, q.domain, q.classifier);
  });
  return out;
}

void validate_observations(const ObservationSet& obs) {
  std::vector<std::string> problems;
  for (const auto& [pred, value] : obs.sorted()) {
    if (pred.kind == PredicateKind::ErrorRate) {
      problems.push_back(describe(pred) + ": error-rate predicates cannot be observed");
    }
    if (!(value >= 0.0 && value <= 1.0)) {
      problems.push_back(describe(pred) + ": value " + std::to_string(value) + " outside [0,1]");
    }
  }
  if (!problems.empty()) throw InputError(std::move(problems));
}

}  // namespace errest
