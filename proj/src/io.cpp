#include "errest/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <vector>

namespace errest {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

/// Drives a line-oriented reader: strips '\r', skips blank and comment lines,
/// and prefixes problems with the source position.
class LineReader {
 public:
  LineReader(std::istream& in, std::string_view source) : in_(in), source_(source) {}

  bool next() {
    while (std::getline(in_, line_)) {
      ++number_;
      if (!line_.empty() && line_.back() == '\r') line_.pop_back();
      if (line_.empty() || line_.front() == '#') continue;
      return true;
    }
    return false;
  }

  std::string_view line() const { return line_; }
  std::size_t number() const { return number_; }

  void fail(const std::string& message) {
    problems_.push_back(source_ + ":" + std::to_string(number_) + ": " + message);
  }

  bool expect_fields(const std::vector<std::string_view>& fields, std::size_t n) {
    if (fields.size() == n) {
      for (auto f : fields) {
        if (f.empty()) {
          fail("empty field");
          return false;
        }
      }
      return true;
    }
    fail("expected " + std::to_string(n) + " tab-separated fields, found " +
         std::to_string(fields.size()));
    return false;
  }

  void finish() {
    if (in_.bad()) problems_.push_back(source_ + ": read error");
    if (!problems_.empty()) throw InputError(std::move(problems_));
  }

 private:
  std::istream& in_;
  std::string source_;
  std::string line_;
  std::size_t number_ = 0;
  std::vector<std::string> problems_;
};

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::string shortest(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

std::string format_fixed(double value, int decimals) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
  std::string s(buf, end);
  if (s.starts_with('-') && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

ObservationSet read_predictions(std::istream& in, Vocabulary& vocab, std::string_view source) {
  LineReader reader(in, source);
  ObservationSet obs;
  std::unordered_map<GroundPredicate, std::size_t, GroundPredicateHash> first_line;
  while (reader.next()) {
    auto f = split(reader.line(), '\t');
    if (!reader.expect_fields(f, 4)) continue;
    auto value = parse_double(f[3]);
    if (!value) {
      reader.fail("value '" + std::string(f[3]) + "' is not a decimal number");
      continue;
    }
    if (*value < 0.0 || *value > 1.0) {
      reader.fail("value " + std::string(f[3]) + " outside [0,1]");
      continue;
    }
    const auto p =
        GroundPredicate::approx(vocab.domain(f[1]), vocab.classifier(f[2]), vocab.instance(f[0]));
    auto [it, fresh] = first_line.emplace(p, reader.number());
    if (!fresh) {
      reader.fail("duplicate (instance, domain, classifier) key, first seen at line " +
                  std::to_string(it->second));
      continue;
    }
    obs.set(p, *value);
  }
  reader.finish();
  return obs;
}

ObservationSet parse_predictions(const std::filesystem::path& path, Vocabulary& vocab) {
  auto in = open_input(path);
  return read_predictions(in, vocab, path.string());
}

void write_predictions(std::ostream& out, const ObservationSet& obs, const Vocabulary& vocab) {
  for (const auto& [p, v] : obs.approx_by_instance()) {
    out << vocab.instances.name(p.instance.value) << '\t' << vocab.domains.name(p.domain.value)
        << '\t' << vocab.classifiers.name(p.classifier.value) << '\t' << shortest(v) << '\n';
  }
}

Ontology read_constraints(std::istream& in, Vocabulary& vocab, std::string_view source) {
  LineReader reader(in, source);
  std::vector<std::vector<DomainId>> me_sets;
  std::vector<Ontology::Pair> sub_pairs;
  while (reader.next()) {
    auto f = split(reader.line(), '\t');
    if (f[0] == "ME") {
      if (!reader.expect_fields(f, 2)) continue;
      auto names = split(f[1], ',');
      std::set<std::string_view> distinct(names.begin(), names.end());
      if (distinct.contains("")) {
        reader.fail("empty domain name in ME set");
        continue;
      }
      if (distinct.size() != names.size()) {
        reader.fail("ME set repeats a domain");
        continue;
      }
      if (names.size() < 2) {
        reader.fail("ME set needs at least 2 domains");
        continue;
      }
      std::vector<DomainId> set;
      for (auto n : names) set.push_back(vocab.domain(n));
      me_sets.push_back(std::move(set));
    } else if (f[0] == "SUB") {
      if (!reader.expect_fields(f, 3)) continue;
      if (f[1] == f[2]) {
        reader.fail("domain '" + std::string(f[1]) + "' subsumes itself");
        continue;
      }
      sub_pairs.emplace_back(vocab.domain(f[1]), vocab.domain(f[2]));
    } else {
      reader.fail("unknown directive '" + std::string(f[0]) + "'");
    }
  }
  reader.finish();
  return build_ontology(vocab.domains.size(), me_sets, sub_pairs);
}

Ontology parse_constraints(const std::filesystem::path& path, Vocabulary& vocab) {
  auto in = open_input(path);
  return read_constraints(in, vocab, path.string());
}

void write_constraints(std::ostream& out, const Ontology& ontology, const Vocabulary& vocab) {
  for (const auto& [a, b] : ontology.me_pairs()) {
    out << "ME\t" << vocab.domains.name(a.value) << ',' << vocab.domains.name(b.value) << '\n';
  }
  for (const auto& [parent, child] : ontology.sub_pairs()) {
    out << "SUB\t" << vocab.domains.name(parent.value) << '\t' << vocab.domains.name(child.value)
        << '\n';
  }
}

TruthSet read_labels(std::istream& in, Vocabulary& vocab, std::string_view source) {
  LineReader reader(in, source);
  TruthSet truth;
  std::map<DomainInstance, std::size_t> first_line;
  while (reader.next()) {
    auto f = split(reader.line(), '\t');
    if (!reader.expect_fields(f, 3)) continue;
    if (f[2] != "0" && f[2] != "1") {
      reader.fail("label '" + std::string(f[2]) + "' is not 0 or 1");
      continue;
    }
    const DomainId d = vocab.domain(f[1]);
    const InstanceId x = vocab.instance(f[0]);
    auto [it, fresh] = first_line.emplace(DomainInstance{d, x}, reader.number());
    if (!fresh) {
      reader.fail("duplicate (instance, domain) key, first seen at line " +
                  std::to_string(it->second));
      continue;
    }
    truth.set(d, x, f[2] == "1" ? 1 : 0);
  }
  reader.finish();
  return truth;
}

TruthSet parse_labels(const std::filesystem::path& path, Vocabulary& vocab) {
  auto in = open_input(path);
  return read_labels(in, vocab, path.string());
}

void write_labels(std::ostream& out, const TruthSet& truth, const Vocabulary& vocab) {
  // Instance-major order so that files read like the predictions file.
  std::vector<std::pair<InstanceId, DomainId>> keys;
  keys.reserve(truth.size());
  for (const auto& [key, label] : truth.labels) keys.emplace_back(key.second, key.first);
  std::sort(keys.begin(), keys.end());
  for (const auto& [x, d] : keys) {
    out << vocab.instances.name(x.value) << '\t' << vocab.domains.name(d.value) << '\t'
        << *truth.get(d, x) << '\n';
  }
}

void write_error_rates(std::ostream& out, const std::map<DomainClassifier, double>& rates,
                       const Vocabulary& vocab) {
  for (const auto& [key, v] : rates) {
    out << vocab.domains.name(key.first.value) << '\t' << vocab.classifiers.name(key.second.value)
        << '\t' << format_fixed(v) << '\n';
  }
}

std::map<DomainClassifier, double> read_error_rates(std::istream& in, Vocabulary& vocab,
                                                    std::string_view source) {
  LineReader reader(in, source);
  std::map<DomainClassifier, double> rates;
  while (reader.next()) {
    auto f = split(reader.line(), '\t');
    if (!reader.expect_fields(f, 3)) continue;
    auto v = parse_double(f[2]);
    if (!v || *v < 0.0 || *v > 1.0) {
      reader.fail("estimate '" + std::string(f[2]) + "' is not a number in [0,1]");
      continue;
    }
    if (!rates.emplace(DomainClassifier{vocab.domain(f[0]), vocab.classifier(f[1])}, *v).second) {
      reader.fail("duplicate (domain, classifier) key");
    }
  }
  reader.finish();
  return rates;
}

void write_targets(std::ostream& out, const Estimates& estimates, const Vocabulary& vocab) {
  std::vector<std::pair<InstanceId, DomainId>> keys;
  keys.reserve(estimates.target_soft.size());
  for (const auto& [key, v] : estimates.target_soft) keys.emplace_back(key.second, key.first);
  std::sort(keys.begin(), keys.end());
  for (const auto& [x, d] : keys) {
    out << vocab.instances.name(x.value) << '\t' << vocab.domains.name(d.value) << '\t'
        << format_fixed(estimates.target_soft.at({d, x})) << '\t'
        << estimates.target_hard.at({d, x}) << '\n';
  }
}

std::map<DomainInstance, double> read_targets(std::istream& in, Vocabulary& vocab,
                                              std::string_view source) {
  LineReader reader(in, source);
  std::map<DomainInstance, double> targets;
  while (reader.next()) {
    auto f = split(reader.line(), '\t');
    if (!reader.expect_fields(f, 4)) continue;
    auto v = parse_double(f[2]);
    if (!v || *v < 0.0 || *v > 1.0) {
      reader.fail("soft value '" + std::string(f[2]) + "' is not a number in [0,1]");
      continue;
    }
    if (f[3] != "0" && f[3] != "1") {
      reader.fail("hard value '" + std::string(f[3]) + "' is not 0 or 1");
      continue;
    }
    if (!targets.emplace(DomainInstance{vocab.domain(f[1]), vocab.instance(f[0])}, *v).second) {
      reader.fail("duplicate (instance, domain) key");
    }
  }
  reader.finish();
  return targets;
}

EstimatorConfig RunConfig::estimator_config() const {
  EstimatorConfig c;
  c.weights.prior_weight = prior_weight;
  c.weights.rule_weight = rule_weight;
  c.weights.exponent = exponent;
  c.solver.rho = rho;
  c.solver.eps_abs = eps_abs;
  c.solver.eps_rel = eps_rel;
  c.solver.max_iterations = max_iterations;
  c.solver.mode = stochastic > 0 ? SamplingMode::Stochastic : SamplingMode::Full;
  c.solver.sample_size = stochastic;
  c.solver.seed = seed;
  c.threshold = threshold;
  return c;
}

void RunConfig::validate() const {
  std::vector<std::string> problems;
  auto need = [&](bool ok, const char* what) {
    if (!ok) problems.emplace_back(what);
  };
  need(std::isfinite(prior_weight) && prior_weight >= 0.0, "prior_weight must be >= 0");
  need(std::isfinite(rule_weight) && rule_weight >= 0.0, "rule_weight must be >= 0");
  need(exponent == 1 || exponent == 2, "exponent must be 1 or 2");
  need(std::isfinite(rho) && rho > 0.0, "rho must be > 0");
  need(std::isfinite(eps_abs) && eps_abs > 0.0, "eps_abs must be > 0");
  need(std::isfinite(eps_rel) && eps_rel >= 0.0, "eps_rel must be >= 0");
  need(max_iterations > 0, "max_iterations must be > 0");
  need(threshold >= 0.0 && threshold <= 1.0, "threshold must be in [0,1]");
  if (!problems.empty()) throw InputError(std::move(problems));
}

nlohmann::json to_json(const RunConfig& c) {
  return {
      {"prior_weight", c.prior_weight},
      {"rule_weight", c.rule_weight},
      {"exponent", c.exponent},
      {"rho", c.rho},
      {"eps_abs", c.eps_abs},
      {"eps_rel", c.eps_rel},
      {"max_iterations", c.max_iterations},
      {"stochastic", c.stochastic},
      {"seed", c.seed},
      {"threshold", c.threshold},
  };
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  RunConfig c;
  std::vector<std::string> problems;
  auto take = [&](const char* key, auto& field) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
      it->get_to(field);
    } catch (const nlohmann::json::exception& e) {
      problems.push_back(std::string("config key '") + key + "': " + e.what());
    }
  };
  static const std::set<std::string> known = {
      "prior_weight", "rule_weight",    "exponent",   "rho",  "eps_abs",
      "eps_rel",      "max_iterations", "stochastic", "seed", "threshold"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) problems.push_back("unknown config key '" + key + "'");
  }
  take("prior_weight", c.prior_weight);
  take("rule_weight", c.rule_weight);
  take("exponent", c.exponent);
  take("rho", c.rho);
  take("eps_abs", c.eps_abs);
  take("eps_rel", c.eps_rel);
  take("max_iterations", c.max_iterations);
  take("stochastic", c.stochastic);
  take("seed", c.seed);
  take("threshold", c.threshold);
  if (!problems.empty()) throw InputError(std::move(problems));
  return c;
}

nlohmann::json to_json(const Diagnostics& d, bool include_timing) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& t : d.trace) {
    trace.push_back({{"iteration", t.iteration},
                     {"objective", t.objective},
                     {"primal_residual", t.primal_residual},
                     {"dual_residual", t.dual_residual},
                     {"subproblem_solves", t.subproblem_solves}});
  }
  nlohmann::json j = {
      {"iterations", d.iterations},
      {"converged", d.converged},
      {"primal_residual", d.primal_residual},
      {"dual_residual", d.dual_residual},
      {"subproblem_solves", d.subproblem_solves},
      {"unconstrained_variables", d.unconstrained_variables},
      {"trace", std::move(trace)},
  };
  if (include_timing) j["seconds"] = d.seconds;
  return j;
}

namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const MetricsReport& r, const Vocabulary& vocab) {
  nlohmann::json domains = nlohmann::json::array();
  for (const auto& m : r.domains) {
    domains.push_back({{"domain", vocab.domains.name(m.domain.value)},
                       {"classifiers", m.classifiers},
                       {"mad_error_rank", optional_number(m.mad_error_rank)},
                       {"mad_error", optional_number(m.mad_error)},
                       {"l1_error", optional_number(m.l1_error)},
                       {"auc_target", optional_number(m.auc_target)}});
  }
  return {
      {"average",
       {{"mad_error_rank", optional_number(r.mad_error_rank)},
        {"mad_error", optional_number(r.mad_error)},
        {"l1_error", optional_number(r.l1_error)},
        {"auc_target", optional_number(r.auc_target)}}},
      {"coverage", {{"error_rates", r.error_coverage}, {"targets", r.target_coverage}}},
      {"domains", std::move(domains)},
  };
}

}  // namespace errest
