#include "errest/io.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace errest {
namespace {

std::string problems_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    std::string all;
    for (const auto& p : e.problems()) all += p + "\n";
    return all;
  }
  return "";
}

TEST(Predictions, ParsesRecord) {
  Vocabulary v;
  std::istringstream in("np1\tcity\tcpl\t0.92\n");
  auto obs = read_predictions(in, v);
  ASSERT_EQ(obs.size(), 1u);
  auto p = GroundPredicate::approx(DomainId{*v.domains.find("city")},
                                   ClassifierId{*v.classifiers.find("cpl")},
                                   InstanceId{*v.instances.find("np1")});
  EXPECT_DOUBLE_EQ(*obs.get(p), 0.92);
}

TEST(Predictions, SkipsCommentsBlankLinesAndCarriageReturns) {
  Vocabulary v;
  std::istringstream in("# header\n\nnp1\tcity\tcpl\t1\r\n#np2\tcity\tcpl\t0\nnp2\tcity\tcpl\t0\n");
  auto obs = read_predictions(in, v);
  EXPECT_EQ(obs.size(), 2u);
  EXPECT_EQ(v.instances.size(), 2u);
}

TEST(Predictions, RangeErrorNamesLine) {
  Vocabulary v;
  std::istringstream in("np1\tcity\tcpl\t0.5\nnp2\tcity\tcpl\t1.2\n");
  auto msg = problems_of([&] { read_predictions(in, v, "p.tsv"); });
  EXPECT_NE(msg.find("p.tsv:2:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("outside [0,1]"), std::string::npos) << msg;
}

TEST(Predictions, DuplicateKeyNamesBothLines) {
  Vocabulary v;
  std::istringstream in("np1\tcity\tcpl\t0.5\n# c\nnp1\tcity\tcpl\t0.6\n");
  auto msg = problems_of([&] { read_predictions(in, v, "p.tsv"); });
  EXPECT_NE(msg.find("p.tsv:3:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 1"), std::string::npos) << msg;
}

TEST(Predictions, CollectsEveryMalformedLine) {
  Vocabulary v;
  std::istringstream in(
      "np1\tcity\tcpl\n"          // too few fields
      "np1\tcity\tcpl\t0.5\tx\n"  // too many
      "np1\tcity\tcpl\tabc\n"     // not a number
      "np1\tcity\tcpl\t0.5x\n"    // trailing junk
      "np1\t\tcpl\t0.5\n"         // empty field
      "np1\tcity\tcpl\tnan\n"     // not finite
      "np1\tcity\tcpl\t-0.1\n");  // range
  try {
    read_predictions(in, v);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(e.problems().size(), 7u);
  }
}

TEST(Predictions, RoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  Vocabulary v;
  ObservationSet obs;
  for (int i = 0; i < 300; ++i) {
    const auto x = v.instance("np" + std::to_string(rng() % 50));
    const auto d = v.domain("dom" + std::to_string(rng() % 5));
    const auto j = v.classifier("clf" + std::to_string(rng() % 4));
    obs.set(GroundPredicate::approx(d, j, x), i % 3 ? u(rng) : double(rng() % 2));
  }
  std::ostringstream out;
  write_predictions(out, obs, v);
  Vocabulary v2;
  std::istringstream in(out.str());
  auto back = read_predictions(in, v2);
  ASSERT_EQ(back.size(), obs.size());
  for (const auto& [p, value] : obs.sorted()) {
    auto q = GroundPredicate::approx(
        DomainId{*v2.domains.find(v.domains.name(p.domain.value))},
        ClassifierId{*v2.classifiers.find(v.classifiers.name(p.classifier.value))},
        InstanceId{*v2.instances.find(v.instances.name(p.instance.value))});
    EXPECT_EQ(*back.get(q), value);
  }
}

TEST(Constraints, Examples) {
  Vocabulary v;
  std::istringstream in("ME\tBird,Fish,Mammal\nSUB\tAnimal\tVertebrate\n");
  auto o = read_constraints(in, v);
  EXPECT_EQ(o.me_pairs().size(), 3u);
  const DomainId animal{*v.domains.find("Animal")}, vert{*v.domains.find("Vertebrate")};
  EXPECT_TRUE(o.subsumes(animal, vert));
  EXPECT_FALSE(o.subsumes(vert, animal));
}

TEST(Constraints, BundledFiles) {
  Vocabulary v7;
  auto nell7 = parse_constraints(ERREST_DATA_DIR "/nell7_constraints.tsv", v7);
  EXPECT_EQ(nell7.me_pairs().size(), 21u);
  EXPECT_EQ(v7.domains.size(), 7u);

  Vocabulary v11;
  auto nell11 = parse_constraints(ERREST_DATA_DIR "/nell11_constraints.tsv", v11);
  EXPECT_EQ(v11.domains.size(), 11u);
  EXPECT_EQ(nell11.me_pairs().size(), 1u + 1u + 3u + 6u);
  EXPECT_EQ(nell11.sub_pairs().size(), 9u);
  EXPECT_TRUE(nell11.warnings().empty());
}

TEST(Constraints, Errors) {
  auto fails = [](const char* text) {
    Vocabulary v;
    std::istringstream in(text);
    return !problems_of([&] { read_constraints(in, v); }).empty();
  };
  EXPECT_TRUE(fails("XOR\ta,b\n"));
  EXPECT_TRUE(fails("ME\ta\n"));
  EXPECT_TRUE(fails("ME\ta,a\n"));
  EXPECT_TRUE(fails("ME\ta,,b\n"));
  EXPECT_TRUE(fails("SUB\ta\ta\n"));
  EXPECT_TRUE(fails("SUB\ta\n"));
  EXPECT_TRUE(fails("ME\ta,b\tc\n"));
  EXPECT_FALSE(fails("# only a comment\n"));
}

TEST(Constraints, RoundTrip) {
  Vocabulary v;
  auto o = parse_constraints(ERREST_DATA_DIR "/nell11_constraints.tsv", v);
  std::ostringstream out;
  write_constraints(out, o, v);
  Vocabulary v2;
  std::istringstream in(out.str());
  auto back = read_constraints(in, v2);
  auto names = [](const std::vector<Ontology::Pair>& pairs, const Vocabulary& voc, bool sym) {
    std::set<std::pair<std::string, std::string>> s;
    for (auto [a, b] : pairs) {
      auto x = voc.domains.name(a.value), y = voc.domains.name(b.value);
      if (sym && y < x) std::swap(x, y);
      s.emplace(x, y);
    }
    return s;
  };
  EXPECT_EQ(names(o.me_pairs(), v, true), names(back.me_pairs(), v2, true));
  EXPECT_EQ(names(o.sub_pairs(), v, false), names(back.sub_pairs(), v2, false));
  std::ostringstream again;
  write_constraints(again, back, v2);
  Vocabulary v3;
  std::istringstream in2(again.str());
  auto third = read_constraints(in2, v3);
  EXPECT_EQ(names(third.me_pairs(), v3, true), names(back.me_pairs(), v2, true));
}

TEST(Labels, Examples) {
  Vocabulary v;
  std::istringstream in("np1\tcity\t1\n");
  auto t = read_labels(in, v);
  EXPECT_EQ(t.get(DomainId{0}, InstanceId{0}), 1);

  std::istringstream soft("np1\tcity\t0.7\n");
  EXPECT_THROW(read_labels(soft, v), InputError);
  std::istringstream dup("np1\tcity\t1\nnp1\tcity\t0\n");
  EXPECT_THROW(read_labels(dup, v), InputError);
  std::istringstream empty("");
  EXPECT_TRUE(read_labels(empty, v).empty());
}

TEST(Labels, RoundTrip) {
  std::mt19937_64 rng(2);
  Vocabulary v;
  TruthSet truth;
  for (int i = 0; i < 200; ++i) {
    truth.set(v.domain("d" + std::to_string(rng() % 6)),
              v.instance("x" + std::to_string(rng() % 40)), rng() % 2);
  }
  std::ostringstream out;
  write_labels(out, truth, v);
  Vocabulary v2;
  std::istringstream in(out.str());
  auto back = read_labels(in, v2);
  ASSERT_EQ(back.size(), truth.size());
  for (const auto& [key, label] : truth.labels) {
    auto d = v2.domains.find(v.domains.name(key.first.value));
    auto x = v2.instances.find(v.instances.name(key.second.value));
    EXPECT_EQ(back.get(DomainId{*d}, InstanceId{*x}), label);
  }
}

TEST(Estimates, WriteAndReadBack) {
  Vocabulary v;
  const auto d = v.domain("city");
  const auto j = v.classifier("cpl");
  const auto x = v.instance("np1");
  Estimates e;
  e.error_rates[{d, j}] = 0.1234567;
  e.target_soft[{d, x}] = 0.75;
  e.target_hard[{d, x}] = 1;
  std::ostringstream rates, targets;
  write_error_rates(rates, e.error_rates, v);
  write_targets(targets, e, v);
  EXPECT_EQ(rates.str(), "city\tcpl\t0.123457\n");
  EXPECT_EQ(targets.str(), "np1\tcity\t0.750000\t1\n");
  std::istringstream rin(rates.str()), tin(targets.str());
  EXPECT_NEAR(read_error_rates(rin, v).at({d, j}), 0.123457, 1e-12);
  EXPECT_EQ(read_targets(tin, v).at({d, x}), 0.75);
  std::istringstream bad("np1\tcity\t0.5\t2\n");
  EXPECT_THROW(read_targets(bad, v), InputError);
}

TEST(FormatFixed, NoNegativeZero) {
  EXPECT_EQ(format_fixed(-1e-9), "0.000000");
  EXPECT_EQ(format_fixed(0.5), "0.500000");
  EXPECT_EQ(format_fixed(1.0, 2), "1.00");
  EXPECT_EQ(format_fixed(-0.25, 2), "-0.25");
}

TEST(RunConfig, JsonRoundTrip) {
  RunConfig c;
  c.prior_weight = 0.3;
  c.exponent = 2;
  c.stochastic = 17;
  c.seed = 99;
  c.threshold = 0.4;
  auto back = run_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  auto partial = run_config_from_json(nlohmann::json{{"rho", 2.5}});
  EXPECT_EQ(partial.rho, 2.5);
  EXPECT_EQ(partial.prior_weight, RunConfig{}.prior_weight);
  EXPECT_THROW(run_config_from_json(nlohmann::json{{"rhoo", 1}}), InputError);
  EXPECT_THROW(run_config_from_json(nlohmann::json{{"rho", "fast"}}), InputError);
  EXPECT_THROW(run_config_from_json(nlohmann::json::array()), InputError);
}

TEST(RunConfig, MapsToEstimatorConfig) {
  RunConfig c;
  c.stochastic = 5;
  c.exponent = 2;
  auto e = c.estimator_config();
  EXPECT_EQ(e.solver.mode, SamplingMode::Stochastic);
  EXPECT_EQ(e.solver.sample_size, 5u);
  EXPECT_EQ(e.weights.exponent, 2);
  EXPECT_EQ(RunConfig{}.estimator_config().solver.mode, SamplingMode::Full);
}

TEST(RunConfig, Validation) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  c.exponent = 3;
  c.rho = -1;
  c.threshold = 2;
  try {
    c.validate();
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(e.problems().size(), 3u);
  }
}

TEST(Diagnostics, JsonOmitsTimingByDefault) {
  Diagnostics d;
  d.iterations = 3;
  d.seconds = 1.5;
  d.trace.push_back({1, 2.0, 0.1, 0.2, 10});
  auto j = to_json(d);
  EXPECT_FALSE(j.contains("seconds"));
  EXPECT_EQ(j["trace"][0]["subproblem_solves"], 10);
  EXPECT_TRUE(to_json(d, true).contains("seconds"));
}

}  // namespace
}  // namespace errest
