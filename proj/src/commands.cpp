#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <string>

#include "errest/cli.hpp"
#include "errest/estimator.hpp"
#include "errest/io.hpp"
#include "errest/synth.hpp"

namespace errest {

namespace fs = std::filesystem;

namespace {

struct EstimateArgs {
  std::string predictions;
  std::string constraints;
  std::string labels;
  std::string out;
  std::string config;
  RunConfig run;
  bool squared = false;
};

struct EvaluateArgs {
  std::string estimates;
  std::string predictions;
  std::string truth;
  std::string out;
};

struct SynthArgs {
  std::size_t domains = 0;
  std::size_t classifiers = 0;
  std::size_t instances = 0;
  double error_min = 0.05;
  double error_max = 0.4;
  std::string constraints;
  double density = 1.0;
  double positive_rate = 0.5;
  std::uint64_t seed = 0;
  bool soft = false;
  std::string out;
};

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary);
  file << contents;
  if (!file) throw InputError("cannot write " + path.string());
}

template <class Writer>
void write_with(const fs::path& path, Writer&& writer) {
  std::ostringstream buf;
  writer(buf);
  write_file(path, buf.str());
}

void make_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create directory " + dir.string() + ": " + ec.message());
}

nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

int estimate_command(const EstimateArgs& args, const CLI::App& app, std::ostream& out,
                     std::ostream& err) {
  RunConfig config;
  if (!args.config.empty()) config = run_config_from_json(read_json_file(args.config));
  // Flags given on the command line override the config file.
  auto given = [&](const char* name) { return app.get_option(name)->count() > 0; };
  if (given("--prior-weight")) config.prior_weight = args.run.prior_weight;
  if (given("--rho")) config.rho = args.run.rho;
  if (given("--eps-abs")) config.eps_abs = args.run.eps_abs;
  if (given("--eps-rel")) config.eps_rel = args.run.eps_rel;
  if (given("--max-iters")) config.max_iterations = args.run.max_iterations;
  if (given("--stochastic")) config.stochastic = args.run.stochastic;
  if (given("--seed")) config.seed = args.run.seed;
  if (given("--threshold")) config.threshold = args.run.threshold;
  if (args.squared) config.exponent = 2;
  config.validate();

  Vocabulary vocab;
  Ontology ontology;
  if (!args.constraints.empty()) ontology = parse_constraints(args.constraints, vocab);
  for (const auto& w : ontology.warnings()) err << "warning: " << w << '\n';
  ObservationSet obs = parse_predictions(args.predictions, vocab);
  if (!args.labels.empty()) {
    const TruthSet clamp = parse_labels(args.labels, vocab);
    for (const auto& [key, label] : clamp.labels) {
      obs.set(GroundPredicate::target(key.first, key.second), label);
    }
  }

  const Estimates result = estimate(obs, ontology, config.estimator_config());

  const fs::path dir = args.out;
  make_directory(dir);
  write_with(dir / "error_rates.tsv",
             [&](std::ostream& o) { write_error_rates(o, result.error_rates, vocab); });
  write_with(dir / "targets.tsv", [&](std::ostream& o) { write_targets(o, result, vocab); });
  nlohmann::json diagnostics = to_json(result.diagnostics);
  diagnostics["objective"] = result.objective;
  diagnostics["latent_variables"] = result.latent_count;
  diagnostics["hinges"] = result.hinge_count;
  write_file(dir / "diagnostics.json", diagnostics.dump(2) + "\n");
  const std::string resolved = to_json(config).dump(2) + "\n";
  write_file(dir / "config.json", resolved);
  out << resolved;

  err << "solved " << result.latent_count << " variables, " << result.hinge_count << " hinges in "
      << result.diagnostics.iterations << " iterations (" << result.diagnostics.seconds << " s)\n";
  if (!result.diagnostics.converged) {
    err << "warning: solver did not converge within " << config.max_iterations << " iterations\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int evaluate_command(const EvaluateArgs& args, std::ostream& out, std::ostream& err) {
  Vocabulary vocab;
  const ObservationSet obs = parse_predictions(args.predictions, vocab);
  const TruthSet truth = parse_labels(args.truth, vocab);
  const fs::path dir = args.estimates;
  std::ifstream rates_in(dir / "error_rates.tsv");
  if (!rates_in) throw InputError("cannot open " + (dir / "error_rates.tsv").string());
  const auto rates = read_error_rates(rates_in, vocab, (dir / "error_rates.tsv").string());
  std::ifstream targets_in(dir / "targets.tsv");
  if (!targets_in) throw InputError("cannot open " + (dir / "targets.tsv").string());
  const auto targets = read_targets(targets_in, vocab, (dir / "targets.tsv").string());

  const MetricsReport report = evaluate(rates, targets, obs, truth);

  // Keys present on one side only are reported, not fatal.
  const auto sample = empirical_error_rates(obs, truth);
  std::size_t rates_without_truth = 0;
  for (const auto& [key, v] : rates) rates_without_truth += !sample.contains(key);
  std::size_t targets_without_truth = 0;
  for (const auto& [key, v] : targets) targets_without_truth += !truth.labels.contains(key);

  nlohmann::json j = to_json(report, vocab);
  j["unmatched"] = {{"error_rates_without_truth", rates_without_truth},
                    {"targets_without_truth", targets_without_truth}};
  const std::string text = j.dump(2) + "\n";
  if (fs::path(args.out).has_parent_path()) make_directory(fs::path(args.out).parent_path());
  write_file(args.out, text);
  out << text;

  if (report.error_coverage < 1.0 || report.target_coverage < 1.0) {
    err << "warning: coverage " << format_fixed(100.0 * report.error_coverage, 1)
        << "% of error rates, " << format_fixed(100.0 * report.target_coverage, 1)
        << "% of targets\n";
  }
  if (report.error_coverage == 0.0 && report.target_coverage == 0.0) {
    err << "error: estimates and truth do not overlap\n";
    return kExitInputError;
  }
  return kExitOk;
}

int synth_command(const SynthArgs& args, std::ostream& err) {
  if (args.error_min > args.error_max) throw InputError("--error-min exceeds --error-max");
  Vocabulary vocab;
  SynthSpec spec;
  if (!args.constraints.empty()) spec.ontology = parse_constraints(args.constraints, vocab);
  if (vocab.domains.size() > args.domains) {
    throw InputError("constraints name " + std::to_string(vocab.domains.size()) +
                     " domains but --domains is " + std::to_string(args.domains));
  }
  while (vocab.domains.size() < args.domains) {
    vocab.domain("d" + std::to_string(vocab.domains.size()));
  }
  for (std::size_t j = 0; j < args.classifiers; ++j) vocab.classifier("c" + std::to_string(j));
  for (std::size_t x = 0; x < args.instances; ++x) vocab.instance("x" + std::to_string(x));

  spec.domains = args.domains;
  spec.classifiers = args.classifiers;
  spec.instances = args.instances;
  spec.error_rates = uniform_error_rates(args.domains, args.classifiers, args.error_min,
                                         args.error_max, args.seed);
  spec.soft = args.soft;
  spec.density = args.density;
  spec.positive_rate = args.positive_rate;
  spec.seed = args.seed;
  const SynthData data = synth_generate(spec);

  std::map<DomainClassifier, double> true_rates;
  for (std::size_t d = 0; d < args.domains; ++d) {
    for (std::size_t j = 0; j < args.classifiers; ++j) {
      true_rates[{DomainId{static_cast<std::uint32_t>(d)},
                  ClassifierId{static_cast<std::uint32_t>(j)}}] = spec.error_rates[d][j];
    }
  }

  const fs::path dir = args.out;
  make_directory(dir);
  write_with(dir / "predictions.tsv",
             [&](std::ostream& o) { write_predictions(o, data.observations, vocab); });
  write_with(dir / "truth.tsv", [&](std::ostream& o) { write_labels(o, data.truth, vocab); });
  write_with(dir / "true_error_rates.tsv",
             [&](std::ostream& o) { write_error_rates(o, true_rates, vocab); });
  if (data.observations.empty()) err << "warning: no predictions were generated\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Estimate classifier error rates from unlabeled data."};
  app.name("errest");
  app.require_subcommand(1);

  EstimateArgs est;
  auto* estimate_cmd = app.add_subcommand("estimate", "Infer error rates and target labels");
  estimate_cmd->add_option("--predictions", est.predictions, "Classifier outputs TSV")
      ->required()
      ->check(CLI::ExistingFile);
  estimate_cmd->add_option("--constraints", est.constraints, "ME/SUB constraints file")
      ->check(CLI::ExistingFile);
  estimate_cmd->add_option("--labels", est.labels, "Known labels to clamp")
      ->check(CLI::ExistingFile);
  estimate_cmd->add_option("--out", est.out, "Output directory")->required();
  estimate_cmd->add_option("--config", est.config, "JSON run configuration")
      ->check(CLI::ExistingFile);
  estimate_cmd->add_option("--prior-weight", est.run.prior_weight, "Prior rule weight")
      ->check(CLI::NonNegativeNumber);
  estimate_cmd->add_option("--rho", est.run.rho, "ADMM step size")->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--eps-abs", est.run.eps_abs, "Absolute tolerance")
      ->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--eps-rel", est.run.eps_rel, "Relative tolerance")
      ->check(CLI::NonNegativeNumber);
  estimate_cmd->add_option("--max-iters", est.run.max_iterations, "Iteration cap")
      ->check(CLI::PositiveNumber);
  estimate_cmd
      ->add_option("--stochastic", est.run.stochastic,
                   "Stochastic mode with K subproblems per iteration")
      ->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--seed", est.run.seed, "Random seed");
  estimate_cmd->add_option("--threshold", est.run.threshold, "Hard-label threshold")
      ->check(CLI::Range(0.0, 1.0));
  estimate_cmd->add_flag("--squared", est.squared, "Use squared hinges");

  EvaluateArgs ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score estimates against true labels");
  evaluate_cmd->add_option("--estimates", ev.estimates, "Directory written by estimate")
      ->required()
      ->check(CLI::ExistingDirectory);
  evaluate_cmd->add_option("--predictions", ev.predictions, "Classifier outputs TSV")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--truth", ev.truth, "True labels TSV")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--out", ev.out, "Report path (JSON)")->required();

  SynthArgs sy;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic data set");
  synth_cmd->add_option("--domains", sy.domains, "Number of domains")
      ->required()
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--classifiers", sy.classifiers, "Classifiers per domain")
      ->required()
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--instances", sy.instances, "Number of instances")->required();
  synth_cmd->add_option("--error-min", sy.error_min, "Lowest true error rate")
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--error-max", sy.error_max, "Highest true error rate")
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--constraints", sy.constraints, "ME/SUB constraints file")
      ->check(CLI::ExistingFile);
  synth_cmd->add_option("--density", sy.density, "Probability an output is kept")
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--positive-rate", sy.positive_rate, "Label prior before rejection")
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--seed", sy.seed, "Random seed");
  synth_cmd->add_flag("--soft", sy.soft, "Emit soft outputs");
  synth_cmd->add_option("--out", sy.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitInputError;
  }

  try {
    if (estimate_cmd->parsed()) return estimate_command(est, *estimate_cmd, out, err);
    if (evaluate_cmd->parsed()) return evaluate_command(ev, out, err);
    return synth_command(sy, err);
  } catch (const InputError& e) {
    for (const auto& p : e.problems()) err << "error: " << p << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace errest
