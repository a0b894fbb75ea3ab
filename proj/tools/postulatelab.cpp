#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "postulatelab/cli.hpp"

namespace {

using postulatelab::cli::RunConfig;
using postulatelab::cli::UsageError;

nlohmann::json name_or_json(const std::string& text, const std::string& field) {
  if (!text.empty() && (text.front() == '{' || text.front() == '[')) {
    try {
      return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(field, e.what());
    }
  }
  return text;
}

std::uint64_t env_seed() {
  const char* s = std::getenv("POSTULATELAB_SEED");
  if (s == nullptr || *s == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used, 0);
    if (used != std::string(s).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw UsageError("POSTULATELAB_SEED", "not an unsigned 64-bit integer");
  }
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = postulatelab::cli;

  CLI::App app{"postulatelab: operational probability toolkit and readout-device simulator"};
  app.footer(cli::kCsvColumnsHelp);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  RunConfig config;
  std::string config_file, state_text, remote_text;
  std::uint64_t seed = 0;
  std::string dims_text;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_file, "JSON config file (command-line flags are ignored)");
    sub->add_option("--seed", seed, "64-bit seed (fallback: POSTULATELAB_SEED, then 0)");
    sub->add_option("--tol", config.tol, "Tolerance")->capture_default_str();
    sub->add_option("--trials", config.trials, "Monte Carlo trials")->capture_default_str();
    sub->add_option("--threads", config.threads, "Worker threads")->capture_default_str();
    sub->add_option("--output,-o", config.output, "Report file (default: stdout)");
    sub->add_option("--format", config.format, "json or csv")->capture_default_str();
  };

  auto* axioms = app.add_subcommand("check-axioms", "Monte Carlo check of the composition constraints");
  add_common(axioms);
  axioms->add_option("--star", config.star, "quantum, broken or scaled")->capture_default_str();
  axioms->add_option("--epsilon", config.epsilon, "Deformation for broken/scaled")->capture_default_str();
  axioms->add_option("--dims", dims_text, "a,b,c")->default_str("2,2,2");
  axioms->add_option("--expect", config.expect, "'broken': pass iff bilinearity and no-signalling fail");

  auto* signalling = app.add_subcommand("signalling", "Remote measurement on B, readout device on A");
  add_common(signalling);
  signalling->add_option("--state", state_text, "bell, product, partial, random or JSON")->default_str("bell");
  signalling->add_option("--remote", remote_text, "Z, X, Y, identity or JSON basis")->default_str("Z");
  signalling->add_option("--device", config.device, "sr, fpem or born")->capture_default_str();
  signalling->add_option("--precision", config.precision, "State-readout rounding")->capture_default_str();
  signalling->add_option("--entropy", config.entropy, "von-neumann or renyi2")->capture_default_str();
  signalling->add_option("--expect", config.expect, "'signalling': pass iff signalling is detected");

  auto* span = app.add_subcommand("span-rank", "Numerical rank profile of a function family");
  add_common(span);
  span->add_option("--family", config.family, "born, power2, constant, entropy-bin, renyi-bin")
      ->capture_default_str();
  span->add_option("--dims", dims_text, "a (system dimension)")->default_str("2");
  span->add_option("--N", config.n_functions, "Number of functions")->capture_default_str();
  span->add_option("--M", config.n_samples, "Number of sample rays (0: 8N)")->capture_default_str();
  span->add_option("--bin", config.bin, "Entropy bin for entropy families")->capture_default_str();
  span->add_option("--rank-tol", config.rank_tol, "Relative singular-value cutoff")->capture_default_str();
  span->add_option("--expect", config.expect, "growing or saturating:<d>");

  auto* sequential = app.add_subcommand("sequential", "State-preserving POVM followed by an ordinary POVM");
  add_common(sequential);
  sequential->add_option("--state", state_text, "plus, zero, one or JSON")->default_str("plus");

  auto* meter = app.add_subcommand("entropy-meter", "Entropy-meter readings and the CNOT protocol");
  add_common(meter);
  meter->add_option("--state", state_text, "bell, product, partial, random or JSON")->default_str("bell");
  meter->add_option("--entropy", config.entropy, "von-neumann or renyi2")->capture_default_str();

  auto* gpt = app.add_subcommand("gpt-dims", "State/effect space dimensions and affinity under mixing");
  add_common(gpt);
  gpt->add_option("--dims", dims_text, "a")->default_str("2");
  gpt->add_option("--theory", config.theory, "quantum or classical")->capture_default_str();

  std::string scenario_id;
  auto* scenario = app.add_subcommand("scenario", "Run a built-in scenario");
  add_common(scenario);
  scenario->add_option("id", scenario_id, "Scenario id (see list-scenarios)")->required();

  auto* list = app.add_subcommand("list-scenarios", "Print the scenario catalog");
  add_common(list);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsage;
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    const auto* sub = app.get_subcommands().front();
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw UsageError("config", "cannot read '" + config_file + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw UsageError("config", e.what());
      }
      if (command != "scenario" && !j.contains("command")) j["command"] = command;
      if (command == "scenario" && !j.contains("scenario")) j["scenario"] = scenario_id;
      if (!j.contains("seed")) j["seed"] = env_seed();
      return cli::run(cli::config_from_json(j), std::cout, std::cerr);
    }

    config.seed = sub->count("--seed") > 0 ? seed : env_seed();
    if (command == "scenario") return cli::run(cli::scenario_config(scenario_id, config), std::cout, std::cerr);

    config.command = command;
    if (!dims_text.empty()) {
      config.dims.clear();
      std::stringstream ss(dims_text);
      std::string part;
      while (std::getline(ss, part, ',')) {
        try {
          config.dims.push_back(std::stol(part));
        } catch (const std::exception&) {
          throw UsageError("dims", "expected a comma-separated list of integers");
        }
      }
    } else if (command == "check-axioms") {
      config.dims = {2, 2, 2};
    }
    if (command == "sequential") config.state = "plus";
    if (!state_text.empty()) config.state = name_or_json(state_text, "state");
    if (!remote_text.empty()) config.remote = name_or_json(remote_text, "remote");
    return cli::run(config, std::cout, std::cerr);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return cli::kUsage;
  }
}
