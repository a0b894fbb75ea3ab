#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "postulatelab/cli.hpp"

using namespace postulatelab;
using namespace postulatelab::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome execute(const RunConfig& c) {
  std::ostringstream out, err;
  const int code = run(c, out, err);
  return {code, out.str(), err.str()};
}

RunConfig command(const std::string& name) {
  RunConfig c;
  c.command = name;
  return c;
}

}  // namespace

TEST_CASE("check-axioms command", "[cli]") {
  RunConfig c = command("check-axioms");
  c.dims = {2, 2, 2};
  const Outcome o = execute(c);
  CHECK(o.code == kOk);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["threads"] == 1);
  CHECK(j["passed"] == true);
  for (const auto& [axiom, v] : j["result"]["violations"].items()) CHECK(v.get<double>() < 1e-9);

  c.star = "broken";
  c.tol = 1e-4;
  CHECK(execute(c).code == kViolation);
}

TEST_CASE("signalling command", "[cli]") {
  RunConfig c = command("signalling");
  const Outcome o = execute(c);
  CHECK(o.code == kViolation);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["result"]["tv_distance"].get<double>() == Catch::Approx(1.0).margin(1e-12));
  CHECK(j["result"]["signalling"] == true);

  c.device = "born";
  CHECK(execute(c).code == kOk);

  c.device = "sr";
  c.state = nlohmann::json::parse(R"({"amplitudes": [[1, 0], 0, 0, 0, 0, 0], "dims": [2, 3]})");
  c.remote = nlohmann::json::parse(R"({"basis": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})");
  CHECK(execute(c).code == kOk);
}

TEST_CASE("span-rank command", "[cli]") {
  RunConfig c = command("span-rank");
  c.n_functions = 32;
  const Outcome o = execute(c);
  CHECK(o.code == kOk);
  CHECK(nlohmann::json::parse(o.out)["result"]["classification"]["kind"] == "growing");

  c.family = "born";
  c.n_functions = 16;
  c.expect = "growing";
  CHECK(execute(c).code == kViolation);
  c.expect = "saturating:4";
  CHECK(execute(c).code == kOk);

  c.format = "csv";
  const Outcome csv = execute(c);
  CHECK(csv.out.rfind("n,rank\n", 0) == 0);
}

TEST_CASE("every scenario runs and reproduces its claim", "[cli]") {
  const auto& catalog = list_scenarios();
  for (const char* id : {"bell-sr-signalling", "spo-sequential-nonquantum", "fpem-span-growth"}) {
    CHECK(std::any_of(catalog.begin(), catalog.end(), [&](const ScenarioInfo& s) { return s.id == id; }));
  }
  for (const auto& s : catalog) {
    INFO(s.id);
    const Outcome o = execute(scenario_config(s.id, RunConfig{}));
    CHECK(o.code == kOk);
    const auto j = nlohmann::json::parse(o.out);
    CHECK(j["scenario"] == s.id);
    CHECK(j["topic"] == s.topic);
    CHECK_FALSE(s.description.empty());
  }
}

TEST_CASE("reports are byte-identical for a fixed seed", "[cli]") {
  for (const char* id : {"quantum-star-axioms", "fpem-span-growth", "gpt-qubit-dimensions", "fpem-entropy-bins"}) {
    RunConfig base;
    base.seed = 12345;
    const RunConfig c = scenario_config(id, base);
    CHECK(execute(c).out == execute(c).out);
    RunConfig csv = c;
    csv.format = "csv";
    CHECK(execute(csv).out == execute(csv).out);
  }
}

TEST_CASE("usage errors name the field", "[cli]") {
  RunConfig c = command("check-axioms");
  c.dims = {2, 2};
  Outcome o = execute(c);
  CHECK(o.code == kUsage);
  CHECK(o.err.find("dims") != std::string::npos);

  c.dims = {2, 2, 2};
  c.tol = 0;
  o = execute(c);
  CHECK(o.code == kUsage);
  CHECK(o.err.find("tol") != std::string::npos);

  RunConfig s = command("signalling");
  s.state = "nonsense";
  o = execute(s);
  CHECK(o.code == kUsage);
  CHECK(o.err.find("state") != std::string::npos);

  CHECK(execute(command("frobnicate")).code == kUsage);
  CHECK_THROWS_AS(scenario_config("nope", RunConfig{}), UsageError);
}

TEST_CASE("json configs are schema-checked", "[cli]") {
  const RunConfig c = config_from_json(nlohmann::json::parse(
      R"({"command": "span-rank", "family": "born", "N": 16, "seed": 3, "expect": "saturating:4"})"));
  CHECK(c.n_functions == 16);
  CHECK(execute(c).code == kOk);

  try {
    config_from_json(nlohmann::json::parse(R"({"command": "span-rank", "Nfunctions": 3})"));
    FAIL("unknown field accepted");
  } catch (const UsageError& e) {
    CHECK(e.field() == "Nfunctions");
  }
  try {
    config_from_json(nlohmann::json::parse(R"({"command": "span-rank", "seed": "abc"})"));
    FAIL("mistyped field accepted");
  } catch (const UsageError& e) {
    CHECK(e.field() == "seed");
  }

  const RunConfig sc = config_from_json(nlohmann::json::parse(R"({"scenario": "bell-sr-signalling", "seed": 9})"));
  CHECK(sc.command == "signalling");
  CHECK(sc.seed == 9);
}

TEST_CASE("resource errors exit with the usage status", "[cli]") {
  RunConfig c = command("span-rank");
  c.n_functions = 16;
  c.n_samples = 10;  // M < 4N
  const Outcome o = execute(c);
  CHECK(o.code == kUsage);
}

TEST_CASE("csv help documents every command", "[cli]") {
  const std::string help = kCsvColumnsHelp;
  for (const char* cmd : {"check-axioms", "signalling", "span-rank", "sequential", "entropy-meter", "gpt-dims"})
    CHECK(help.find(cmd) != std::string::npos);
}
