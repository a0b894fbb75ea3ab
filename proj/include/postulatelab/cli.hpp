#pragma once

// Batch front-end shared by the postulatelab executable and the tests.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "postulatelab/types.hpp"

namespace postulatelab::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2 };

class UsageError : public std::runtime_error {
public:
  UsageError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

struct RunConfig {
  std::string command;
  std::string scenario;  // set when run through a built-in scenario
  std::vector<Index> dims;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::size_t trials = 1000;
  unsigned threads = 1;
  std::string output;  // empty: stdout
  std::string format = "json";

  // check-axioms
  std::string star = "quantum";
  double epsilon = 0.01;

  // signalling / entropy-meter / sequential
  nlohmann::json state = "bell";
  nlohmann::json remote = "Z";
  std::string device = "sr";
  double precision = 1e-6;
  std::string entropy = "von-neumann";

  // span-rank
  std::string family = "entropy-bin";
  Index n_functions = 32;
  Index n_samples = 0;  // 0: 8N
  double bin = 0.99;
  double rank_tol = 1e-8;
  std::string expect;  // "", "growing", "saturating:<d>"

  // gpt-dims
  std::string theory = "quantum";
};

struct ScenarioInfo {
  std::string id;
  std::string topic;
  std::string description;
};

const std::vector<ScenarioInfo>& list_scenarios();

// Preset configuration for a built-in scenario; seed/threads/output/format
// are taken from `base`.
RunConfig scenario_config(const std::string& id, const RunConfig& base);

// Schema-checked JSON config; unknown or mistyped fields raise UsageError
// naming the field.
RunConfig config_from_json(const nlohmann::json& j);

void validate(const RunConfig& config);

// Executes the command, writes the report to config.output (or `out`), and
// returns the exit code. Usage and resource errors are reported on `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Report text for a config without writing it anywhere.
struct Report {
  std::string text;
  int exit_code = kOk;
};
Report build_report(const RunConfig& config);

extern const char* const kCsvColumnsHelp;

}  // namespace postulatelab::cli
