#include "postulatelab/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "postulatelab/gpt.hpp"
#include "postulatelab/kent_devices.hpp"
#include "postulatelab/span_analyzer.hpp"
#include "postulatelab/star_product.hpp"

namespace postulatelab::cli {

using ojson = nlohmann::ordered_json;

const char* const kCsvColumnsHelp = R"(CSV columns (--format csv):
  check-axioms   axiom,violation,passed
  signalling     phase,outcome,probability   (phase: baseline | after_remote; last row: tv,,<distance>)
  span-rank      n,rank
  sequential     j,i,probability
  entropy-meter  bin,probability
  gpt-dims       quantity,value)";

namespace {

// -----------------------------------------------------------------------------
// Scenario catalog

const std::vector<ScenarioInfo> kScenarios = {
    {"bell-sr-signalling", "state-readout device",
     "Bell pair, Z measurement on B, state-readout on A: reduced state jumps from I/2 to |0><0| or |1><1|"},
    {"bell-born-no-signalling", "state-readout device",
     "same setup read out by an ordinary POVM on A: statistics do not move"},
    {"fpem-bell-signalling", "finite-precision entropy meter",
     "Bell pair, Z measurement on B, entropy meter on A: reading drops from 0.99 to 0.00"},
    {"spo-sequential-nonquantum", "stochastic positive-operator device",
     "state-preserving POVM followed by an ordinary POVM gives statistics quartic in psi"},
    {"fpem-entropy-bins", "finite-precision entropy meter",
     "meter readings on a partially entangled pair and CNOT protocol vs closed-form indicator"},
    {"fpem-span-growth", "finite-precision entropy meter",
     "rotated von Neumann entropy-bin indicators span a space that keeps growing"},
    {"renyi-span-growth", "finite-precision entropy meter",
     "same growth with the second-order Renyi entropy"},
    {"born-span-saturation", "finite-dimensional mixed states",
     "rotated Born outcomes on a qubit saturate at dimension 4"},
    {"power2-span-saturation", "finite-dimensional mixed states",
     "rotated k = 2 outcomes on a qubit saturate at dimension 9"},
    {"quantum-star-axioms", "composite-system constraints",
     "tensor product of effects satisfies every composition constraint"},
    {"broken-star-detection", "composite-system constraints",
     "a non-bilinear product is caught by the bilinearity and no-signalling checks"},
    {"gpt-qubit-dimensions", "operational state and effect spaces",
     "qubit: state space of dimension 3, effect space of dimension 4"},
    {"gpt-qutrit-dimensions", "operational state and effect spaces",
     "qutrit: state space of dimension 8, effect space of dimension 9"},
};

const std::string& topic_for(const RunConfig& config) {
  static const std::string none;
  for (const auto& s : kScenarios)
    if (s.id == config.scenario) return s.topic;
  return none;
}

// -----------------------------------------------------------------------------
// Parsing helpers

struct Bipartite {
  PureState psi;
  Index a;
  Index b;
};

VectorXc parse_amplitudes(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw UsageError(field, "amplitudes must be a nonempty array of [re, im] pairs");
  VectorXc v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (e.is_number()) {
      v(static_cast<Index>(i)) = e.get<double>();
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      v(static_cast<Index>(i)) = cplx(e[0].get<double>(), e[1].get<double>());
    } else {
      throw UsageError(field, "amplitude entries must be numbers or [re, im] pairs");
    }
  }
  return v;
}

PureState state_from_amplitudes(const VectorXc& v, const std::string& field) {
  try {
    return PureState::normalized(v);
  } catch (const InvalidInput& e) {
    throw UsageError(field, e.what());
  }
}

Bipartite parse_bipartite(const nlohmann::json& j, std::uint64_t seed) {
  const double r = 1.0 / std::sqrt(2.0);
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    VectorXc v = VectorXc::Zero(4);
    if (name == "bell") {
      v << r, 0, 0, r;
    } else if (name == "product") {
      v << r, r, 0, 0;  // |0> (x) |+>
    } else if (name == "partial") {
      v << std::sqrt(0.2), 0, 0, std::sqrt(0.8);
    } else if (name == "random") {
      Rng rng = make_rng(seed, {0x57a7e});
      return {PureState::haar(4, rng), 2, 2};
    } else {
      throw UsageError("state", "unknown bipartite state '" + name + "' (bell, product, partial, random)");
    }
    return {PureState::normalized(v), 2, 2};
  }
  if (!j.is_object() || !j.contains("amplitudes") || !j.contains("dims"))
    throw UsageError("state", "expected a state name or {\"amplitudes\": [...], \"dims\": [a, b]}");
  const auto& dims = j.at("dims");
  if (!dims.is_array() || dims.size() != 2 || !dims[0].is_number_integer() || !dims[1].is_number_integer())
    throw UsageError("state.dims", "expected [a, b]");
  const Index a = dims[0].get<Index>(), b = dims[1].get<Index>();
  const VectorXc v = parse_amplitudes(j.at("amplitudes"), "state.amplitudes");
  if (a < 1 || b < 1 || v.size() != a * b) throw UsageError("state.dims", "a*b must equal the number of amplitudes");
  return {state_from_amplitudes(v, "state.amplitudes"), a, b};
}

PureState parse_single(const nlohmann::json& j) {
  const double r = 1.0 / std::sqrt(2.0);
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    VectorXc v(2);
    if (name == "plus") v << r, r;
    else if (name == "zero") v << 1, 0;
    else if (name == "one") v << 0, 1;
    else throw UsageError("state", "unknown single-system state '" + name + "' (plus, zero, one)");
    return PureState::normalized(v);
  }
  if (j.is_object() && j.contains("amplitudes"))
    return state_from_amplitudes(parse_amplitudes(j.at("amplitudes"), "state.amplitudes"), "state.amplitudes");
  throw UsageError("state", "expected a state name or {\"amplitudes\": [...]}");
}

Povm parse_remote(const nlohmann::json& j, Index b) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "Z") return Povm::computational(b);
    if (name == "identity" || name == "none") return Povm::trivial(b);
    if (b != 2) throw UsageError("remote", "named basis '" + name + "' needs a qubit on B");
    const double r = 1.0 / std::sqrt(2.0);
    MatrixXc basis(2, 2);
    if (name == "X") basis << r, r, r, -r;
    else if (name == "Y") basis << r, r, cplx(0, r), cplx(0, -r);
    else throw UsageError("remote", "unknown measurement '" + name + "' (Z, X, Y, identity)");
    return Povm::projective(basis);
  }
  if (j.is_object() && j.contains("basis")) {
    const auto& cols = j.at("basis");
    if (!cols.is_array() || static_cast<Index>(cols.size()) != b)
      throw UsageError("remote.basis", "expected " + std::to_string(b) + " basis vectors");
    MatrixXc basis(b, b);
    for (Index c = 0; c < b; ++c) {
      const VectorXc v = parse_amplitudes(cols[static_cast<std::size_t>(c)], "remote.basis");
      if (v.size() != b) throw UsageError("remote.basis", "basis vectors must have dimension " + std::to_string(b));
      basis.col(c) = v;
    }
    try {
      return Povm::projective(basis);
    } catch (const InvalidInput& e) {
      throw UsageError("remote.basis", e.what());
    }
  }
  throw UsageError("remote", "expected Z, X, Y, identity or {\"basis\": [...]}");
}

std::unique_ptr<ReadoutDevice> make_device(const RunConfig& config, Index a) {
  if (config.device == "sr") return std::make_unique<StateReadoutDevice>(config.precision);
  if (config.device == "fpem") return std::make_unique<EntropyMeterDevice>(parse_entropy_kind(config.entropy));
  if (config.device == "born") return std::make_unique<BornMarginalDevice>(Povm::computational(a));
  throw UsageError("device", "unknown device '" + config.device + "' (sr, fpem, born)");
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ojson header(const RunConfig& config) {
  ojson h = {{"schema_version", kSchemaVersion}, {"command", config.command}};
  if (!config.scenario.empty()) {
    h["scenario"] = config.scenario;
    h["topic"] = topic_for(config);
  }
  h["seed"] = config.seed;
  h["threads"] = config.threads;
  return h;
}

Report finish(const RunConfig& config, ojson result, bool passed, const std::string& csv) {
  Report report;
  report.exit_code = passed ? kOk : kViolation;
  if (config.format == "csv") {
    report.text = csv;
  } else {
    ojson doc = header(config);
    doc["result"] = std::move(result);
    doc["passed"] = passed;
    report.text = doc.dump(2) + "\n";
  }
  return report;
}

// -----------------------------------------------------------------------------
// Commands

Report cmd_check_axioms(const RunConfig& config) {
  if (config.dims.size() != 3) throw UsageError("dims", "check-axioms needs three dimensions a,b,c");
  StarProduct star = [&] {
    if (config.star == "quantum") return quantum_star_product();
    if (config.star == "broken") return broken_bilinear_product(config.epsilon);
    if (config.star == "scaled") return scaled_product(1.0 - config.epsilon);
    throw UsageError("star", "unknown product '" + config.star + "' (quantum, broken, scaled)");
  }();
  AxiomCheckConfig cfg;
  cfg.a = config.dims[0];
  cfg.b = config.dims[1];
  cfg.c = config.dims[2];
  cfg.trials = config.trials;
  cfg.seed = config.seed;
  cfg.tol = config.tol;
  cfg.threads = config.threads;
  const AxiomReport report = check_axioms(star, cfg);
  std::ostringstream csv;
  csv << "axiom,violation,passed\n";
  csv.precision(17);
  for (const auto& [axiom, v] : report.violations)
    csv << axiom_id(axiom) << ',' << v << ',' << (v < report.tol ? "true" : "false") << '\n';
  ojson result = to_json(report);
  result["dims"] = config.dims;
  bool passed = report.passed();
  if (config.expect == "broken") {
    // Detection run: the product must be caught by both checks.
    passed = !report.passed(Axiom::Bilinearity) && !report.passed(Axiom::NoSignalling);
    result["expect"] = config.expect;
  } else if (!config.expect.empty()) {
    throw UsageError("expect", "check-axioms accepts only 'broken'");
  }
  return finish(config, std::move(result), passed, csv.str());
}

Report cmd_signalling(const RunConfig& config) {
  const Bipartite input = parse_bipartite(config.state, config.seed);
  const Povm remote = parse_remote(config.remote, input.b);
  const auto device = make_device(config, input.a);
  const SignallingReport report = detect_signalling(input.psi, input.a, remote, *device, config.tol);
  std::ostringstream csv;
  csv << "phase,outcome,probability\n";
  csv.precision(17);
  for (const auto& [key, p] : report.baseline) csv << "baseline," << csv_quote(device->describe(key).dump()) << ',' << p << '\n';
  for (const auto& [key, p] : report.after_remote)
    csv << "after_remote," << csv_quote(device->describe(key).dump()) << ',' << p << '\n';
  csv << "tv,," << report.tv << '\n';
  ojson result = to_json(report, *device);
  result["dims"] = {input.a, input.b};
  result["tol"] = config.tol;
  bool passed = !report.signalling;
  if (config.expect == "signalling") {
    passed = report.signalling;
    result["expect"] = config.expect;
  } else if (!config.expect.empty()) {
    throw UsageError("expect", "signalling accepts only 'signalling'");
  }
  return finish(config, std::move(result), passed, csv.str());
}

FunctionFamily make_family(const RunConfig& config) {
  const Index a = config.dims.empty() ? 2 : config.dims[0];
  if (config.family == "born") return born_family(a);
  if (config.family == "power2") return power2_family(a);
  if (config.family == "constant") return constant_family(a);
  if (config.family == "entropy-bin" || config.family == "renyi-bin") {
    EntropyBin bin = [&] {
      try {
        return EntropyBin::from_value(config.bin, 2);
      } catch (const InvalidInput& e) {
        throw UsageError("bin", e.what());
      }
    }();
    return config.family == "entropy-bin" ? entropy_bin_family(bin, EntropyKind::VonNeumann) : renyi_family(bin);
  }
  throw UsageError("family", "unknown family '" + config.family + "' (born, power2, constant, entropy-bin, renyi-bin)");
}

Report cmd_span_rank(const RunConfig& config) {
  const FunctionFamily family = make_family(config);
  const Index m = config.n_samples > 0 ? config.n_samples : 8 * config.n_functions;
  const RankProfile profile = rank_profile(family, config.n_functions, m, config.seed, config.rank_tol, config.threads);
  const Classification c = classify(profile);
  bool passed = true;
  if (!config.expect.empty()) {
    if (config.expect == "growing") {
      passed = c.kind == SpanClass::Growing;
    } else if (config.expect.rfind("saturating:", 0) == 0) {
      const Index d = std::stol(config.expect.substr(11));
      passed = c.kind == SpanClass::Saturating && c.dimension == d;
    } else {
      throw UsageError("expect", "expected 'growing' or 'saturating:<d>'");
    }
  }
  ojson result = to_json(profile, c);
  if (!config.expect.empty()) result["expect"] = config.expect;
  return finish(config, std::move(result), passed, to_csv(profile));
}

Report cmd_sequential(const RunConfig& config) {
  const PureState psi = parse_single(config.state);
  const Povm z = Povm::computational(psi.dim());
  const MatrixXd joint = sequential_spo_then_povm(psi, z, z);
  // Certification: P(0,0) as a function of psi is not a quadratic form,
  // while a single Born probability is.
  const MatrixXc x0 = z.effect(0);
  const auto p00 = [&](const PureState& s) { return sequential_spo_then_povm(s, z, z)(0, 0); };
  const auto born = [&](const PureState& s) { return z.probability(0, s); };
  const Index n = std::max<Index>(256, 4 * psi.dim() * psi.dim());
  const double seq_residual = quadratic_fit_residual(p00, psi.dim(), n, config.seed).relative_residual;
  const double born_residual = quadratic_fit_residual(born, psi.dim(), n, config.seed).relative_residual;
  constexpr double kNonQuantumThreshold = 0.01;
  constexpr double kBornResidualTol = 1e-8;
  const bool passed = seq_residual > kNonQuantumThreshold && born_residual < kBornResidualTol;
  std::ostringstream csv;
  csv << "j,i,probability\n";
  csv.precision(17);
  ojson rows = ojson::array();
  for (Index j = 0; j < joint.rows(); ++j)
    for (Index i = 0; i < joint.cols(); ++i) {
      csv << j << ',' << i << ',' << joint(j, i) << '\n';
      rows.push_back({{"j", j}, {"i", i}, {"probability", joint(j, i)}});
    }
  ojson result = {{"joint", std::move(rows)},
                  {"fit_samples", n},
                  {"sequential_fit_residual", seq_residual},
                  {"born_fit_residual", born_residual},
                  {"nonquantum_threshold", kNonQuantumThreshold},
                  {"born_residual_tol", kBornResidualTol}};
  return finish(config, std::move(result), passed, csv.str());
}

Report cmd_entropy_meter(const RunConfig& config) {
  const Bipartite input = parse_bipartite(config.state, config.seed);
  const EntropyKind kind = parse_entropy_kind(config.entropy);
  const auto bins = m_fpem(ProperMixture::pure(input.a, input.b, input.psi), Side::A, kind);
  std::ostringstream csv;
  csv << "bin,probability\n";
  csv.precision(17);
  ojson dist = ojson::array();
  for (const auto& [bin, p] : bins) {
    csv << bin.value() << ',' << p << '\n';
    dist.push_back({{"bin", bin.value()}, {"probability", p}});
  }
  // CNOT protocol vs closed form on random qubit rays.
  Rng rng = make_rng(config.seed, {0xc407});
  std::size_t mismatches = 0;
  for (std::size_t t = 0; t < config.trials; ++t) {
    const PureState phi = PureState::haar(2, rng);
    const double p = std::norm(phi[0]), q = std::norm(phi[1]);
    double s = kind == EntropyKind::VonNeumann ? shannon_entropy<double>(Eigen::Vector2d(p, q))
                                               : -std::log2(p * p + q * q);
    const EntropyBin bin = EntropyBin::of_entropy(std::max(s, 0.0), 2);
    if (cnot_entropy_opf(bin, kind)(phi) != 1.0 || closed_form_entropy_indicator(bin, kind)(phi) != 1.0) ++mismatches;
  }
  ojson result = {{"entropy", std::string(entropy_kind_id(kind))},
                  {"dims", {input.a, input.b}},
                  {"distribution", std::move(dist)},
                  {"protocol_trials", config.trials},
                  {"protocol_mismatches", mismatches}};
  return finish(config, std::move(result), mismatches == 0, csv.str());
}

Report cmd_gpt_dims(const RunConfig& config) {
  const Index a = config.dims.empty() ? 2 : config.dims[0];
  if (a < 2) throw UsageError("dims", "gpt-dims needs a >= 2");
  const std::size_t count = static_cast<std::size_t>(2 * a * a + 4);
  std::vector<OutcomeFunction> theory;
  if (config.theory == "quantum") theory = quantum_effect_family(a, count, config.seed);
  else if (config.theory == "classical") theory = classical_effect_family(a, count, config.seed);
  else throw UsageError("theory", "unknown theory '" + config.theory + "' (quantum, classical)");
  const Index n = 10 * static_cast<Index>(theory.size());
  const SpaceDimensions dims = space_dimensions(theory, haar_sampler(a), n, config.seed);
  const double affinity = affinity_violation(FiducialSet::tomographic(a), config.trials, config.seed);
  const bool passed = dims.satisfies_duality() && affinity < config.tol;
  std::ostringstream csv;
  csv << "quantity,value\n";
  csv.precision(17);
  csv << "dim_states," << dims.dim_states << "\ndim_effects," << dims.dim_effects << "\naffinity_violation,"
      << affinity << '\n';
  ojson result = {{"dim", a},
                  {"theory", config.theory},
                  {"samples", n},
                  {"dim_states", dims.dim_states},
                  {"dim_effects", dims.dim_effects},
                  {"inconclusive", dims.inconclusive},
                  {"duality", dims.satisfies_duality()},
                  {"affinity_trials", config.trials},
                  {"affinity_violation", affinity},
                  {"tol", config.tol}};
  if (!dims.diagnostics.empty()) result["diagnostics"] = dims.diagnostics;
  return finish(config, std::move(result), passed, csv.str());
}

Report cmd_list_scenarios(const RunConfig& config) {
  std::ostringstream csv;
  csv << "id,topic,description\n";
  ojson list = ojson::array();
  for (const auto& s : kScenarios) {
    csv << s.id << ',' << csv_quote(s.topic) << ',' << csv_quote(s.description) << '\n';
    list.push_back({{"id", s.id}, {"topic", s.topic}, {"description", s.description}});
  }
  return finish(config, std::move(list), true, csv.str());
}

}  // namespace

const std::vector<ScenarioInfo>& list_scenarios() { return kScenarios; }

RunConfig scenario_config(const std::string& id, const RunConfig& base) {
  RunConfig c;
  c.seed = base.seed;
  c.threads = base.threads;
  c.output = base.output;
  c.format = base.format;
  c.scenario = id;
  if (id == "bell-sr-signalling") {
    c.command = "signalling";
    c.state = "bell", c.remote = "Z", c.device = "sr", c.expect = "signalling";
  } else if (id == "bell-born-no-signalling") {
    c.command = "signalling";
    c.state = "bell", c.remote = "Z", c.device = "born";
  } else if (id == "fpem-bell-signalling") {
    c.command = "signalling";
    c.state = "bell", c.remote = "Z", c.device = "fpem", c.expect = "signalling";
  } else if (id == "spo-sequential-nonquantum") {
    c.command = "sequential";
    c.state = "plus";
  } else if (id == "fpem-entropy-bins") {
    c.command = "entropy-meter";
    c.state = "partial";
  } else if (id == "fpem-span-growth") {
    c.command = "span-rank";
    c.family = "entropy-bin", c.expect = "growing";
  } else if (id == "renyi-span-growth") {
    c.command = "span-rank";
    c.family = "renyi-bin", c.expect = "growing";
  } else if (id == "born-span-saturation") {
    c.command = "span-rank";
    c.family = "born", c.n_functions = 16, c.expect = "saturating:4";
  } else if (id == "power2-span-saturation") {
    c.command = "span-rank";
    c.family = "power2", c.n_functions = 32, c.expect = "saturating:9";
  } else if (id == "quantum-star-axioms") {
    c.command = "check-axioms";
    c.star = "quantum", c.dims = {2, 2, 2};
  } else if (id == "broken-star-detection") {
    c.command = "check-axioms";
    c.star = "broken", c.dims = {2, 2, 2}, c.tol = 1e-4, c.expect = "broken";
  } else if (id == "gpt-qubit-dimensions") {
    c.command = "gpt-dims";
    c.dims = {2};
  } else if (id == "gpt-qutrit-dimensions") {
    c.command = "gpt-dims";
    c.dims = {3};
  } else {
    throw UsageError("scenario", "unknown scenario '" + id + "' (see list-scenarios)");
  }
  return c;
}

RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config", "expected a JSON object");
  RunConfig c;
  auto get = [&](const char* key, auto& target) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(target);
    } catch (const nlohmann::json::exception&) {
      throw UsageError(key, "wrong type");
    }
  };
  static const std::vector<std::string> known = {
      "command", "scenario", "dims",   "seed",      "tol",   "trials",   "threads", "output",   "format",
      "star",    "epsilon",  "state",  "remote",    "device", "precision", "entropy", "family",  "N",
      "M",       "bin",      "rank_tol", "expect",  "theory"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) throw UsageError(key, "unknown config field");
  get("command", c.command);
  get("scenario", c.scenario);
  get("dims", c.dims);
  get("seed", c.seed);
  get("tol", c.tol);
  get("trials", c.trials);
  get("threads", c.threads);
  get("output", c.output);
  get("format", c.format);
  get("star", c.star);
  get("epsilon", c.epsilon);
  if (j.contains("state")) c.state = j.at("state");
  if (j.contains("remote")) c.remote = j.at("remote");
  get("device", c.device);
  get("precision", c.precision);
  get("entropy", c.entropy);
  get("family", c.family);
  get("N", c.n_functions);
  get("M", c.n_samples);
  get("bin", c.bin);
  get("rank_tol", c.rank_tol);
  get("expect", c.expect);
  get("theory", c.theory);
  if (!c.scenario.empty()) {
    RunConfig s = scenario_config(c.scenario, c);
    if (!c.command.empty() && c.command != "scenario" && c.command != s.command)
      throw UsageError("command", "does not match scenario '" + c.scenario + "'");
    return s;
  }
  return c;
}

void validate(const RunConfig& c) {
  static const std::vector<std::string> commands = {"check-axioms", "signalling",    "span-rank",     "sequential",
                                                    "entropy-meter", "gpt-dims",     "list-scenarios"};
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end())
    throw UsageError("command", "unknown command '" + c.command + "'");
  if (!(c.tol > 0)) throw UsageError("tol", "must be > 0");
  if (!(c.rank_tol > 0)) throw UsageError("rank_tol", "must be > 0");
  if (!(c.precision > 0)) throw UsageError("precision", "must be > 0");
  if (c.trials < 1) throw UsageError("trials", "must be >= 1");
  if (c.threads < 1) throw UsageError("threads", "must be >= 1");
  if (c.format != "json" && c.format != "csv") throw UsageError("format", "must be json or csv");
  if (!(c.epsilon >= 0 && c.epsilon <= 1)) throw UsageError("epsilon", "must lie in [0, 1]");
  for (Index d : c.dims)
    if (d < 2) throw UsageError("dims", "every dimension must be >= 2");
  if (c.n_functions < 1) throw UsageError("N", "must be >= 1");
  if (c.n_samples < 0) throw UsageError("M", "must be >= 0");
}

Report build_report(const RunConfig& config) {
  validate(config);
  try {
    if (config.command == "check-axioms") return cmd_check_axioms(config);
    if (config.command == "signalling") return cmd_signalling(config);
    if (config.command == "span-rank") return cmd_span_rank(config);
    if (config.command == "sequential") return cmd_sequential(config);
    if (config.command == "entropy-meter") return cmd_entropy_meter(config);
    if (config.command == "gpt-dims") return cmd_gpt_dims(config);
    return cmd_list_scenarios(config);
  } catch (const ResourceError&) {
    throw;
  } catch (const UsageError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw UsageError(config.command, e.what());
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Report report = build_report(config);
    if (config.output.empty()) {
      out << report.text;
    } else {
      std::ofstream file(config.output, std::ios::binary);
      if (!file) throw UsageError("output", "cannot open '" + config.output + "' for writing");
      file << report.text;
    }
    return report.exit_code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace postulatelab::cli
