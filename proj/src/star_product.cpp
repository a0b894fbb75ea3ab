#include "postulatelab/star_product.hpp"

#include <algorithm>
#include <cmath>

#include "postulatelab/parallel.hpp"

namespace postulatelab {

Opf StarProduct::operator()(const Opf& f, const Opf& h) const {
  Opf out = rule_(f, h);
  if (out.dim() != f.dim() * h.dim())
    throw InvalidInput("star product '" + label_ + "': result dimension " + std::to_string(out.dim()) +
                       " != " + std::to_string(f.dim() * h.dim()));
  return out;
}

namespace {

void require_k1(const Opf& f, const Opf& h, const char* who) {
  if (f.power().value != 1 || h.power().value != 1)
    throw UnsupportedPower(std::string(who) + ": only defined for k = 1 operands");
}

MatrixXc hermitize(MatrixXc m) { return (m + m.adjoint()).eval() / 2.0; }

}  // namespace

Opf quantum_star(const Opf& f, const Opf& h) {
  require_k1(f, h, "quantum_star");
  return Opf(f.dim() * h.dim(), SymPower(1), hermitize(kron(f.matrix(), h.matrix())));
}

StarProduct quantum_star_product() { return StarProduct("quantum", quantum_star); }

StarProduct broken_bilinear_product(double eps) {
  return StarProduct("broken-bilinear", [eps](const Opf& f, const Opf& h) {
    require_k1(f, h, "broken-bilinear");
    const MatrixXc ff = f.matrix() * f.matrix();
    const MatrixXc hh = h.matrix() * h.matrix();
    MatrixXc g = (1.0 - eps) * kron(f.matrix(), h.matrix()) + eps * kron(ff, hh);
    return Opf(f.dim() * h.dim(), SymPower(1), hermitize(std::move(g)));
  });
}

StarProduct scaled_product(double scale) {
  return StarProduct("scaled", [scale](const Opf& f, const Opf& h) {
    require_k1(f, h, "scaled");
    return Opf(f.dim() * h.dim(), SymPower(1), hermitize(scale * kron(f.matrix(), h.matrix())));
  });
}

std::string_view axiom_id(Axiom axiom) {
  switch (axiom) {
    case Axiom::Bilinearity: return "bilinearity";
    case Axiom::Covariance: return "covariance";
    case Axiom::Unit: return "unit";
    case Axiom::Zero: return "zero";
    case Axiom::ReducedState: return "reduced-state";
    case Axiom::Factorization: return "factorization";
    case Axiom::Associativity: return "associativity";
    case Axiom::NoSignalling: return "no-signalling";
  }
  return "unknown";
}

namespace {

struct Trial {
  const StarProduct& star;
  const AxiomCheckConfig& cfg;
  Rng rng;

  Opf random_opf(Index d) { return Opf::random(d, cfg.power, rng); }
  PureState random_state(Index d) { return PureState::haar(d, rng); }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

  std::vector<Opf> random_measurement(Index d) {
    if (cfg.power.value == 1) {
      const std::size_t n = 2 + static_cast<std::size_t>(rng() % 2);
      return Measurement::random(d, n, rng).outcomes();
    }
    const Opf f = random_opf(d);
    const Index D = f.sym_dim();
    return {f, Opf(d, cfg.power, MatrixXc::Identity(D, D) - f.matrix())};
  }

  double bilinearity() {
    const Index a = cfg.a, b = cfg.b;
    const double p = uniform();
    const std::array<double, 2> w = {p, 1.0 - p};
    const PureState psi = random_state(a * b);
    // first argument
    const std::array<Opf, 2> fs = {random_opf(a), random_opf(a)};
    const Opf h = random_opf(b);
    const double lhs1 = eval(star(mix(fs, w), h), psi);
    const double rhs1 = p * eval(star(fs[0], h), psi) + (1 - p) * eval(star(fs[1], h), psi);
    // second argument
    const Opf f = random_opf(a);
    const std::array<Opf, 2> hs = {random_opf(b), random_opf(b)};
    const double lhs2 = eval(star(f, mix(hs, w)), psi);
    const double rhs2 = p * eval(star(f, hs[0]), psi) + (1 - p) * eval(star(f, hs[1]), psi);
    return std::max(std::abs(lhs1 - rhs1), std::abs(lhs2 - rhs2));
  }

  double covariance() {
    const Index a = cfg.a, b = cfg.b;
    const Opf f = random_opf(a);
    const Opf h = random_opf(b);
    const MatrixXc u = haar_unitary<double>(a, rng);
    const MatrixXc v = haar_unitary<double>(b, rng);
    const PureState psi = random_state(a * b);
    const MatrixXc ia = MatrixXc::Identity(a, a), ib = MatrixXc::Identity(b, b);
    const double left = std::abs(eval(star(compose_unitary(f, u), h), psi) -
                                 eval(compose_unitary(star(f, h), kron(u, ib)), psi));
    const double right = std::abs(eval(star(f, compose_unitary(h, v)), psi) -
                                  eval(compose_unitary(star(f, h), kron(ia, v)), psi));
    return std::max(left, right);
  }

  double unit() {
    const PureState psi = random_state(cfg.a * cfg.b);
    return std::abs(eval(star(Opf::unit(cfg.a, cfg.power), Opf::unit(cfg.b, cfg.power)), psi) - 1.0);
  }

  double zero() {
    const PureState psi = random_state(cfg.a * cfg.b);
    const double zu = eval(star(Opf::zero(cfg.a, cfg.power), Opf::unit(cfg.b, cfg.power)), psi);
    const double uz = eval(star(Opf::unit(cfg.a, cfg.power), Opf::zero(cfg.b, cfg.power)), psi);
    return std::max(std::abs(zu), std::abs(uz));
  }

  double reduced_state() {
    const Opf f = random_opf(cfg.a);
    const Opf g = random_opf(cfg.b);
    const PureState psi = random_state(cfg.a);
    const PureState phi = random_state(cfg.b);
    const PureState joint = tensor(psi, phi);
    const double left = std::abs(eval(star(f, Opf::unit(cfg.b, cfg.power)), joint) - eval(f, psi));
    const double right = std::abs(eval(star(Opf::unit(cfg.a, cfg.power), g), joint) - eval(g, phi));
    return std::max(left, right);
  }

  double factorization() {
    const Opf f = random_opf(cfg.a);
    const Opf g = random_opf(cfg.b);
    const PureState psi = random_state(cfg.a);
    const PureState phi = random_state(cfg.b);
    return std::abs(eval(star(f, g), tensor(psi, phi)) - eval(f, psi) * eval(g, phi));
  }

  double associativity() {
    const Opf f = random_opf(cfg.a);
    const Opf g = random_opf(cfg.b);
    const Opf h = random_opf(cfg.c);
    const PureState chi = random_state(cfg.a * cfg.b * cfg.c);
    return std::abs(eval(star(star(f, g), h), chi) - eval(star(f, star(g, h)), chi));
  }

  double no_signalling() {
    const Index a = cfg.a, b = cfg.b;
    const PureState psi = random_state(a * b);
    // measurement choice on A, marginal on B
    const auto fs = random_measurement(a);
    const auto hs = random_measurement(a);
    const Opf g = random_opf(b);
    double sum_f = 0, sum_h = 0;
    for (const auto& f : fs) sum_f += eval(star(f, g), psi);
    for (const auto& h : hs) sum_h += eval(star(h, g), psi);
    // measurement choice on B, marginal on A
    const auto fb = random_measurement(b);
    const auto hb = random_measurement(b);
    const Opf ga = random_opf(a);
    double sum_fb = 0, sum_hb = 0;
    for (const auto& f : fb) sum_fb += eval(star(ga, f), psi);
    for (const auto& h : hb) sum_hb += eval(star(ga, h), psi);
    return std::max(std::abs(sum_f - sum_h), std::abs(sum_fb - sum_hb));
  }

  double run(Axiom axiom) {
    switch (axiom) {
      case Axiom::Bilinearity: return bilinearity();
      case Axiom::Covariance: return covariance();
      case Axiom::Unit: return unit();
      case Axiom::Zero: return zero();
      case Axiom::ReducedState: return reduced_state();
      case Axiom::Factorization: return factorization();
      case Axiom::Associativity: return associativity();
      case Axiom::NoSignalling: return no_signalling();
    }
    return 0.0;
  }
};

void require_config(const AxiomCheckConfig& cfg) {
  if (cfg.trials < 1) throw InvalidInput("axiom check: trials must be >= 1");
  if (cfg.a < 2 || cfg.b < 2 || cfg.c < 2) throw InvalidInput("axiom check: dimensions must be >= 2");
  if (!(cfg.tol > 0)) throw InvalidInput("axiom check: tolerance must be positive");
}

}  // namespace

double max_violation(const StarProduct& star, Axiom axiom, const AxiomCheckConfig& config) {
  require_config(config);
  const auto axiom_index = static_cast<std::uint64_t>(axiom);
  return parallel_max(config.trials, config.threads, [&](std::size_t t) {
    Trial trial{star, config, make_rng(config.seed, {axiom_index, static_cast<std::uint64_t>(t)})};
    return trial.run(axiom);
  });
}

AxiomReport check_axioms(const StarProduct& star, const AxiomCheckConfig& config) {
  require_config(config);
  AxiomReport report;
  report.label = star.label();
  report.trials = config.trials;
  report.seed = config.seed;
  report.tol = config.tol;
  report.threads = config.threads;
  for (Axiom axiom : kAllAxioms) report.violations.emplace_back(axiom, max_violation(star, axiom, config));
  return report;
}

double check_no_signalling(const StarProduct& star, const AxiomCheckConfig& config) {
  return max_violation(star, Axiom::NoSignalling, config);
}

double AxiomReport::violation(Axiom axiom) const {
  for (const auto& [id, v] : violations)
    if (id == axiom) return v;
  throw InvalidInput("axiom report: no entry for " + std::string(axiom_id(axiom)));
}

bool AxiomReport::passed() const {
  return std::all_of(violations.begin(), violations.end(), [&](const auto& e) { return e.second < tol; });
}

nlohmann::ordered_json to_json(const AxiomReport& report) {
  nlohmann::ordered_json violations = nlohmann::ordered_json::object();
  nlohmann::ordered_json passed = nlohmann::ordered_json::object();
  for (const auto& [axiom, v] : report.violations) {
    violations[std::string(axiom_id(axiom))] = v;
    passed[std::string(axiom_id(axiom))] = v < report.tol;
  }
  return {{"star", report.label}, {"seed", report.seed},           {"trials", report.trials},
          {"tol", report.tol},    {"threads", report.threads},     {"violations", std::move(violations)},
          {"passed", std::move(passed)}, {"all_passed", report.passed()}};
}

}  // namespace postulatelab
