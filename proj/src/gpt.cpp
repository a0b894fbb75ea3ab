#include "postulatelab/gpt.hpp"

#include <algorithm>
#include <sstream>

#include "postulatelab/rank.hpp"

namespace postulatelab {

namespace {

constexpr std::uint64_t kSeparationSeed = 0x5eb1a7e5ULL;
constexpr int kSeparationSamples = 64;
constexpr double kSeparationTol = 1e-9;

MatrixXc random_effect(Index a, Rng& rng) {
  const MatrixXc g = ginibre<double>(a, a, rng);
  MatrixXc e = g.adjoint() * g;
  e = (e + e.adjoint()).eval() / 2.0;
  return e / hermitian_eigenvalues(e).maxCoeff();
}

void require_weights(std::span<const double> weights, std::size_t n) {
  if (weights.size() != n) throw InvalidInput("mix: expected " + std::to_string(n) + " weights");
  double sum = 0;
  for (double w : weights) {
    if (!(w >= 0)) throw InvalidInput("mix: negative or NaN weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > tol::kWeights) throw InvalidInput("mix: weights do not sum to 1");
}

}  // namespace

OutcomeFunction born_outcome(std::string label, MatrixXc effect) {
  return {std::move(label), [e = std::move(effect)](const PureState& psi) {
            return std::clamp(psi.expectation(e).real(), 0.0, 1.0);
          }};
}

FiducialSet::FiducialSet(Index dim, std::vector<OutcomeFunction> outcomes, bool truncated)
    : dim_(dim), outcomes_(std::move(outcomes)), truncated_(truncated) {
  if (dim < 1) throw InvalidInput("fiducial set: dimension must be positive");
  if (outcomes_.empty()) throw InvalidInput("fiducial set: no outcomes");
  Rng rng = make_rng(kSeparationSeed, {static_cast<std::uint64_t>(dim)});
  MatrixXd values(outcomes_.size(), kSeparationSamples);
  for (int s = 0; s < kSeparationSamples; ++s) {
    const PureState psi = PureState::haar(dim, rng);
    for (std::size_t i = 0; i < outcomes_.size(); ++i) values(static_cast<Index>(i), s) = outcomes_[i](psi);
  }
  for (Index i = 0; i < values.rows(); ++i)
    for (Index j = i + 1; j < values.rows(); ++j)
      if ((values.row(i) - values.row(j)).cwiseAbs().maxCoeff() <= kSeparationTol)
        throw InvalidInput("fiducial set: outcomes '" + outcomes_[i].label + "' and '" + outcomes_[j].label +
                           "' agree on every sampled state");
}

FiducialSet FiducialSet::qubit_pauli() {
  MatrixXc z_plus(2, 2), x_plus(2, 2), y_plus(2, 2);
  const cplx i(0, 1);
  z_plus << 1, 0, 0, 0;
  x_plus << 0.5, 0.5, 0.5, 0.5;
  y_plus << 0.5, -0.5 * i, 0.5 * i, 0.5;
  return FiducialSet(2, {born_outcome("Z+", z_plus), born_outcome("X+", x_plus), born_outcome("Y+", y_plus),
                         born_outcome("unit", MatrixXc::Identity(2, 2))});
}

FiducialSet FiducialSet::tomographic(Index a) {
  std::vector<OutcomeFunction> outcomes;
  const cplx i(0, 1);
  const double h = 1.0 / std::sqrt(2.0);
  for (Index r = 0; r < a; ++r) {
    MatrixXc e = MatrixXc::Zero(a, a);
    e(r, r) = 1;
    outcomes.push_back(born_outcome("P" + std::to_string(r), std::move(e)));
  }
  for (Index r = 0; r < a; ++r)
    for (Index c = r + 1; c < a; ++c) {
      VectorXc plus = VectorXc::Zero(a), plus_i = VectorXc::Zero(a);
      plus(r) = plus_i(r) = h;
      plus(c) = h;
      plus_i(c) = h * i;
      const std::string tag = std::to_string(r) + std::to_string(c);
      outcomes.push_back(born_outcome("X" + tag, plus * plus.adjoint()));
      outcomes.push_back(born_outcome("Y" + tag, plus_i * plus_i.adjoint()));
    }
  return FiducialSet(a, std::move(outcomes));
}

GptState::GptState(VectorXd probs, bool truncated) : probs_(std::move(probs)), truncated_(truncated) {
  for (Index i = 0; i < probs_.size(); ++i) {
    if (!(probs_(i) >= -tol::kWeights && probs_(i) <= 1.0 + tol::kWeights))
      throw InvalidInput("gpt state: entry " + std::to_string(i) + " is not a probability");
    probs_(i) = std::clamp(probs_(i), 0.0, 1.0);
  }
}

GptState fiducial_probs(const PureState& psi, const FiducialSet& fiducials) {
  if (psi.dim() != fiducials.dim())
    throw InvalidInput("fiducial_probs: state dimension " + std::to_string(psi.dim()) + " != " +
                       std::to_string(fiducials.dim()));
  VectorXd p(fiducials.size());
  for (std::size_t i = 0; i < fiducials.size(); ++i) p(static_cast<Index>(i)) = fiducials.outcomes()[i](psi);
  return GptState(std::move(p), fiducials.truncated());
}

GptState fiducial_probs(const Ensemble& ensemble, const FiducialSet& fiducials) {
  if (ensemble.parts.empty()) throw InvalidInput("fiducial_probs: empty ensemble");
  std::vector<GptState> states;
  std::vector<double> weights;
  for (const auto& [w, psi] : ensemble.parts) {
    states.push_back(fiducial_probs(psi, fiducials));
    weights.push_back(w);
  }
  return mix(states, weights);
}

GptState mix(std::span<const GptState> states, std::span<const double> weights) {
  if (states.empty()) throw InvalidInput("mix: no states");
  require_weights(weights, states.size());
  VectorXd out = VectorXd::Zero(states.front().size());
  bool truncated = false;
  for (std::size_t x = 0; x < states.size(); ++x) {
    if (states[x].size() != out.size()) throw InvalidInput("mix: states have different fiducial counts");
    out += weights[x] * states[x].probs();
    truncated = truncated || states[x].truncated();
  }
  return GptState(std::move(out), truncated);
}

StateSampler haar_sampler(Index dim) {
  return [dim](Rng& rng) { return PureState::haar(dim, rng); };
}

SpaceDimensions space_dimensions(std::span<const OutcomeFunction> theory, const StateSampler& sampler,
                                 Index n_samples, std::uint64_t seed, double tolerance) {
  if (theory.empty()) throw InvalidInput("space_dimensions: empty theory");
  if (!(tolerance > 0)) throw InvalidInput("space_dimensions: tolerance must be positive");
  const Index n_functions = static_cast<Index>(theory.size());
  if (n_samples < 10 * n_functions)
    throw InvalidInput("space_dimensions: need at least " + std::to_string(10 * n_functions) + " samples");

  // rows: sampled states (GptState vectors over the whole theory)
  MatrixXd values(n_samples, n_functions);
  Rng rng = make_rng(seed, {0x9d7});
  for (Index s = 0; s < n_samples; ++s) {
    const PureState psi = sampler(rng);
    for (Index f = 0; f < n_functions; ++f) values(s, f) = theory[static_cast<std::size_t>(f)](psi);
  }

  const NumericalRank effects = numerical_rank(values, tolerance);
  const MatrixXd centered = values.rowwise() - values.colwise().mean();
  const NumericalRank states = numerical_rank(centered, tolerance);

  SpaceDimensions out;
  out.dim_effects = effects.rank;
  out.dim_states = states.rank;
  out.effect_singular_values = effects.singular_values;
  out.state_singular_values = states.singular_values;

  std::ostringstream diag;
  if (rank_is_ambiguous(effects, tolerance) || rank_is_ambiguous(states, tolerance)) {
    out.inconclusive = true;
    diag << "singular-value gap too small to separate rank from noise; ";
  }
  if (effects.rank == n_functions) {
    out.inconclusive = true;
    diag << "every supplied outcome function is independent; the family may not span the effect space; ";
  }
  out.diagnostics = diag.str();
  return out;
}

LinearPredictor fit_predictor(const OutcomeFunction& f, const FiducialSet& fiducials, Index n_samples,
                              std::uint64_t seed) {
  const Index n_fid = static_cast<Index>(fiducials.size());
  if (n_samples < n_fid) throw InvalidInput("fit_predictor: need at least one sample per fiducial");
  Rng rng = make_rng(seed, {0xf1d});
  MatrixXd design(n_samples, n_fid);
  VectorXd target(n_samples);
  for (Index s = 0; s < n_samples; ++s) {
    const PureState psi = PureState::haar(fiducials.dim(), rng);
    design.row(s) = fiducial_probs(psi, fiducials).probs().transpose();
    target(s) = f(psi);
  }
  LinearPredictor out;
  out.coefficients = design.colPivHouseholderQr().solve(target);
  out.fit_residual = (design * out.coefficients - target).cwiseAbs().maxCoeff();
  return out;
}

double affinity_violation(const FiducialSet& fiducials, std::size_t trials, std::uint64_t seed) {
  const Index a = fiducials.dim();
  const Index fit_samples = 10 * static_cast<Index>(fiducials.size());
  double worst = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, {0xaff, static_cast<std::uint64_t>(t)});
    const OutcomeFunction f = born_outcome("f", random_effect(a, rng));
    const LinearPredictor predict = fit_predictor(f, fiducials, fit_samples, rng());
    VectorXd w(3);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (Index x = 0; x < 3; ++x) w(x) = uniform(rng) + 1e-3;
    w /= w.sum();
    Ensemble ensemble;
    double direct = 0;
    for (Index x = 0; x < 3; ++x) {
      PureState psi = PureState::haar(a, rng);
      direct += w(x) * f(psi);
      ensemble.parts.emplace_back(w(x), std::move(psi));
    }
    worst = std::max(worst, std::abs(predict(fiducial_probs(ensemble, fiducials)) - direct));
  }
  return worst;
}

std::vector<OutcomeFunction> quantum_effect_family(Index a, std::size_t count, std::uint64_t seed) {
  Rng rng = make_rng(seed, {0xe11ec7});
  std::vector<OutcomeFunction> out;
  out.push_back(born_outcome("unit", MatrixXc::Identity(a, a)));
  for (std::size_t i = 0; i < count; ++i) out.push_back(born_outcome("E" + std::to_string(i), random_effect(a, rng)));
  return out;
}

std::vector<OutcomeFunction> classical_effect_family(Index a, std::size_t count, std::uint64_t seed) {
  Rng rng = make_rng(seed, {0xc1a55});
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<OutcomeFunction> out;
  out.push_back(born_outcome("unit", MatrixXc::Identity(a, a)));
  for (std::size_t i = 0; i < count; ++i) {
    MatrixXc e = MatrixXc::Zero(a, a);
    for (Index d = 0; d < a; ++d) e(d, d) = uniform(rng);
    out.push_back(born_outcome("D" + std::to_string(i), std::move(e)));
  }
  return out;
}

}  // namespace postulatelab
