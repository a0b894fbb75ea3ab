#pragma once

// Operational layer: preparations are represented by the vector of their
// fiducial outcome probabilities, mixtures act convexly on those vectors,
// and the dimensions of the state and effect spaces can be estimated from
// samples.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "postulatelab/quantum_core.hpp"

namespace postulatelab {

struct OutcomeFunction {
  std::string label;
  std::function<double(const PureState&)> probability;

  double operator()(const PureState& psi) const { return probability(psi); }
};

// Born-rule outcome psi |-> <psi|E|psi>.
OutcomeFunction born_outcome(std::string label, MatrixXc effect);

// Finite list of outcomes whose probabilities pin down every other outcome
// probability. Only finite lists are representable; `truncated` marks a
// finite prefix of a larger (countable) fiducial list.
class FiducialSet {
public:
  // Rejects outcome lists in which two outcomes agree on a fixed
  // Haar sample of 64 states (they would not separate points).
  FiducialSet(Index dim, std::vector<OutcomeFunction> outcomes, bool truncated = false);

  // {<Z+>, <X+>, <Y+>, unit} on C^2.
  static FiducialSet qubit_pauli();
  // a^2 rank-one projectors (computational basis plus the real and
  // imaginary superpositions of each pair) spanning the Hermitian matrices.
  static FiducialSet tomographic(Index a);

  Index dim() const { return dim_; }
  std::size_t size() const { return outcomes_.size(); }
  bool truncated() const { return truncated_; }
  const std::vector<OutcomeFunction>& outcomes() const { return outcomes_; }

private:
  Index dim_;
  std::vector<OutcomeFunction> outcomes_;
  bool truncated_;
};

// Proper ensemble of rays on a single system.
struct Ensemble {
  std::vector<std::pair<double, PureState>> parts;
};

class GptState {
public:
  // Entries must lie in [0, 1] (within 1e-12; clamped).
  explicit GptState(VectorXd probs, bool truncated = false);

  const VectorXd& probs() const { return probs_; }
  Index size() const { return probs_.size(); }
  double operator[](Index i) const { return probs_(i); }
  bool truncated() const { return truncated_; }

private:
  VectorXd probs_;
  bool truncated_;
};

GptState fiducial_probs(const PureState& psi, const FiducialSet& fiducials);
GptState fiducial_probs(const Ensemble& ensemble, const FiducialSet& fiducials);

GptState mix(std::span<const GptState> states, std::span<const double> weights);

using StateSampler = std::function<PureState(Rng&)>;

StateSampler haar_sampler(Index dim);

struct SpaceDimensions {
  Index dim_states = 0;   // affine dimension of the sampled state cloud
  Index dim_effects = 0;  // linear dimension of the span of the outcome functions
  bool inconclusive = false;
  std::string diagnostics;
  VectorXd state_singular_values;
  VectorXd effect_singular_values;

  bool satisfies_duality() const { return !inconclusive && dim_effects == dim_states + 1; }
};

// Linear read-out of an outcome probability from fiducial probabilities,
// P(f | omega) = c . omega, fitted by least squares on sampled rays.
struct LinearPredictor {
  VectorXd coefficients;
  double fit_residual = 0;  // max |f(psi) - c . omega_psi| over the fit sample

  double operator()(const GptState& omega) const { return coefficients.dot(omega.probs()); }
};

LinearPredictor fit_predictor(const OutcomeFunction& f, const FiducialSet& fiducials, Index n_samples,
                              std::uint64_t seed);

// Max over trials of |P(f | sum_x p_x omega_x) - sum_x p_x f(psi_x)| for a
// random Born outcome f, three random rays and random weights.
double affinity_violation(const FiducialSet& fiducials, std::size_t trials, std::uint64_t seed);

// `n_samples` must be at least 10x the number of outcome functions, which
// bounds the dimension being estimated.
SpaceDimensions space_dimensions(std::span<const OutcomeFunction> theory, const StateSampler& sampler,
                                 Index n_samples, std::uint64_t seed, double tolerance = 1e-8);

// Unit outcome plus `count` Born outcomes with random effects on C^a.
std::vector<OutcomeFunction> quantum_effect_family(Index a, std::size_t count, std::uint64_t seed);

// Unit outcome plus `count` outcomes with random diagonal effects.
std::vector<OutcomeFunction> classical_effect_family(Index a, std::size_t count, std::uint64_t seed);

}  // namespace postulatelab
