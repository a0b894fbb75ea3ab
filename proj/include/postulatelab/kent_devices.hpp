#pragma once

// Simulators for hypothetical readout devices that act on the reduced state
// of a bipartite ray: the state-readout device (outputs rho_A), the
// stochastic positive-operator device (Born statistics, state left
// untouched) and the finite-precision entropy meter (outputs an entropy bin).
// Inputs are proper mixtures of bipartite rays.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "postulatelab/opf.hpp"
#include "postulatelab/quantum_core.hpp"

namespace postulatelab {

class ProperMixture {
public:
  struct Part {
    double weight;
    PureState state;
  };

  // Weights nonnegative and summing to 1 within 1e-12; all parts on C^a (x) C^b.
  ProperMixture(Index a, Index b, std::vector<Part> parts);

  static ProperMixture pure(Index a, Index b, PureState psi);

  Index a() const { return a_; }
  Index b() const { return b_; }
  const std::vector<Part>& parts() const { return parts_; }

private:
  Index a_;
  Index b_;
  std::vector<Part> parts_;
};

enum class EntropyKind { VonNeumann, Renyi2 };

std::string_view entropy_kind_id(EntropyKind kind);
EntropyKind parse_entropy_kind(std::string_view id);

double entropy(const DensityMatrix& rho, EntropyKind kind);

// Meter reading k in {0, .01, ...}: the largest multiple of .01 below
// log2(d) with k <= S < k + .01. S = log2(d) reads as the top bin.
class EntropyBin {
public:
  static EntropyBin from_value(double value, Index dim);
  static EntropyBin of_entropy(double s, Index dim);
  static int top_hundredths(Index dim);

  int hundredths() const { return hundredths_; }
  double value() const { return hundredths_ / 100.0; }
  Index dim() const { return dim_; }

  friend bool operator==(const EntropyBin&, const EntropyBin&) = default;

private:
  EntropyBin(int h, Index d) : hundredths_(h), dim_(d) {}
  int hundredths_;
  Index dim_;
};

using OutcomeKey = std::vector<std::int64_t>;
using OutcomeDistribution = std::map<OutcomeKey, double>;

double total_variation(const OutcomeDistribution& p, const OutcomeDistribution& q);

// |psi> -> (1 (x) Q_x)|psi> / sqrt(p_x); parts below 1e-12 are dropped.
ProperMixture remote_projective_measure(const PureState& psi, Index a, const Povm& q);

struct SrOutcome {
  MatrixXc reduced;  // entrywise rounded to a multiple of the precision
  double probability;
};

std::vector<SrOutcome> m_sr(const ProperMixture& input, double precision = 1e-6);

struct BinOutcome {
  EntropyBin bin;
  double probability;
};

std::vector<BinOutcome> m_fpem(const ProperMixture& input, Side side = Side::A,
                               EntropyKind kind = EntropyKind::VonNeumann);

// A device reading the A-side of a proper mixture of bipartite rays.
class ReadoutDevice {
public:
  virtual ~ReadoutDevice() = default;
  virtual std::string name() const = 0;
  virtual OutcomeDistribution distribution(const ProperMixture& input) const = 0;
  virtual nlohmann::ordered_json describe(const OutcomeKey& key) const = 0;
};

class StateReadoutDevice final : public ReadoutDevice {
public:
  explicit StateReadoutDevice(double precision = 1e-6);
  std::string name() const override { return "sr"; }
  OutcomeDistribution distribution(const ProperMixture& input) const override;
  nlohmann::ordered_json describe(const OutcomeKey& key) const override;
  double precision() const { return precision_; }

private:
  double precision_;
};

class EntropyMeterDevice final : public ReadoutDevice {
public:
  explicit EntropyMeterDevice(EntropyKind kind = EntropyKind::VonNeumann, Side side = Side::A)
      : kind_(kind), side_(side) {}
  std::string name() const override { return "fpem"; }
  OutcomeDistribution distribution(const ProperMixture& input) const override;
  nlohmann::ordered_json describe(const OutcomeKey& key) const override;

private:
  EntropyKind kind_;
  Side side_;
};

// Ordinary POVM on A: outcome i with probability sum_x p_x <psi_x|X_i (x) 1|psi_x>.
class BornMarginalDevice final : public ReadoutDevice {
public:
  explicit BornMarginalDevice(Povm povm) : povm_(std::move(povm)) {}
  std::string name() const override { return "born"; }
  OutcomeDistribution distribution(const ProperMixture& input) const override;
  nlohmann::ordered_json describe(const OutcomeKey& key) const override;

private:
  Povm povm_;
};

struct SignallingReport {
  std::string device;
  OutcomeDistribution baseline;
  OutcomeDistribution after_remote;
  double tv = 0;
  bool signalling = false;
};

SignallingReport detect_signalling(const PureState& psi, Index a, const Povm& remote, const ReadoutDevice& device,
                                   double tol = 1e-9);

nlohmann::ordered_json to_json(const SignallingReport& report, const ReadoutDevice& device);

// P(j, i) = <psi|Y_j|psi> <psi|X_i|psi>; rows j index Y, columns i index X.
MatrixXd sequential_spo_then_povm(const PureState& psi, const Povm& x, const Povm& y);

using ProbabilityFunction = std::function<double(const PureState&)>;

struct QuadraticFit {
  double relative_residual = 0;  // sqrt(min sum (f - <psi|Z|psi>)^2 / sum f^2)
  MatrixXc z;
};

// Least-squares Hermitian Z; needs at least 4 a^2 samples.
QuadraticFit quadratic_fit_residual(const ProbabilityFunction& f, std::span<const PureState> samples);
QuadraticFit quadratic_fit_residual(const ProbabilityFunction& f, Index dim, Index n_samples, std::uint64_t seed);

// Three-step protocol on a qubit: attach |0>, apply CNOT, read the A-side
// entropy meter. Returns 1 if the reading is `bin`, else 0.
ProbabilityFunction cnot_entropy_opf(EntropyBin bin, EntropyKind kind);

// Same indicator from the binary entropy of |alpha|^2.
ProbabilityFunction closed_form_entropy_indicator(EntropyBin bin, EntropyKind kind);

// k = 1 OPF on A evaluated on the A-marginal of a mixture: sum_x p_x tr(F rho_x).
double quantum_outcome_probability(const Opf& f, const ProperMixture& input);

}  // namespace postulatelab
