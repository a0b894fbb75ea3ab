#pragma once

// Outcome probability functions on rays of C^a of the form
//
//   f(psi) = tr(F |psi><psi|^{(x)k}),
//
// with F a Hermitian matrix stored in the orthonormal basis of Sym^k(C^a).
// k = 1 is the ordinary Born rule.

#include <span>
#include <vector>

#include <json.hpp>

#include "postulatelab/quantum_core.hpp"

namespace postulatelab {

// Tensor power of the symmetric representation (not an entropy bin).
struct SymPower {
  int value = 1;
  constexpr explicit SymPower(int v) : value(v) {}
  friend constexpr bool operator==(SymPower, SymPower) = default;
};

class Opf {
public:
  // Validates 0 <= F <= 1 on the symmetric subspace.
  Opf(Index a, SymPower k, MatrixXc f);

  static Opf unit(Index a, SymPower k = SymPower(1));
  static Opf zero(Index a, SymPower k = SymPower(1));
  // k = 1 OPF from a POVM element on C^a.
  static Opf from_effect(const MatrixXc& effect);
  // F = G^dag G / ||G^dag G|| with G complex Gaussian.
  static Opf random(Index a, SymPower k, Rng& rng);

  Index dim() const { return a_; }
  SymPower power() const { return k_; }
  Index sym_dim() const { return F_.rows(); }
  const MatrixXc& matrix() const { return F_; }

  double operator()(const PureState& psi) const;

private:
  Index a_;
  SymPower k_;
  MatrixXc F_;
};

// Outcomes sharing (a, k) whose F-matrices sum to the identity.
class Measurement {
public:
  static Measurement create(std::vector<Opf> outcomes);
  // Haar-random k = 1 POVM: E_i = W^dag (|i><i| (x) 1) W for a random
  // isometry W: C^a -> C^n (x) C^a.
  static Measurement random(Index a, std::size_t n_outcomes, Rng& rng);

  std::size_t size() const { return outcomes_.size(); }
  const std::vector<Opf>& outcomes() const { return outcomes_; }
  const Opf& operator[](std::size_t i) const { return outcomes_.at(i); }

private:
  explicit Measurement(std::vector<Opf> o) : outcomes_(std::move(o)) {}
  std::vector<Opf> outcomes_;
};

double eval(const Opf& f, const PureState& psi);

// f o U: evaluates as f(U psi).
Opf compose_unitary(const Opf& f, const MatrixXc& u);

Opf mix(std::span<const Opf> fs, std::span<const double> weights);

// psi |-> f(psi (x) phi) for f on C^(a*b), phi on C^b.
Opf restrict_with_ancilla(const Opf& f, const PureState& phi);

struct NormalizationCheck {
  double max_deviation = 0;        // max_psi |sum_i f_i(psi) - 1|
  double algebraic_deviation = 0;  // ||sum_i F_i - 1||, spectral norm
};

NormalizationCheck check_normalization(std::span<const Opf> outcomes, std::span<const PureState> states);
NormalizationCheck check_normalization(const Measurement& m, std::span<const PureState> states);

// Wire format: {"a": a, "k": k, "F": [[re, im], ...]} with F row-major.
nlohmann::json to_json(const Opf& f);
Opf opf_from_json(const nlohmann::json& j);

}  // namespace postulatelab
