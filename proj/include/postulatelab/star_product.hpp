#pragma once

// Composition rules (f, h) -> f * h for OPFs on C^a and C^b, and Monte
// Carlo checkers for the structural constraints such a rule has to meet.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "postulatelab/opf.hpp"

namespace postulatelab {

class StarProduct {
public:
  using Rule = std::function<Opf(const Opf&, const Opf&)>;

  StarProduct(std::string label, Rule rule) : label_(std::move(label)), rule_(std::move(rule)) {}

  // Throws InvalidInput if the rule returns an OPF whose dimension is not a*b.
  Opf operator()(const Opf& f, const Opf& h) const;

  const std::string& label() const { return label_; }

private:
  std::string label_;
  Rule rule_;
};

// F_f (x) F_h; both operands must have k = 1.
Opf quantum_star(const Opf& f, const Opf& h);

StarProduct quantum_star_product();

// (1 - eps) F_f (x) F_h + eps F_f^2 (x) F_h^2: admissible but not bilinear.
StarProduct broken_bilinear_product(double eps);

// scale * F_f (x) F_h: breaks u_a * u_b = u_ab.
StarProduct scaled_product(double scale);

enum class Axiom {
  Bilinearity,
  Covariance,
  Unit,
  Zero,
  ReducedState,
  Factorization,
  Associativity,
  NoSignalling,
};

inline constexpr std::array<Axiom, 8> kAllAxioms = {Axiom::Bilinearity,  Axiom::Covariance,  Axiom::Unit,
                                                    Axiom::Zero,         Axiom::ReducedState, Axiom::Factorization,
                                                    Axiom::Associativity, Axiom::NoSignalling};

std::string_view axiom_id(Axiom axiom);

struct AxiomCheckConfig {
  Index a = 2;
  Index b = 2;
  Index c = 2;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  unsigned threads = 1;
  SymPower power{1};
};

struct AxiomReport {
  std::string label;
  std::vector<std::pair<Axiom, double>> violations;  // in kAllAxioms order
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double tol = 0;
  unsigned threads = 1;

  double violation(Axiom axiom) const;
  bool passed(Axiom axiom) const { return violation(axiom) < tol; }
  bool passed() const;
};

// Max violation of a single axiom over config.trials random instances. Trial
// t draws from its own seed stream, so the result is independent of the
// thread count.
double max_violation(const StarProduct& star, Axiom axiom, const AxiomCheckConfig& config);

AxiomReport check_axioms(const StarProduct& star, const AxiomCheckConfig& config);

// max |sum_i (f_i * g)(psi) - sum_j (h_j * g)(psi)| over random states and
// pairs of measurements, on either side.
double check_no_signalling(const StarProduct& star, const AxiomCheckConfig& config);

nlohmann::ordered_json to_json(const AxiomReport& report);

}  // namespace postulatelab
