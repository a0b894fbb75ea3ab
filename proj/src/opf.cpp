#include "postulatelab/opf.hpp"

#include <numeric>
#include <string>

#include <json.hpp>

namespace postulatelab {

namespace {

void require_weights(std::span<const double> weights, std::size_t n) {
  if (weights.size() != n) throw InvalidInput("weights: expected " + std::to_string(n) + " entries");
  double sum = 0;
  for (double w : weights) {
    if (!(w >= 0)) throw InvalidInput("weights: negative or NaN weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > tol::kWeights) throw InvalidInput("weights: do not sum to 1");
}

}  // namespace

Opf::Opf(Index a, SymPower k, MatrixXc f) : a_(a), k_(k), F_(std::move(f)) {
  if (a < 2) throw InvalidInput("opf: dimension a must be >= 2");
  if (k.value < 1) throw InvalidInput("opf: power k must be >= 1");
  const Index d = binomial(a + k.value - 1, k.value);
  if (F_.rows() != d || F_.cols() != d)
    throw InvalidInput("opf: F must be " + std::to_string(d) + "x" + std::to_string(d) + " for (a, k) = (" +
                       std::to_string(a) + ", " + std::to_string(k.value) + ")");
  if (hermiticity_defect(F_) > tol::kSpectrum) throw InvalidInput("opf: F is not Hermitian");
  const VectorXd ev = hermitian_eigenvalues(F_);
  if (ev.minCoeff() < -tol::kSpectrum || ev.maxCoeff() > 1.0 + tol::kSpectrum)
    throw InvalidInput("opf: F violates 0 <= F <= 1");
}

Opf Opf::unit(Index a, SymPower k) {
  const Index d = binomial(a + k.value - 1, k.value);
  return Opf(a, k, MatrixXc::Identity(d, d));
}

Opf Opf::zero(Index a, SymPower k) {
  const Index d = binomial(a + k.value - 1, k.value);
  return Opf(a, k, MatrixXc::Zero(d, d));
}

Opf Opf::from_effect(const MatrixXc& effect) { return Opf(effect.rows(), SymPower(1), effect); }

Opf Opf::random(Index a, SymPower k, Rng& rng) {
  const Index d = binomial(a + k.value - 1, k.value);
  const MatrixXc g = ginibre<double>(d, d, rng);
  MatrixXc f = g.adjoint() * g;
  f = (f + f.adjoint()).eval() / 2.0;
  f /= hermitian_eigenvalues(f).maxCoeff();
  return Opf(a, k, std::move(f));
}

double Opf::operator()(const PureState& psi) const { return eval(*this, psi); }

double eval(const Opf& f, const PureState& psi) {
  if (psi.dim() != f.dim())
    throw InvalidInput("opf eval: state dimension " + std::to_string(psi.dim()) + " != " + std::to_string(f.dim()));
  const int k = f.power().value;
  const VectorXc s = k == 1 ? psi.amplitudes() : symmetric_subspace(f.dim(), k).power(psi.amplitudes());
  const double value = s.dot(f.matrix() * s).real();
  return std::clamp(value, 0.0, 1.0);
}

Opf compose_unitary(const Opf& f, const MatrixXc& u) {
  if (u.rows() != f.dim() || u.cols() != f.dim()) throw InvalidInput("compose_unitary: dimension mismatch");
  if (!is_unitary(u, tol::kSpectrum)) throw InvalidInput("compose_unitary: operator is not unitary");
  const MatrixXc s =
      f.power().value == 1 ? u : symmetric_subspace(f.dim(), f.power().value).restrict_operator(u);
  MatrixXc g = s.adjoint() * f.matrix() * s;
  g = (g + g.adjoint()).eval() / 2.0;
  return Opf(f.dim(), f.power(), std::move(g));
}

Opf mix(std::span<const Opf> fs, std::span<const double> weights) {
  if (fs.empty()) throw InvalidInput("mix: no OPFs");
  require_weights(weights, fs.size());
  const Index a = fs.front().dim();
  const SymPower k = fs.front().power();
  MatrixXc g = MatrixXc::Zero(fs.front().sym_dim(), fs.front().sym_dim());
  for (std::size_t x = 0; x < fs.size(); ++x) {
    if (fs[x].dim() != a || fs[x].power() != k) throw InvalidInput("mix: OPFs do not share (a, k)");
    g += weights[x] * fs[x].matrix();
  }
  return Opf(a, k, std::move(g));
}

Opf restrict_with_ancilla(const Opf& f, const PureState& phi) {
  const Index b = phi.dim();
  if (b < 1 || f.dim() % b != 0)
    throw InvalidInput("restrict_with_ancilla: dimension " + std::to_string(f.dim()) + " is not divisible by " +
                       std::to_string(b));
  const Index a = f.dim() / b;
  if (a < 2) throw InvalidInput("restrict_with_ancilla: remaining dimension must be >= 2");
  const int k = f.power().value;

  MatrixXc t;
  if (k == 1) {
    t = kron(MatrixXc(MatrixXc::Identity(a, a)), MatrixXc(phi.amplitudes()));
  } else {
    // T = V_ab^dag P (V_a (x) phi^{(x)k}), P regrouping A^k B^k into (AB)^k.
    const SymmetricSubspace sym_a = symmetric_subspace(a, k);
    const SymmetricSubspace sym_ab = symmetric_subspace(a * b, k);
    t.resize(sym_ab.dim(), sym_a.dim());
    VectorXc w(sym_ab.full_dim());
    for (Index m = 0; m < sym_a.dim(); ++m) {
      const VectorXc x = sym_a.lift(VectorXc::Unit(sym_a.dim(), m));
      for (Index idx = 0; idx < sym_ab.full_dim(); ++idx) {
        Index rem = idx;
        Index ia = 0;
        Index scale = 1;
        cplx weight(1);
        for (int q = k - 1; q >= 0; --q) {
          const Index digit = rem % (a * b);
          rem /= a * b;
          ia += (digit / b) * scale;
          scale *= a;
          weight *= phi[digit % b];
        }
        w(idx) = x(ia) * weight;
      }
      t.col(m) = sym_ab.compress(w);
    }
  }
  MatrixXc g = t.adjoint() * f.matrix() * t;
  g = (g + g.adjoint()).eval() / 2.0;
  // T is an isometry, so the spectrum stays in [0, 1] up to rounding.
  return Opf(a, f.power(), std::move(g));
}

Measurement Measurement::create(std::vector<Opf> outcomes) {
  if (outcomes.empty()) throw InvalidInput("measurement: no outcomes");
  const Index a = outcomes.front().dim();
  const SymPower k = outcomes.front().power();
  MatrixXc sum = MatrixXc::Zero(outcomes.front().sym_dim(), outcomes.front().sym_dim());
  for (const auto& f : outcomes) {
    if (f.dim() != a || f.power() != k) throw InvalidInput("measurement: outcomes do not share (a, k)");
    sum += f.matrix();
  }
  if ((sum - MatrixXc::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff() > tol::kSpectrum)
    throw InvalidInput("measurement: outcomes do not sum to the unit OPF");
  return Measurement(std::move(outcomes));
}

Measurement Measurement::random(Index a, std::size_t n_outcomes, Rng& rng) {
  if (n_outcomes < 1) throw InvalidInput("measurement: need at least one outcome");
  const Index n = static_cast<Index>(n_outcomes);
  const MatrixXc w = haar_isometry<double>(a, n * a, rng);
  std::vector<Opf> outcomes;
  outcomes.reserve(n_outcomes);
  for (Index i = 0; i < n; ++i) {
    const auto block = w.middleRows(i * a, a);
    MatrixXc e = block.adjoint() * block;
    e = (e + e.adjoint()).eval() / 2.0;
    outcomes.emplace_back(a, SymPower(1), std::move(e));
  }
  return create(std::move(outcomes));
}

NormalizationCheck check_normalization(std::span<const Opf> outcomes, std::span<const PureState> states) {
  if (outcomes.empty()) throw InvalidInput("check_normalization: no outcomes");
  if (states.empty()) throw InvalidInput("check_normalization: empty state sample");
  NormalizationCheck out;
  MatrixXc sum = MatrixXc::Zero(outcomes.front().sym_dim(), outcomes.front().sym_dim());
  for (const auto& f : outcomes) {
    if (f.sym_dim() != sum.rows()) throw InvalidInput("check_normalization: outcomes do not share (a, k)");
    sum += f.matrix();
  }
  out.algebraic_deviation =
      hermitian_eigenvalues(MatrixXc(sum - MatrixXc::Identity(sum.rows(), sum.cols()))).cwiseAbs().maxCoeff();
  for (const auto& psi : states) {
    double total = 0;
    for (const auto& f : outcomes) total += eval(f, psi);
    out.max_deviation = std::max(out.max_deviation, std::abs(total - 1.0));
  }
  return out;
}

NormalizationCheck check_normalization(const Measurement& m, std::span<const PureState> states) {
  return check_normalization(std::span<const Opf>(m.outcomes()), states);
}

nlohmann::json to_json(const Opf& f) {
  nlohmann::json entries = nlohmann::json::array();
  for (Index i = 0; i < f.sym_dim(); ++i)
    for (Index j = 0; j < f.sym_dim(); ++j) entries.push_back({f.matrix()(i, j).real(), f.matrix()(i, j).imag()});
  return {{"a", f.dim()}, {"k", f.power().value}, {"F", std::move(entries)}};
}

Opf opf_from_json(const nlohmann::json& j) {
  try {
    const Index a = j.at("a").get<Index>();
    const int k = j.at("k").get<int>();
    if (a < 2 || k < 1) throw InvalidInput("opf json: a must be >= 2 and k >= 1");
    const Index d = binomial(a + k - 1, k);
    const auto& entries = j.at("F");
    if (!entries.is_array() || static_cast<Index>(entries.size()) != d * d)
      throw InvalidInput("opf json: F must hold " + std::to_string(d * d) + " [re, im] pairs");
    MatrixXc f(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index c = 0; c < d; ++c) {
        const auto& e = entries.at(static_cast<std::size_t>(i * d + c));
        if (!e.is_array() || e.size() != 2) throw InvalidInput("opf json: F entries must be [re, im] pairs");
        f(i, c) = cplx(e[0].get<double>(), e[1].get<double>());
      }
    return Opf(a, SymPower(k), std::move(f));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("opf json: ") + e.what());
  }
}

}  // namespace postulatelab
