#pragma once

// Validated finite-dimensional quantum objects: rays, density matrices,
// POVMs and k-fold symmetric subspaces, plus the free functions that act on
// them (partial trace, entropies, tensor products).
//
// Everything here is templated on the real scalar; the rest of the library
// works with the double instantiation through the aliases at the bottom.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "postulatelab/random.hpp"
#include "postulatelab/types.hpp"

namespace postulatelab {

enum class Side { A, B };

template <typename Lhs, typename Rhs>
auto kron(const Eigen::MatrixBase<Lhs>& lhs, const Eigen::MatrixBase<Rhs>& rhs) {
  using Plain = typename Lhs::PlainObject;
  Plain out = Eigen::kroneckerProduct(lhs.derived(), rhs.derived());
  return out;
}

template <typename Real>
bool is_unitary(const CMat<Real>& u, Real tolerance) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - CMat<Real>::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tolerance;
}

template <typename Real>
Real hermiticity_defect(const CMat<Real>& m) {
  if (m.size() == 0) return 0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Eigenvalues of the Hermitian part, ascending.
template <typename Real>
RVec<Real> hermitian_eigenvalues(const CMat<Real>& m) {
  const CMat<Real> h = (m + m.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<CMat<Real>> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// -----------------------------------------------------------------------------
// PureState

template <typename Real = double>
class BasicPureState {
public:
  static BasicPureState from_amplitudes(CVec<Real> amplitudes) {
    if (amplitudes.size() < 1) throw InvalidInput("pure state: dimension must be positive");
    if (std::abs(amplitudes.norm() - Real(1)) > Real(tol::kNorm))
      throw InvalidInput("pure state: amplitudes are not normalized (norm " +
                         std::to_string(double(amplitudes.norm())) + ")");
    return BasicPureState(std::move(amplitudes));
  }

  static BasicPureState normalized(CVec<Real> v) {
    const Real n = v.norm();
    if (v.size() < 1 || !(n > 0)) throw InvalidInput("pure state: cannot normalize a zero vector");
    v /= n;
    return BasicPureState(std::move(v));
  }

  static BasicPureState basis(Index dim, Index i) {
    if (i < 0 || i >= dim) throw InvalidInput("pure state: basis index out of range");
    CVec<Real> v = CVec<Real>::Zero(dim);
    v(i) = 1;
    return BasicPureState(std::move(v));
  }

  static BasicPureState haar(Index dim, Rng& rng) { return BasicPureState(haar_vector<Real>(dim, rng)); }

  Index dim() const { return amps_.size(); }
  const CVec<Real>& amplitudes() const { return amps_; }
  Complex<Real> operator[](Index i) const { return amps_(i); }

  CMat<Real> projector() const { return amps_ * amps_.adjoint(); }

  // <this|other>
  Complex<Real> overlap(const BasicPureState& other) const {
    if (other.dim() != dim()) throw InvalidInput("pure state: dimension mismatch in overlap");
    return amps_.dot(other.amps_);
  }

  // Rays, not vectors: equality up to a global phase.
  bool same_ray(const BasicPureState& other, Real tolerance = Real(tol::kSameRay)) const {
    return other.dim() == dim() && std::abs(overlap(other)) >= Real(1) - tolerance;
  }

  Complex<Real> expectation(const CMat<Real>& op) const {
    if (op.rows() != dim() || op.cols() != dim()) throw InvalidInput("pure state: operator dimension mismatch");
    return amps_.dot(op * amps_);
  }

  BasicPureState transformed(const CMat<Real>& unitary) const {
    if (unitary.rows() != dim() || unitary.cols() != dim())
      throw InvalidInput("pure state: unitary dimension mismatch");
    CVec<Real> v = unitary * amps_;
    v /= v.norm();
    return BasicPureState(std::move(v));
  }

private:
  explicit BasicPureState(CVec<Real> a) : amps_(std::move(a)) {}
  CVec<Real> amps_;
};

template <typename Real>
BasicPureState<Real> tensor(const BasicPureState<Real>& lhs, const BasicPureState<Real>& rhs) {
  CVec<Real> v = kron(lhs.amplitudes(), rhs.amplitudes());
  return BasicPureState<Real>::normalized(std::move(v));
}

template <typename Real>
CVec<Real> tensor_power(const CVec<Real>& v, int k) {
  CVec<Real> out = CVec<Real>::Ones(1);
  for (int t = 0; t < k; ++t) out = kron(out, v);
  return out;
}

// Apply `op` (d x d) to the middle factor of a vector on C^left (x) C^d (x) C^right.
template <typename Real>
void apply_on_factor(const CMat<Real>& op, CVec<Real>& x, Index left, Index d, Index right) {
  CVec<Real> slice(d);
  for (Index l = 0; l < left; ++l) {
    for (Index r = 0; r < right; ++r) {
      for (Index i = 0; i < d; ++i) slice(i) = x((l * d + i) * right + r);
      slice = (op * slice).eval();
      for (Index i = 0; i < d; ++i) x((l * d + i) * right + r) = slice(i);
    }
  }
}

// -----------------------------------------------------------------------------
// DensityMatrix

template <typename Real = double>
class BasicDensityMatrix {
public:
  static BasicDensityMatrix from_matrix(CMat<Real> m) {
    if (m.rows() < 1 || m.rows() != m.cols()) throw InvalidInput("density matrix: must be square and nonempty");
    if (hermiticity_defect(m) > Real(tol::kHermitian)) throw InvalidInput("density matrix: not Hermitian");
    if (std::abs(m.trace().real() - Real(1)) > Real(tol::kSpectrum) ||
        std::abs(m.trace().imag()) > Real(tol::kSpectrum))
      throw InvalidInput("density matrix: trace differs from 1");
    if (hermitian_eigenvalues(m).minCoeff() < -Real(tol::kSpectrum))
      throw InvalidInput("density matrix: not positive semidefinite");
    return BasicDensityMatrix(std::move(m));
  }

  static BasicDensityMatrix from_pure(const BasicPureState<Real>& psi) { return BasicDensityMatrix(psi.projector()); }

  static BasicDensityMatrix maximally_mixed(Index dim) {
    if (dim < 1) throw InvalidInput("density matrix: dimension must be positive");
    return BasicDensityMatrix(CMat<Real>::Identity(dim, dim) / Real(dim));
  }

  static BasicDensityMatrix mixture(const std::vector<std::pair<Real, BasicPureState<Real>>>& parts) {
    if (parts.empty()) throw InvalidInput("density matrix: empty ensemble");
    const Index d = parts.front().second.dim();
    CMat<Real> m = CMat<Real>::Zero(d, d);
    for (const auto& [p, psi] : parts) {
      if (psi.dim() != d) throw InvalidInput("density matrix: ensemble dimension mismatch");
      m += p * psi.projector();
    }
    return from_matrix(std::move(m));
  }

  Index dim() const { return m_.rows(); }
  const CMat<Real>& matrix() const { return m_; }
  RVec<Real> eigenvalues() const { return hermitian_eigenvalues(m_); }
  Real purity() const { return (m_ * m_).trace().real(); }
  Real expectation(const CMat<Real>& op) const { return (op * m_).trace().real(); }

private:
  explicit BasicDensityMatrix(CMat<Real> m) : m_(std::move(m)) {}
  CMat<Real> m_;
};

// -----------------------------------------------------------------------------
// Povm

template <typename Real = double>
class BasicPovm {
public:
  static BasicPovm from_effects(std::vector<CMat<Real>> effects) {
    if (effects.empty()) throw InvalidInput("povm: no effects");
    const Index d = effects.front().rows();
    CMat<Real> sum = CMat<Real>::Zero(d, d);
    for (const auto& e : effects) {
      if (e.rows() != d || e.cols() != d) throw InvalidInput("povm: effect dimension mismatch");
      if (hermiticity_defect(e) > Real(tol::kSpectrum)) throw InvalidInput("povm: effect is not Hermitian");
      const RVec<Real> ev = hermitian_eigenvalues(e);
      if (ev.minCoeff() < -Real(tol::kSpectrum) || ev.maxCoeff() > Real(1) + Real(tol::kSpectrum))
        throw InvalidInput("povm: effect eigenvalues outside [0, 1]");
      sum += e;
    }
    if ((sum - CMat<Real>::Identity(d, d)).cwiseAbs().maxCoeff() > Real(tol::kSpectrum))
      throw InvalidInput("povm: effects do not sum to identity");
    return BasicPovm(std::move(effects));
  }

  // Rank-one projectors onto the columns of an orthonormal basis.
  static BasicPovm projective(const CMat<Real>& basis) {
    if (!is_unitary(basis, Real(tol::kSpectrum))) throw InvalidInput("povm: basis is not orthonormal");
    std::vector<CMat<Real>> effects;
    for (Index j = 0; j < basis.cols(); ++j) effects.push_back(basis.col(j) * basis.col(j).adjoint());
    return from_effects(std::move(effects));
  }

  static BasicPovm computational(Index dim) { return projective(CMat<Real>::Identity(dim, dim)); }

  static BasicPovm trivial(Index dim) { return from_effects({CMat<Real>::Identity(dim, dim)}); }

  Index dim() const { return effects_.front().rows(); }
  std::size_t size() const { return effects_.size(); }
  const std::vector<CMat<Real>>& effects() const { return effects_; }
  const CMat<Real>& effect(std::size_t i) const { return effects_.at(i); }

  bool is_projective(Real tolerance = Real(tol::kSpectrum)) const {
    return std::all_of(effects_.begin(), effects_.end(), [&](const CMat<Real>& e) {
      return (e * e - e).cwiseAbs().maxCoeff() <= tolerance;
    });
  }

  Real probability(std::size_t i, const BasicPureState<Real>& psi) const {
    return std::clamp(psi.expectation(effect(i)).real(), Real(0), Real(1));
  }

private:
  explicit BasicPovm(std::vector<CMat<Real>> e) : effects_(std::move(e)) {}
  std::vector<CMat<Real>> effects_;
};

// -----------------------------------------------------------------------------
// Partial trace

template <typename Real>
CMat<Real> partial_trace_matrix(const CMat<Real>& m, Index a, Index b, Side keep) {
  if (a < 1 || b < 1 || m.rows() != a * b || m.cols() != a * b)
    throw InvalidInput("partial trace: state dimension " + std::to_string(m.rows()) + " does not factor as " +
                       std::to_string(a) + "x" + std::to_string(b));
  if (keep == Side::B) {
    CMat<Real> out = CMat<Real>::Zero(b, b);
    for (Index i = 0; i < a; ++i) out += m.block(i * b, i * b, b, b);
    return out;
  }
  CMat<Real> out = CMat<Real>::Zero(a, a);
  for (Index k = 0; k < b; ++k) out += m(Eigen::seqN(k, a, b), Eigen::seqN(k, a, b));
  return out;
}

template <typename Real>
BasicDensityMatrix<Real> partial_trace(const BasicDensityMatrix<Real>& state, Index a, Index b, Side keep) {
  return BasicDensityMatrix<Real>::from_matrix(partial_trace_matrix(state.matrix(), a, b, keep));
}

// Reduced state of a bipartite ray: reshape amplitudes into the a x b
// coefficient matrix C, then rho_A = C C^dag and rho_B = C^T conj(C).
template <typename Real>
BasicDensityMatrix<Real> partial_trace(const BasicPureState<Real>& psi, Index a, Index b, Side keep) {
  if (a < 1 || b < 1 || psi.dim() != a * b)
    throw InvalidInput("partial trace: state dimension " + std::to_string(psi.dim()) + " does not factor as " +
                       std::to_string(a) + "x" + std::to_string(b));
  using RowMajor = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> coeff(psi.amplitudes().data(), a, b);
  CMat<Real> reduced = keep == Side::A ? CMat<Real>(coeff * coeff.adjoint())
                                       : CMat<Real>(coeff.transpose() * coeff.conjugate());
  return BasicDensityMatrix<Real>::from_matrix(std::move(reduced));
}

// -----------------------------------------------------------------------------
// Entropies (bits)

template <typename Real>
RVec<Real> clamped_spectrum(const BasicDensityMatrix<Real>& rho) {
  return rho.eigenvalues().cwiseMax(Real(0)).cwiseMin(Real(1));
}

template <typename Real>
Real shannon_entropy(const RVec<Real>& probs) {
  Real s = 0;
  for (Index i = 0; i < probs.size(); ++i)
    if (probs(i) > 0) s -= probs(i) * std::log2(probs(i));
  return std::max(s, Real(0));
}

template <typename Real>
Real von_neumann_entropy(const BasicDensityMatrix<Real>& rho) {
  return shannon_entropy<Real>(clamped_spectrum(rho));
}

template <typename Real>
Real renyi2_entropy(const BasicDensityMatrix<Real>& rho) {
  const Real purity = clamped_spectrum(rho).squaredNorm();
  return std::max(-std::log2(purity), Real(0));
}

// -----------------------------------------------------------------------------
// Symmetric subspace

inline constexpr Index kDefaultSizeCap = 4096;

// Sym^k(C^a) inside (C^a)^{(x)k}. Basis vectors are the normalized
// symmetrizations |S_m> of the sorted index tuples m = (i_1 <= ... <= i_k),
// ordered lexicographically; for k = 1 this is the computational basis.
template <typename Real = double>
class BasicSymmetricSubspace {
public:
  BasicSymmetricSubspace(Index a, int k, Index size_cap = kDefaultSizeCap) : a_(a), k_(k) {
    if (a < 2) throw InvalidInput("symmetric subspace: dimension a must be >= 2");
    if (k < 1) throw InvalidInput("symmetric subspace: power k must be >= 1");
    full_dim_ = 1;
    for (int t = 0; t < k; ++t) {
      full_dim_ *= a;
      if (full_dim_ > size_cap)
        throw ResourceError("symmetric subspace: a^k exceeds size cap " + std::to_string(size_cap));
    }
    enumerate();
  }

  Index a() const { return a_; }
  int k() const { return k_; }
  Index dim() const { return static_cast<Index>(tuples_.size()); }
  Index full_dim() const { return full_dim_; }

  const std::vector<std::vector<Index>>& tuples() const { return tuples_; }
  Index column_of(Index full_index) const { return column_of_[full_index]; }
  // Number of ordered index tuples represented by sorted tuple m.
  Real multiplicity(Index m) const { return multiplicity_[m]; }

  // a^k x D, real, orthonormal columns.
  RMat<Real> isometry() const {
    RMat<Real> v = RMat<Real>::Zero(full_dim_, dim());
    for (Index i = 0; i < full_dim_; ++i) v(i, column_of_[i]) = Real(1) / std::sqrt(multiplicity_[column_of_[i]]);
    return v;
  }

  // (1/k!) sum over permutations of the factor-permutation operator. Entry
  // (i, j) counts permutations sending tuple j to tuple i, which is nonzero
  // exactly when both share a sorted tuple m, and then equals 1 / N_m.
  RMat<Real> projector() const {
    RMat<Real> p = RMat<Real>::Zero(full_dim_, full_dim_);
    for (Index j = 0; j < full_dim_; ++j)
      for (Index i = 0; i < full_dim_; ++i)
        if (column_of_[i] == column_of_[j]) p(i, j) = Real(1) / multiplicity_[column_of_[i]];
    return p;
  }

  // V^dag |psi>^{(x)k}, computed without forming the a^k vector:
  // <S_m|psi^{(x)k}> = sqrt(N_m) prod_t psi_{m_t}.
  CVec<Real> power(const CVec<Real>& psi) const {
    if (psi.size() != a_) throw InvalidInput("symmetric subspace: vector dimension mismatch");
    CVec<Real> out(dim());
    for (Index m = 0; m < dim(); ++m) {
      Complex<Real> prod(1);
      for (Index i : tuples_[m]) prod *= psi(i);
      out(m) = std::sqrt(multiplicity_[m]) * prod;
    }
    return out;
  }

  // V^dag x for x in (C^a)^{(x)k}.
  CVec<Real> compress(const CVec<Real>& full) const {
    if (full.size() != full_dim_) throw InvalidInput("symmetric subspace: vector dimension mismatch");
    CVec<Real> out = CVec<Real>::Zero(dim());
    for (Index i = 0; i < full_dim_; ++i) out(column_of_[i]) += full(i);
    for (Index m = 0; m < dim(); ++m) out(m) /= std::sqrt(multiplicity_[m]);
    return out;
  }

  // V s for s in Sym^k.
  CVec<Real> lift(const CVec<Real>& sym) const {
    if (sym.size() != dim()) throw InvalidInput("symmetric subspace: vector dimension mismatch");
    CVec<Real> out(full_dim_);
    for (Index i = 0; i < full_dim_; ++i) out(i) = sym(column_of_[i]) / std::sqrt(multiplicity_[column_of_[i]]);
    return out;
  }

  // V^dag U^{(x)k} V, the restriction of U^{(x)k} to Sym^k (D x D).
  CMat<Real> restrict_operator(const CMat<Real>& op) const {
    if (op.rows() != a_ || op.cols() != a_) throw InvalidInput("symmetric subspace: operator dimension mismatch");
    CMat<Real> out(dim(), dim());
    for (Index n = 0; n < dim(); ++n) {
      CVec<Real> x = lift(CVec<Real>::Unit(dim(), n));
      Index right = full_dim_;
      for (int t = 0; t < k_; ++t) {
        right /= a_;
        apply_on_factor(op, x, full_dim_ / (right * a_), a_, right);
      }
      out.col(n) = compress(x);
    }
    return out;
  }

private:
  void enumerate() {
    std::vector<Index> t(k_, 0);
    std::map<std::vector<Index>, Index> lookup;
    while (true) {
      lookup.emplace(t, static_cast<Index>(tuples_.size()));
      tuples_.push_back(t);
      int pos = k_ - 1;
      while (pos >= 0 && t[pos] == a_ - 1) --pos;
      if (pos < 0) break;
      const Index next = t[pos] + 1;
      for (int q = pos; q < k_; ++q) t[q] = next;
    }
    multiplicity_.assign(tuples_.size(), 0);
    column_of_.resize(full_dim_);
    std::vector<Index> digits(k_);
    for (Index i = 0; i < full_dim_; ++i) {
      Index rem = i;
      for (int q = k_ - 1; q >= 0; --q) {
        digits[q] = rem % a_;
        rem /= a_;
      }
      std::vector<Index> sorted = digits;
      std::sort(sorted.begin(), sorted.end());
      const Index m = lookup.at(sorted);
      column_of_[i] = m;
      multiplicity_[m] += 1;
    }
  }

  Index a_;
  int k_;
  Index full_dim_ = 1;
  std::vector<std::vector<Index>> tuples_;
  std::vector<Index> column_of_;
  std::vector<Real> multiplicity_;
};

template <typename Real = double>
BasicSymmetricSubspace<Real> symmetric_subspace(Index a, int k, Index size_cap = kDefaultSizeCap) {
  return BasicSymmetricSubspace<Real>(a, k, size_cap);
}

inline Index binomial(Index n, Index r) {
  if (r < 0 || r > n) return 0;
  Index out = 1;
  for (Index i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

using PureState = BasicPureState<double>;
using DensityMatrix = BasicDensityMatrix<double>;
using Povm = BasicPovm<double>;
using SymmetricSubspace = BasicSymmetricSubspace<double>;

}  // namespace postulatelab
