#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace postulatelab {

using Index = Eigen::Index;

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CVec = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using CMat = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <typename Real>
using RMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

using cplx = Complex<double>;
using VectorXc = CVec<double>;
using MatrixXc = CMat<double>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Rejected input: dimension mismatch, invalid normalization, malformed operand.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A configured size cap would be exceeded.
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An operation is only defined for a particular symmetric power.
class UnsupportedPower : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

namespace tol {
inline constexpr double kNorm = 1e-12;        // pure-state normalization
inline constexpr double kHermitian = 1e-12;   // density matrix hermiticity
inline constexpr double kSpectrum = 1e-10;    // eigenvalue windows, traces, POVM sums
inline constexpr double kSameRay = 1e-10;     // |<psi|phi>| >= 1 - kSameRay
inline constexpr double kWeights = 1e-12;     // probability vectors
inline constexpr double kDropWeight = 1e-12;  // negligible mixture parts
}  // namespace tol

}  // namespace postulatelab
