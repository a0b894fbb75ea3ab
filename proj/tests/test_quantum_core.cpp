#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "postulatelab/quantum_core.hpp"

using namespace postulatelab;
using Catch::Approx;

namespace {

const double r2 = 1.0 / std::sqrt(2.0);

PureState bell() {
  VectorXc v(4);
  v << r2, 0, 0, r2;
  return PureState::from_amplitudes(v);
}

DensityMatrix diag(double p, double q) {
  MatrixXc m = MatrixXc::Zero(2, 2);
  m(0, 0) = p;
  m(1, 1) = q;
  return DensityMatrix::from_matrix(m);
}

}  // namespace

TEST_CASE("pure states are validated rays", "[quantum-core]") {
  VectorXc v(2);
  v << 1, 1;
  REQUIRE_THROWS_AS(PureState::from_amplitudes(v), InvalidInput);
  const PureState plus = PureState::normalized(v);
  CHECK(plus.amplitudes().norm() == Approx(1.0).margin(1e-12));

  const PureState phased = PureState::from_amplitudes(plus.amplitudes() * std::polar(1.0, 0.7));
  CHECK(plus.same_ray(phased));
  CHECK_FALSE(plus.same_ray(PureState::basis(2, 0)));
}

TEST_CASE("density matrices reject invalid input", "[quantum-core]") {
  MatrixXc m = MatrixXc::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(m), InvalidInput);  // trace 2
  m << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(m), InvalidInput);  // negative eigenvalue
  m << 0.5, 1, 0, 0.5;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(m), InvalidInput);  // not Hermitian
}

TEST_CASE("povms require effects summing to identity", "[quantum-core]") {
  MatrixXc e0 = MatrixXc::Zero(2, 2), e1 = MatrixXc::Zero(2, 2);
  e0(0, 0) = 0.9;
  e1(1, 1) = 0.9;
  CHECK_THROWS_AS(Povm::from_effects({e0, e1}), InvalidInput);
  const Povm z = Povm::computational(2);
  CHECK(z.is_projective());
  CHECK(z.probability(0, PureState::basis(2, 0)) == 1.0);
}

TEST_CASE("partial trace examples", "[quantum-core]") {
  SECTION("Bell state keeps maximally mixed marginal") {
    const auto rho = partial_trace(DensityMatrix::from_pure(bell()), 2, 2, Side::A);
    CHECK((rho.matrix() - MatrixXc::Identity(2, 2) / 2.0).norm() < 1e-12);
  }
  SECTION("product state keeps the factor") {
    Rng rng = make_rng(11);
    const PureState psi = PureState::haar(2, rng), phi = PureState::haar(3, rng);
    const PureState prod = tensor(psi, phi);
    CHECK((partial_trace(prod, 2, 3, Side::A).matrix() - psi.projector()).norm() < 1e-12);
    CHECK((partial_trace(prod, 2, 3, Side::B).matrix() - phi.projector()).norm() < 1e-12);
  }
  SECTION("random 2x3 state matches index-loop oracle") {
    Rng rng = make_rng(12);
    const PureState psi = PureState::haar(6, rng);
    for (Side side : {Side::A, Side::B}) {
      const bool keep_a = side == Side::A;
      const MatrixXc expected = oracle::partial_trace(psi.projector(), 2, 3, keep_a);
      const auto from_pure = partial_trace(psi, 2, 3, side);
      const auto from_mixed = partial_trace(DensityMatrix::from_pure(psi), 2, 3, side);
      CHECK((from_pure.matrix() - expected).norm() < 1e-12);
      CHECK((from_mixed.matrix() - expected).norm() < 1e-12);
      CHECK(from_pure.matrix().trace().real() == Approx(1.0).margin(1e-12));
      CHECK(from_pure.eigenvalues().minCoeff() > -1e-12);
    }
  }
  SECTION("dimension mismatch is rejected") {
    CHECK_THROWS_AS(partial_trace(bell(), 3, 2, Side::A), InvalidInput);
    CHECK_THROWS_AS(partial_trace(DensityMatrix::maximally_mixed(5), 2, 2, Side::B), InvalidInput);
  }
}

TEST_CASE("entropy examples", "[quantum-core]") {
  const auto pure = DensityMatrix::from_pure(PureState::basis(2, 1));
  const auto mixed = DensityMatrix::maximally_mixed(2);
  CHECK(von_neumann_entropy(pure) == Approx(0.0).margin(1e-12));
  CHECK(von_neumann_entropy(mixed) == Approx(1.0).margin(1e-12));
  CHECK(renyi2_entropy(pure) == Approx(0.0).margin(1e-12));
  CHECK(renyi2_entropy(mixed) == Approx(1.0).margin(1e-12));

  const auto rho = diag(0.25, 0.75);
  CHECK(von_neumann_entropy(rho) == Approx(oracle::binary_entropy(0.25)).margin(1e-12));
  CHECK(von_neumann_entropy(rho) == Approx(0.8112781244591328).margin(1e-9));
  const double purity = 0.25 * 0.25 + 0.75 * 0.75;
  CHECK(renyi2_entropy(rho) == Approx(-std::log2(purity)).margin(1e-12));
  CHECK(renyi2_entropy(rho) == Approx(std::log2(16.0 / 10.0)).margin(1e-12));
}

TEST_CASE("symmetric subspace examples", "[quantum-core]") {
  const auto s21 = symmetric_subspace(2, 1);
  CHECK(s21.dim() == 2);
  CHECK((s21.projector() - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
  CHECK(symmetric_subspace(2, 2).dim() == 3);
  CHECK(symmetric_subspace(3, 2).dim() == 6);
  CHECK(symmetric_subspace(2, 5).dim() == binomial(6, 5));
}

TEST_CASE("symmetric projector matches the permutation sum", "[quantum-core]") {
  for (auto [a, k] : {std::pair<Index, int>{2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 4}}) {
    const auto s = symmetric_subspace(a, k);
    const Eigen::MatrixXd p = s.projector();
    CHECK((p - oracle::permutation_projector(a, k)).norm() < 1e-12);
    CHECK((p * p - p).norm() < 1e-10);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(p);
    lu.setThreshold(1e-10);
    CHECK(lu.rank() == binomial(a + k - 1, k));
    const Eigen::MatrixXd v = s.isometry();
    CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(s.dim(), s.dim())).norm() < 1e-10);
    CHECK((v - oracle::symmetric_isometry(a, k)).norm() < 1e-12);
  }
}

TEST_CASE("symmetric power and restriction agree with full-space products", "[quantum-core]") {
  Rng rng = make_rng(13);
  const auto s = symmetric_subspace(3, 3);
  const PureState psi = PureState::haar(3, rng);
  const VectorXc full = oracle::tensor_power(psi.amplitudes(), 3);
  CHECK((s.power(psi.amplitudes()) - s.compress(full)).norm() < 1e-12);
  CHECK((s.lift(s.power(psi.amplitudes())) - full).norm() < 1e-12);

  const MatrixXc u = haar_unitary(3, rng);
  const MatrixXc u3 = oracle::kron_mat(oracle::kron_mat(u, u), u);
  const MatrixXc v = oracle::symmetric_isometry(3, 3).cast<cplx>();
  CHECK((s.restrict_operator(u) - v.adjoint() * u3 * v).norm() < 1e-10);
}

TEST_CASE("symmetric subspace size cap", "[quantum-core]") {
  try {
    symmetric_subspace(4, 7);  // 4^7 = 16384
    FAIL("expected a resource error");
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find("4096") != std::string::npos);
  }
  CHECK_NOTHROW(symmetric_subspace(4, 7, 1 << 15));
  CHECK_THROWS_AS(symmetric_subspace(1, 2), InvalidInput);
  CHECK_THROWS_AS(symmetric_subspace(2, 0), InvalidInput);
}
