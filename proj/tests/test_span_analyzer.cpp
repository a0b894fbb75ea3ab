#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "postulatelab/span_analyzer.hpp"

using namespace postulatelab;
using Catch::Approx;

namespace {

// Rank of the Pauli coefficient vectors of U_n^dag |0><0| U_n, n < count.
Index born_span_oracle(std::size_t count, std::uint64_t seed) {
  std::array<MatrixXc, 4> pauli;
  pauli[0] = MatrixXc::Identity(2, 2);
  pauli[1].resize(2, 2);
  pauli[1] << 0, 1, 1, 0;
  pauli[2].resize(2, 2);
  pauli[2] << 0, cplx(0, -1), cplx(0, 1), 0;
  pauli[3].resize(2, 2);
  pauli[3] << 1, 0, 0, -1;
  Eigen::MatrixXd coeff(static_cast<Index>(count), 4);
  MatrixXc e0 = MatrixXc::Zero(2, 2);
  e0(0, 0) = 1;
  for (std::size_t n = 0; n < count; ++n) {
    const MatrixXc u = family_unitary(2, n, seed);
    const MatrixXc e = u.adjoint() * e0 * u;
    for (int p = 0; p < 4; ++p) coeff(static_cast<Index>(n), p) = (pauli[static_cast<std::size_t>(p)] * e).trace().real() / 2;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(coeff);
  lu.setThreshold(1e-10);
  return lu.rank();
}

// Same for the k = 2 orbit: rank of the vectorized V^dag (U^dag)^{(x)2} e0 e0^dag U^{(x)2} V.
Index power2_span_oracle(std::size_t count, std::uint64_t seed) {
  const MatrixXc v = oracle::symmetric_isometry(2, 2).cast<cplx>();
  Eigen::MatrixXd coeff(static_cast<Index>(count), 18);
  for (std::size_t n = 0; n < count; ++n) {
    const MatrixXc u = family_unitary(2, n, seed);
    const MatrixXc u2 = oracle::kron_mat(u, u);
    MatrixXc f = MatrixXc::Zero(3, 3);
    f(0, 0) = 1;
    const MatrixXc g = v.adjoint() * u2.adjoint() * v * f * v.adjoint() * u2 * v;
    for (Index i = 0; i < 9; ++i) {
      coeff(static_cast<Index>(n), 2 * i) = g(i).real();
      coeff(static_cast<Index>(n), 2 * i + 1) = g(i).imag();
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(coeff);
  lu.setThreshold(1e-10);
  return lu.rank();
}

}  // namespace

TEST_CASE("family members are deterministic orbits", "[span-analyzer]") {
  const FunctionFamily born = born_family(2);
  Rng rng = make_rng(71);
  for (std::size_t n = 0; n < 5; ++n) {
    const PureState psi = PureState::haar(2, rng);
    const MatrixXc u = family_unitary(2, n, 99);
    CHECK(born.member(n, 99)(psi) == Approx(std::norm(u.row(0).dot(psi.amplitudes().conjugate()))).margin(1e-12));
    CHECK(born.member(n, 99)(psi) == born.member(n, 99)(psi));
  }
  const EntropyBin bin = EntropyBin::from_value(0.5, 2);
  const FunctionFamily ent = entropy_bin_family(bin, EntropyKind::VonNeumann);
  for (std::size_t n = 0; n < 5; ++n) {
    const PureState psi = PureState::haar(2, rng);
    const PureState rotated = psi.transformed(family_unitary(2, n, 3));
    CHECK(ent.member(n, 3)(psi) == closed_form_entropy_indicator(bin, EntropyKind::VonNeumann)(rotated));
  }
}

TEST_CASE("renyi family examples", "[span-analyzer]") {
  const double r2 = 1.0 / std::sqrt(2.0);
  VectorXc plus(2);
  plus << r2, r2;
  const auto zero_bin = EntropyBin::from_value(0.0, 2), top_bin = EntropyBin::from_value(0.99, 2);
  CHECK(cnot_entropy_opf(zero_bin, EntropyKind::Renyi2)(PureState::basis(2, 0)) == 1.0);
  CHECK(cnot_entropy_opf(top_bin, EntropyKind::Renyi2)(PureState::from_amplitudes(plus)) == 1.0);
  CHECK(renyi_family(top_bin).label == "renyi-bin");
}

TEST_CASE("rank profile examples", "[span-analyzer]") {
  SECTION("Born qubit family saturates at 4") {
    const RankProfile p = rank_profile(born_family(2), 16, 128, 5);
    CHECK(p.rank(16) == 4);
    CHECK(p.rank(16) == born_span_oracle(16, 5));
    const Classification c = classify(p);
    CHECK(c.kind == SpanClass::Saturating);
    CHECK(c.dimension == 4);
  }
  SECTION("k = 2 family saturates at 9") {
    const RankProfile p = rank_profile(power2_family(2), 32, 256, 6);
    CHECK(p.rank(32) == 9);
    CHECK(p.rank(32) == power2_span_oracle(32, 6));
    const Classification c = classify(p);
    CHECK(c.kind == SpanClass::Saturating);
    CHECK(c.dimension == 9);
  }
  SECTION("entropy-bin family keeps growing") {
    const RankProfile p = rank_profile(entropy_bin_family(EntropyBin::from_value(0.99, 2), EntropyKind::VonNeumann),
                                       32, 256, 7);
    for (Index n = 1; n <= 32; ++n) CHECK(p.rank(n) >= n - 2);
    CHECK(classify(p).kind == SpanClass::Growing);
  }
  SECTION("renyi family keeps growing") {
    const RankProfile p = rank_profile(renyi_family(EntropyBin::from_value(0.99, 2)), 32, 256, 8);
    CHECK(classify(p).kind == SpanClass::Growing);
  }
  SECTION("constant family saturates at 1") {
    const Classification c = classify(rank_profile(constant_family(2), 16, 64, 9));
    CHECK(c.kind == SpanClass::Saturating);
    CHECK(c.dimension == 1);
  }
}

TEST_CASE("rank profile preconditions", "[span-analyzer]") {
  CHECK_THROWS_AS(rank_profile(born_family(2), 16, 63, 1), InvalidInput);
  const RankProfile small = rank_profile(born_family(2), 4, 16, 1);
  CHECK_THROWS_AS(classify(small), InvalidInput);
}

TEST_CASE("classification thresholds", "[span-analyzer]") {
  RankProfile p;
  p.ranks = {1, 2, 3, 4, 5, 6, 7, 7, 7, 7, 7, 7, 7, 7, 7, 7};
  CHECK(classify(p).kind == SpanClass::Saturating);
  CHECK(classify(p).dimension == 7);
  p.ranks = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 14, 14};
  CHECK(classify(p).kind == SpanClass::Growing);  // tail not flat over 4 steps; 14 >= N - 2
  p.ranks = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 10, 11, 11, 12, 12, 13};
  const Classification c = classify(p);
  CHECK(c.kind == SpanClass::Inconclusive);
  CHECK_FALSE(c.diagnostics.empty());
}

TEST_CASE("rank profile output formats", "[span-analyzer]") {
  const RankProfile p = rank_profile(born_family(2), 8, 32, 2);
  const std::string csv = to_csv(p);
  CHECK(csv.rfind("n,rank\n1,1\n", 0) == 0);
  const auto j = to_json(p, classify(p));
  CHECK(j["ranks"].size() == 8);
  CHECK(j["classification"]["kind"] == "saturating");
}
