#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "postulatelab/opf.hpp"

using namespace postulatelab;
using Catch::Approx;

namespace {

const double r2 = 1.0 / std::sqrt(2.0);

PureState plus() {
  VectorXc v(2);
  v << r2, r2;
  return PureState::from_amplitudes(v);
}

MatrixXc ket_bra(Index d, Index i) {
  MatrixXc m = MatrixXc::Zero(d, d);
  m(i, i) = 1;
  return m;
}

MatrixXc pauli_x() {
  MatrixXc x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

}  // namespace

TEST_CASE("opf construction is validated", "[opf]") {
  CHECK_THROWS_AS(Opf(1, SymPower(1), MatrixXc::Zero(1, 1)), InvalidInput);
  CHECK_THROWS_AS(Opf(2, SymPower(0), MatrixXc::Zero(1, 1)), InvalidInput);
  CHECK_THROWS_AS(Opf(2, SymPower(2), MatrixXc::Zero(2, 2)), InvalidInput);  // D = 3
  CHECK_THROWS_AS(Opf(2, SymPower(1), 1.5 * MatrixXc::Identity(2, 2)), InvalidInput);
  CHECK_THROWS_AS(Opf(2, SymPower(1), -ket_bra(2, 0)), InvalidInput);
  MatrixXc nh = MatrixXc::Zero(2, 2);
  nh(0, 1) = 0.5;
  CHECK_THROWS_AS(Opf(2, SymPower(1), nh), InvalidInput);
  CHECK(Opf::unit(3, SymPower(2)).sym_dim() == 6);
}

TEST_CASE("eval examples", "[opf]") {
  CHECK(eval(Opf::from_effect(ket_bra(2, 0)), plus()) == Approx(0.5).margin(1e-12));

  Rng rng = make_rng(21);
  for (int k = 1; k <= 3; ++k) CHECK(eval(Opf::unit(3, SymPower(k)), PureState::haar(3, rng)) == Approx(1.0).margin(1e-12));

  // e_0 of Sym^2(C^2) is |00>; value |psi_0|^4.
  const Opf f2(2, SymPower(2), ket_bra(3, 0));
  CHECK(eval(f2, plus()) == Approx(0.25).margin(1e-12));

  CHECK_THROWS_AS(eval(f2, PureState::basis(3, 0)), InvalidInput);
}

TEST_CASE("eval matches the full-space oracle", "[opf]") {
  Rng rng = make_rng(22);
  for (auto [a, k] : {std::pair<Index, int>{2, 1}, {2, 2}, {3, 2}, {2, 3}, {3, 3}}) {
    const Opf f = Opf::random(a, SymPower(k), rng);
    for (int t = 0; t < 10; ++t) {
      const PureState psi = PureState::haar(a, rng);
      CHECK(eval(f, psi) == Approx(oracle::opf_value(f.matrix(), psi.amplitudes(), k)).margin(1e-12));
    }
  }
}

TEST_CASE("compose_unitary examples", "[opf]") {
  Rng rng = make_rng(23);
  const Opf f = Opf::random(2, SymPower(2), rng);
  CHECK((compose_unitary(f, MatrixXc::Identity(2, 2)).matrix() - f.matrix()).norm() < 1e-12);

  const Opf flipped = compose_unitary(Opf::from_effect(ket_bra(2, 0)), pauli_x());
  CHECK((flipped.matrix() - ket_bra(2, 1)).norm() < 1e-12);

  for (auto [a, k] : {std::pair<Index, int>{2, 1}, {3, 2}, {2, 3}}) {
    const Opf g = Opf::random(a, SymPower(k), rng);
    const MatrixXc u = haar_unitary(a, rng);
    const Opf gu = compose_unitary(g, u);
    for (int t = 0; t < 100; ++t) {
      const PureState psi = PureState::haar(a, rng);
      CHECK(eval(gu, psi) == Approx(eval(g, psi.transformed(u))).margin(1e-10));
    }
  }

  MatrixXc not_unitary = MatrixXc::Identity(2, 2);
  not_unitary(0, 0) = 1.001;
  CHECK_THROWS_AS(compose_unitary(f, not_unitary), InvalidInput);
  CHECK_THROWS_AS(compose_unitary(f, MatrixXc::Identity(3, 3)), InvalidInput);
}

TEST_CASE("mix examples", "[opf]") {
  Rng rng = make_rng(24);
  const Opf f = Opf::random(3, SymPower(2), rng);
  const std::vector<Opf> single{f};
  const std::vector<double> one{1.0};
  CHECK((mix(single, one).matrix() - f.matrix()).norm() < 1e-14);

  const std::vector<Opf> uz{Opf::unit(2), Opf::zero(2)};
  const std::vector<double> p{0.3, 0.7};
  const Opf c = mix(uz, p);
  for (int t = 0; t < 10; ++t) CHECK(eval(c, PureState::haar(2, rng)) == Approx(0.3).margin(1e-12));

  const std::vector<Opf> fs{Opf::random(3, SymPower(2), rng), Opf::random(3, SymPower(2), rng),
                            Opf::random(3, SymPower(2), rng)};
  const std::vector<double> w{0.2, 0.3, 0.5};
  const Opf m = mix(fs, w);
  for (int t = 0; t < 100; ++t) {
    const PureState psi = PureState::haar(3, rng);
    const double pointwise = 0.2 * eval(fs[0], psi) + 0.3 * eval(fs[1], psi) + 0.5 * eval(fs[2], psi);
    CHECK(eval(m, psi) == Approx(pointwise).margin(1e-12));
  }

  const std::vector<Opf> mismatched{Opf::unit(2), Opf::unit(2, SymPower(2))};
  const std::vector<double> half{0.5, 0.5};
  CHECK_THROWS_AS(mix(mismatched, half), InvalidInput);
  const std::vector<double> bad{0.5, 0.6};
  CHECK_THROWS_AS(mix(uz, bad), InvalidInput);
}

TEST_CASE("restrict_with_ancilla examples", "[opf]") {
  Rng rng = make_rng(25);
  SECTION("k = 1 product effect contracts to a scalar multiple") {
    const MatrixXc xa = Opf::random(2, SymPower(1), rng).matrix();
    const MatrixXc xb = Opf::random(3, SymPower(1), rng).matrix();
    const PureState phi = PureState::haar(3, rng);
    const Opf r = restrict_with_ancilla(Opf::from_effect(oracle::kron_mat(xa, xb)), phi);
    const cplx weight = phi.amplitudes().adjoint() * xb * phi.amplitudes();
    CHECK((r.matrix() - xa * weight.real()).norm() < 1e-12);
  }
  SECTION("unit and zero are preserved") {
    const PureState phi = PureState::haar(2, rng);
    CHECK((restrict_with_ancilla(Opf::unit(4, SymPower(2)), phi).matrix() - MatrixXc::Identity(3, 3)).norm() < 1e-12);
    CHECK(restrict_with_ancilla(Opf::zero(6, SymPower(2)), phi).matrix().norm() < 1e-14);
  }
  SECTION("general k evaluates as f(psi (x) phi)") {
    for (int k = 1; k <= 3; ++k) {
      const Opf f = Opf::random(4, SymPower(k), rng);
      const PureState phi = PureState::haar(2, rng);
      const Opf r = restrict_with_ancilla(f, phi);
      CHECK(r.dim() == 2);
      CHECK(r.power() == SymPower(k));
      for (int t = 0; t < 20; ++t) {
        const PureState psi = PureState::haar(2, rng);
        CHECK(eval(r, psi) == Approx(eval(f, tensor(psi, phi))).margin(1e-12));
      }
    }
  }
  SECTION("factorization failure") {
    CHECK_THROWS_AS(restrict_with_ancilla(Opf::unit(5), PureState::basis(2, 0)), InvalidInput);
  }
}

TEST_CASE("normalization checks", "[opf]") {
  Rng rng = make_rng(26);
  std::vector<PureState> states;
  for (int t = 0; t < 50; ++t) states.push_back(PureState::haar(2, rng));

  const auto z = Measurement::create({Opf::from_effect(ket_bra(2, 0)), Opf::from_effect(ket_bra(2, 1))});
  const auto cz = check_normalization(z, states);
  CHECK(cz.max_deviation < 1e-10);
  CHECK(cz.algebraic_deviation < 1e-10);

  const std::vector<Opf> scaled{Opf::from_effect(0.9 * ket_bra(2, 0)), Opf::from_effect(0.9 * ket_bra(2, 1))};
  const auto cs = check_normalization(scaled, states);
  CHECK(cs.max_deviation == Approx(0.1).margin(1e-12));
  CHECK(cs.algebraic_deviation == Approx(0.1).margin(1e-12));
  CHECK_THROWS_AS(Measurement::create(scaled), InvalidInput);

  std::vector<PureState> qutrits;
  for (int t = 0; t < 50; ++t) qutrits.push_back(PureState::haar(3, rng));
  const Measurement m = Measurement::random(3, 4, rng);
  CHECK(m.size() == 4);
  CHECK(check_normalization(m, qutrits).max_deviation < 1e-9);
}

TEST_CASE("opf json round trip is exact", "[opf]") {
  Rng rng = make_rng(27);
  const Opf f = Opf::random(3, SymPower(2), rng);
  const std::string text = to_json(f).dump();
  const Opf g = opf_from_json(nlohmann::json::parse(text));
  CHECK(g.dim() == 3);
  CHECK(g.power() == SymPower(2));
  CHECK(g.matrix() == f.matrix());
  CHECK_THROWS_AS(opf_from_json(nlohmann::json::parse(R"({"a": 2})")), InvalidInput);
  CHECK_THROWS_AS(opf_from_json(nlohmann::json::parse(R"({"a": 2, "k": 1, "F": [[1, 0]]})")), InvalidInput);
}
