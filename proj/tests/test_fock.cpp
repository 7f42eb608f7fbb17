#include <doctest.h>

#include <cmath>

#include "fermi_qfi/errors.hpp"
#include "fermi_qfi/fock.hpp"
#include "fermi_qfi/oracle.hpp"

using namespace fqfi;

namespace {

std::vector<std::string> names(const std::vector<Occupation>& states) {
  std::vector<std::string> out;
  for (const auto& s : states) out.push_back(s.to_string());
  return out;
}

FockVector ket(const char* s) { return FockVector::basis(Occupation::from_string(s)); }

}  // namespace

TEST_SUITE("fock") {

TEST_CASE("basis enumeration order and sectors") {
  CHECK(names(enumerate_basis(2)) == std::vector<std::string>{"00", "10", "01", "11"});
  CHECK(names(enumerate_basis(3, 1)) == std::vector<std::string>{"100", "010", "001"});
  CHECK(enumerate_basis(4, 2).size() == 6);
  CHECK(enumerate_basis(10, 0).size() == 1);
  CHECK_THROWS_AS(enumerate_basis(25), CapacityError);
  CHECK_THROWS_AS(enumerate_basis(0), CapacityError);
  CHECK_THROWS_AS(enumerate_basis(4, 5), DomainError);
  CHECK_THROWS_AS(enumerate_basis(4, -1), DomainError);
}

TEST_CASE("occupation strings") {
  const auto s = Occupation::from_string("1011");
  CHECK(s.modes() == 4);
  CHECK(s.bits() == 0b1101);
  CHECK(s.to_string() == "1011");
  CHECK(s.particles() == 3);
  CHECK(s.string_sign(2) == -1);
  CHECK(s.string_sign(3) == 1);
  CHECK_THROWS_AS(Occupation::from_string("10x"), DomainError);
}

TEST_CASE("single ladder operators") {
  auto r = apply_ladder(Occupation::from_string("10"), 1, Ladder::create);
  REQUIRE(r);
  CHECK(r->sign == -1);
  CHECK(r->state.to_string() == "11");

  CHECK_FALSE(apply_ladder(Occupation::from_string("00"), 0, Ladder::annihilate));

  r = apply_ladder(Occupation::from_string("00"), 1, Ladder::create);
  REQUIRE(r);
  CHECK(r->sign == 1);
  CHECK(r->state.to_string() == "01");

  CHECK_THROWS_AS(apply_ladder(Occupation::from_string("00"), 2, Ladder::create), DomainError);
}

TEST_CASE("bilinears") {
  auto r = apply_bilinear(Occupation::from_string("01"), 0, 1, Bilinear::hop_kl);
  REQUIRE(r);
  CHECK(r->sign == 1);
  CHECK(r->state.to_string() == "10");

  r = apply_bilinear(Occupation::from_string("00"), 0, 1, Bilinear::pair_create);
  REQUIRE(r);
  CHECK(r->sign == 1);
  CHECK(r->state.to_string() == "11");

  CHECK_FALSE(apply_bilinear(Occupation::from_string("10"), 0, 1, Bilinear::pair_create));
  CHECK_THROWS_AS(apply_bilinear(Occupation::from_string("00"), 1, 1, Bilinear::hop_kl),
                  DomainError);
  CHECK_THROWS_AS(apply_bilinear(Occupation::from_string("00"), 1, 0, Bilinear::hop_kl),
                  DomainError);

  // a_l^† a_k with an occupied mode inside the string
  r = apply_bilinear(Occupation::from_string("101"), 0, 2, Bilinear::hop_lk);
  CHECK_FALSE(r);
  r = apply_bilinear(Occupation::from_string("110"), 0, 2, Bilinear::hop_lk);
  REQUIRE(r);
  CHECK(r->state.to_string() == "011");
  CHECK(r->sign == -1);
}

TEST_CASE("inner products") {
  CHECK(inner_product(ket("10"), ket("10")) == Complex(1.0));
  CHECK(inner_product(ket("10"), ket("01")) == Complex(0.0));
  const FockVector sup = (1.0 / std::sqrt(2.0)) * (ket("10") + ket("01"));
  CHECK(std::abs(inner_product(sup, ket("01")) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(inner_product(Complex(0, 1) * ket("10"), ket("10")) == Complex(0, -1));
  CHECK_THROWS_AS(inner_product(ket("10"), ket("100")), DomainError);
}

TEST_CASE("quadratic generator action") {
  oracle::Rng rng(7);
  const auto v = oracle::random_state(rng, 3);
  const auto zero = apply_quadratic_generator(QuadraticGenerator::zero(3), v);
  CHECK(zero.size() == 0);

  const double c = 0.37;
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = c;
  a(1, 0) = -c;
  const QuadraticGenerator gen(a, CMatrix::Zero(2, 2));
  const auto out = apply_quadratic_generator(gen, ket("10"));
  CHECK(out.size() == 1);
  CHECK(std::abs(out.amplitude(Occupation::from_string("01")) - Complex(0, c)) < 1e-15);

  for (int trial = 0; trial < 5; ++trial) {
    const auto g = oracle::random_generator(rng, 4, true);
    const auto x = oracle::random_state(rng, 4);
    const CVector diff =
        apply_quadratic_generator(g, x).to_dense() - oracle::generator_dense(g) * x.to_dense();
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(apply_quadratic_generator(gen, ket("100")), DomainError);
}

TEST_CASE("generator is Hermitian and linear") {
  oracle::Rng rng(11);
  const auto g = oracle::random_generator(rng, 5, true);
  const CMatrix h = oracle::generator_dense(g);
  CHECK(max_abs(h - h.adjoint()) < 1e-14);

  const auto u = oracle::random_state(rng, 5);
  const auto v = oracle::random_state(rng, 5);
  const Complex alpha(0.3, -1.2), beta(-0.7, 0.4);
  const FockVector lhs = apply_quadratic_generator(g, alpha * u + beta * v);
  const FockVector rhs =
      alpha * apply_quadratic_generator(g, u) + beta * apply_quadratic_generator(g, v);
  CHECK((lhs.to_dense() - rhs.to_dense()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("generator validation") {
  CMatrix sym = CMatrix::Zero(2, 2);
  sym(0, 1) = sym(1, 0) = 1.0;
  CHECK_THROWS_AS(QuadraticGenerator(sym, CMatrix::Zero(2, 2)), DomainError);
  CHECK_THROWS_AS(QuadraticGenerator(CMatrix::Zero(2, 2), CMatrix::Zero(3, 3)), DomainError);
}

TEST_CASE("variance") {
  oracle::Rng rng(3);
  const auto v = oracle::random_state(rng, 3);
  CHECK(variance(generator_action(QuadraticGenerator::zero(3)), v) == doctest::Approx(0.0));

  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  a(1, 0) = -1.0;
  const auto op = generator_action(QuadraticGenerator(a, CMatrix::Zero(2, 2)));
  CHECK(variance(op, ket("10")) == doctest::Approx(1.0).epsilon(1e-14));

  // eigenvectors of the 2×2 block {|10>, |01>} from a dense diagonalization
  const CMatrix h = oracle::generator_dense(QuadraticGenerator(a, CMatrix::Zero(2, 2)));
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  for (int i = 0; i < 4; ++i) {
    const auto e = FockVector::from_dense(2, eig.eigenvectors().col(i));
    CHECK(std::abs(variance(op, e)) < 1e-14);
  }

  CHECK_THROWS_AS(variance(op, 2.0 * ket("10")), DomainError);

  CMatrix bad = CMatrix::Zero(4, 4);
  bad(2, 1) = Complex(0.0, 1.0);  // |10> -> i|01>, no reverse entry
  CHECK_THROWS_AS(variance(matrix_action(bad), (1.0 / std::sqrt(2.0)) * (ket("10") + ket("01"))),
                  NumericError);
}

TEST_CASE("dense conversions") {
  CHECK_THROWS_AS(static_cast<void>(FockVector(25).to_dense()), CapacityError);
  CHECK_THROWS_AS(FockVector::from_dense(2, CVector::Zero(3)), DomainError);
  CHECK_THROWS_AS(ladder_matrix(15, 0, Ladder::create), CapacityError);
  FockVector v(2);
  v.accumulate(Occupation::from_string("11"), 1e-17);
  v.prune();
  CHECK(v.size() == 0);
}

}  // TEST_SUITE
