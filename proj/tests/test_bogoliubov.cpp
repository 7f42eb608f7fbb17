#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fermi_qfi/bogoliubov.hpp"
#include "fermi_qfi/errors.hpp"
#include "fermi_qfi/oracle.hpp"
#include "fermi_qfi/quadrature.hpp"

using namespace fqfi;

namespace {

CMatrix j2() {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  a(1, 0) = -1.0;
  return a;
}

BogoliubovMap pairing_map(double theta) {
  return {std::cos(theta) * CMatrix::Identity(2, 2), std::sin(theta) * j2()};
}

BogoliubovMap rotation_map(double theta) {
  CMatrix u(2, 2);
  u << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return {u, CMatrix::Zero(2, 2)};
}

}  // namespace

TEST_SUITE("bogoliubov") {

TEST_CASE("validation") {
  const auto id = validate(BogoliubovMap::identity(3));
  CHECK(id.ok);
  CHECK(id.norm_residual == 0.0);
  CHECK(id.pair_residual == 0.0);
  CHECK(id.unitarity_residual == 0.0);

  for (double theta : {0.0, 0.3, 1.1, 2.5, -0.8}) {
    const auto r = validate(pairing_map(theta));
    CHECK(r.ok);
    CHECK(r.norm_residual < 1e-15);
  }

  const auto bad = validate({CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)});
  CHECK_FALSE(bad.ok);
  CHECK(bad.norm_residual == doctest::Approx(1.0));
}

TEST_CASE("generator matrix") {
  const auto g0 = generator_matrix(BogoliubovMap::identity(2));
  CHECK(max_abs(g0.S) == 0.0);
  CHECK(g0.commuting);

  const auto map = rotation_map(0.3);
  const auto g = generator_matrix(map);
  CHECK(max_abs(expm(kI * g.S * xi_matrix(2)) - map.assemble_w()) < 1e-12);
  CHECK(g.commuting);

  CHECK_THROWS_AS(generator_matrix(pairing_map(std::numbers::pi)), BranchCutError);
}

TEST_CASE("canonical decomposition") {
  const auto id = canonical_decomposition(BogoliubovMap::identity(3));
  CHECK(max_abs(id.X) == 0.0);
  CHECK(max_abs(id.Y) < 1e-15);
  CHECK(max_abs(id.Z) == 0.0);
  CHECK(id.det_root == Complex(1.0));

  const double theta = 0.4;
  const auto f = canonical_decomposition(pairing_map(theta));
  CHECK(max_abs(f.Z - std::tan(theta) * j2()) < 1e-14);
  CHECK(std::abs(f.det_root - std::cos(theta)) < 1e-14);
  CHECK(antisymmetry_residual(f.Z) < 1e-15);

  CHECK_THROWS_AS(canonical_decomposition({CMatrix::Zero(2, 2), j2()}), DomainError);
}

TEST_CASE("dense T from the factors intertwines the ladder operators") {
  oracle::Rng rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    const int m = 3;
    const auto map = oracle::random_map(rng, m, true, 0.6);
    const CMatrix t = many_body_unitary(map);
    const Eigen::Index dim = t.rows();
    CHECK(max_abs(t.adjoint() * t - CMatrix::Identity(dim, dim)) < 1e-10);
    for (int i = 0; i < m; ++i) {
      CMatrix c_dag = CMatrix::Zero(dim, dim);
      for (int k = 0; k < m; ++k) {
        c_dag += ladder_matrix(m, k, Ladder::create) * map.U(k, i) +
                 ladder_matrix(m, k, Ladder::annihilate) * map.V(k, i);
      }
      CHECK(max_abs(t * ladder_matrix(m, i, Ladder::create) * t.adjoint() - c_dag) < 1e-10);
    }
  }
  CHECK(max_abs(many_body_unitary(BogoliubovMap::identity(3)) - CMatrix::Identity(8, 8)) == 0.0);
  CHECK_THROWS_AS(many_body_unitary(BogoliubovMap::identity(13)), CapacityError);
}

TEST_CASE("vacuum overlap") {
  CHECK(vacuum_overlap(BogoliubovMap::identity(4)) == Complex(1.0));
  const double theta = 0.4;
  CHECK(std::abs(vacuum_overlap(pairing_map(theta)) - std::cos(theta)) < 1e-14);
  // oracle: <vac|T|vac> on the M=2 Fock space
  CHECK(std::abs(many_body_unitary(pairing_map(theta))(0, 0) - std::cos(theta)) < 1e-14);
  const double near = std::numbers::pi / 2 - 1e-5;
  CHECK(std::abs(vacuum_overlap(pairing_map(near))) < 2e-5);
  CHECK(std::abs(vacuum_overlap(pairing_map(near)) - std::cos(near)) < 1e-15);
}

TEST_CASE("one-particle overlaps") {
  CHECK(max_abs(one_particle_overlaps(BogoliubovMap::identity(3)) - CMatrix::Identity(3, 3)) <
        1e-15);

  oracle::Rng rng(9);
  const auto rot = oracle::random_map(rng, 3, false, 1.0);
  CHECK(std::abs(rot.U.determinant() - 1.0) < 1e-12);
  CHECK(max_abs(one_particle_overlaps(rot) - rot.U) < 1e-12);

  // pairing example: the Fock matrix elements <k|T|l> give the identity
  const auto map = pairing_map(0.4);
  const CMatrix r = one_particle_overlaps(map);
  const CMatrix t = many_body_unitary(map);
  CHECK(max_abs(r - CMatrix::Identity(2, 2)) < 1e-14);
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      CHECK(std::abs(t(Eigen::Index{1} << k, Eigen::Index{1} << l) - r(k, l)) < 1e-14);
    }
  }
}

TEST_CASE("generator from derivatives") {
  const auto zero = quadratic_generator_from_derivative(RMatrix::Zero(2, 2), RMatrix::Zero(2, 2));
  CHECK(max_abs(zero.one_body()) == 0.0);
  CHECK(max_abs(zero.pairing()) == 0.0);

  const double rate = 0.8;
  RMatrix ud = RMatrix::Zero(2, 2);
  ud(0, 1) = rate;
  ud(1, 0) = -rate;
  const auto gen = quadratic_generator_from_derivative(ud, RMatrix::Zero(2, 2));
  const auto out = apply_quadratic_generator(gen, FockVector::basis(Occupation::from_string("10")));
  CHECK(std::abs(out.amplitude(Occupation::from_string("01")) - Complex(0, rate)) < 1e-15);

  RMatrix sym = RMatrix::Zero(2, 2);
  sym(0, 1) = sym(1, 0) = 1.0;
  CHECK_THROWS_AS(quadratic_generator_from_derivative(sym, RMatrix::Zero(2, 2)), DomainError);

  // derivative of the flow reproduces the inputs
  oracle::Rng rng(2);
  const auto g = oracle::random_generator(rng, 3, true, 0.7);
  auto w_of = [&](double s) { return bogoliubov_flow(g, s).assemble_w(); };
  const CMatrix k = central_derivative(w_of, 0.0);
  const auto back = BogoliubovMap::from_w(k);
  CHECK(max_abs(back.U - g.one_body()) < 1e-9);
  CHECK(max_abs(back.V - g.pairing()) < 1e-9);
}

TEST_CASE("omega tilde") {
  oracle::Rng rng(4);
  const int m = 2;
  const RMatrix a = oracle::random_antisymmetric(rng, 2 * m);
  const CMatrix s_dot = kI * a.cast<Complex>();
  CHECK(max_abs(omega_tilde_numeric(CMatrix::Zero(4, 4), s_dot, 8) - s_dot) < 1e-15);

  const RMatrix b = oracle::random_antisymmetric(rng, 2 * m, 0.8);
  const CMatrix s = kI * b.cast<Complex>();
  double prev = 1e300;
  const CMatrix ref = omega_tilde_numeric(s, s_dot, 64);
  for (int order : {1, 2, 4, 8}) {
    const double err = max_abs(omega_tilde_numeric(s, s_dot, order) - ref);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(max_abs(omega_tilde_numeric(s, s_dot, 32) - ref) < 1e-10);

  RMatrix sym = RMatrix::Identity(4, 4);
  CHECK_THROWS_AS(omega_tilde_numeric(s, sym.cast<Complex>()), DomainError);
  CHECK_THROWS_AS(omega_tilde_numeric(s, s_dot, 0), DomainError);
}

TEST_CASE("quadrature rules") {
  const auto& gl = gauss_legendre(5);
  double sum = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) sum += gl.weights[i] * std::pow(gl.nodes[i], 8);
  CHECK(sum == doctest::Approx(2.0 / 9.0).epsilon(1e-14));

  const auto& gh = gauss_hermite(4);
  sum = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) sum += gh.weights[i] * std::pow(gh.nodes[i], 6);
  CHECK(sum == doctest::Approx(15.0 * std::sqrt(std::numbers::pi) / 8.0).epsilon(1e-13));
  CHECK_THROWS_AS(gauss_legendre(0), DomainError);
  CHECK_THROWS_AS(gauss_hermite(1025), DomainError);
}

}  // TEST_SUITE
