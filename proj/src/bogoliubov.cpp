#include "fermi_qfi/bogoliubov.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "fermi_qfi/errors.hpp"
#include "fermi_qfi/parallel.hpp"
#include "fermi_qfi/quadrature.hpp"

namespace fqfi {
namespace {

void require_square_pair(const CMatrix& u, const CMatrix& v) {
  if (u.rows() != u.cols() || v.rows() != v.cols() || u.rows() != v.rows()) {
    throw DomainError("U and V must be square matrices of equal size");
  }
  if (u.rows() < 1) throw DomainError("Bogoliubov map needs at least one mode");
}

constexpr double kSingularDet = 1e-12;

Eigen::Index fock_dim(int modes) {
  if (modes < 1 || modes > kMaxDenseModes) {
    throw CapacityError("dense Fock operators are limited to " +
                        std::to_string(kMaxDenseModes) + " modes");
  }
  return Eigen::Index{1} << modes;
}

// sum_{i,j} coef(i, j) * op_i op_j applied to every basis state.
template <typename Coef>
CMatrix two_ladder_operator(int modes, Ladder first, Ladder second, Coef coef) {
  const Eigen::Index dim = fock_dim(modes);
  CMatrix out = CMatrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Occupation s(modes, static_cast<std::uint64_t>(col));
    for (int j = 0; j < modes; ++j) {
      auto a = apply_ladder(s, j, second);
      if (!a) continue;
      for (int i = 0; i < modes; ++i) {
        const Complex c = coef(i, j);
        if (c == Complex{}) continue;
        auto b = apply_ladder(a->state, i, first);
        if (!b) continue;
        out(static_cast<Eigen::Index>(b->state.bits()), col) +=
            static_cast<double>(a->sign * b->sign) * c;
      }
    }
  }
  return out;
}

}  // namespace

BogoliubovMap BogoliubovMap::identity(int modes) {
  return {CMatrix::Identity(modes, modes), CMatrix::Zero(modes, modes)};
}

BogoliubovMap BogoliubovMap::from_w(const CMatrix& w) {
  if (w.rows() != w.cols() || w.rows() % 2 != 0 || w.rows() == 0) {
    throw DomainError("W must be a square matrix of even size");
  }
  const Eigen::Index m = w.rows() / 2;
  return {w.topLeftCorner(m, m), w.bottomLeftCorner(m, m)};
}

CMatrix BogoliubovMap::assemble_w() const {
  require_square_pair(U, V);
  const Eigen::Index m = U.rows();
  CMatrix w(2 * m, 2 * m);
  w << U, V.conjugate(), V, U.conjugate();
  return w;
}

ValidationReport validate(const BogoliubovMap& map) {
  require_square_pair(map.U, map.V);
  const Eigen::Index m = map.U.rows();
  ValidationReport r;
  r.norm_residual =
      max_abs(map.U.adjoint() * map.U + map.V.adjoint() * map.V - CMatrix::Identity(m, m));
  r.pair_residual = max_abs(map.U.transpose() * map.V + map.V.transpose() * map.U);
  const CMatrix w = map.assemble_w();
  r.unitarity_residual = max_abs(w.adjoint() * w - CMatrix::Identity(2 * m, 2 * m));
  r.ok = r.norm_residual < kBogoliubovTolerance && r.pair_residual < kBogoliubovTolerance &&
         r.unitarity_residual < kBogoliubovTolerance;
  return r;
}

CMatrix xi_matrix(int modes) {
  CMatrix xi = CMatrix::Zero(2 * modes, 2 * modes);
  xi.topRightCorner(modes, modes).setIdentity();
  xi.bottomLeftCorner(modes, modes).setIdentity();
  return xi;
}

GeneratorMatrix generator_matrix(const BogoliubovMap& map) {
  const CMatrix w = map.assemble_w();
  const CMatrix xi = xi_matrix(map.modes());
  GeneratorMatrix g;
  g.S = -kI * logm_unitary(w) * xi;
  const CMatrix is = kI * g.S;
  g.commuting = is.imag().cwiseAbs().maxCoeff() <= kBogoliubovTolerance;
  if (g.commuting) g.S = -kI * CMatrix(is.real().cast<Complex>());
  return g;
}

CanonicalFactors canonical_decomposition(const BogoliubovMap& map) {
  require_square_pair(map.U, map.V);
  const Complex det = map.U.determinant();
  if (std::abs(det) <= kSingularDet) {
    throw DomainError("U is singular: the canonical decomposition needs (U*)^-1");
  }
  const CMatrix u_conj_inv = map.U.conjugate().inverse();
  CanonicalFactors f;
  f.X = u_conj_inv * map.V;
  f.Z = map.V.conjugate() * u_conj_inv;
  f.Y = -logm(map.U.adjoint());
  f.det_root = std::sqrt(std::conj(det));
  return f;
}

Complex vacuum_overlap(const BogoliubovMap& map) {
  return canonical_decomposition(map).det_root;
}

CMatrix one_particle_overlaps(const BogoliubovMap& map) {
  const Complex root = canonical_decomposition(map).det_root;
  return root * map.U.adjoint().inverse();
}

CMatrix one_body_operator(int modes, const CMatrix& y) {
  return two_ladder_operator(modes, Ladder::create, Ladder::annihilate,
                             [&](int i, int j) { return y(i, j); });
}

CMatrix pair_annihilation_operator(int modes, const CMatrix& x) {
  return two_ladder_operator(modes, Ladder::annihilate, Ladder::annihilate,
                             [&](int i, int j) { return 0.5 * x(i, j); });
}

CMatrix pair_creation_operator(int modes, const CMatrix& z) {
  return two_ladder_operator(modes, Ladder::create, Ladder::create,
                             [&](int i, int j) { return 0.5 * z(i, j); });
}

CMatrix many_body_unitary(const BogoliubovMap& map) {
  const int m = map.modes();
  fock_dim(m);
  const CanonicalFactors f = canonical_decomposition(map);
  const CMatrix ex = expm(pair_annihilation_operator(m, f.X));
  const CMatrix ey = expm(one_body_operator(m, f.Y));
  const CMatrix ez = expm(pair_creation_operator(m, f.Z));
  return f.det_root * (ez * (ey * ex));
}

QuadraticGenerator quadratic_generator_from_derivative(const RMatrix& u_dot,
                                                       const RMatrix& v_dot) {
  const CMatrix u = u_dot.cast<Complex>();
  const CMatrix v = v_dot.cast<Complex>();
  if (u.rows() != u.cols() || v.rows() != v.cols() || u.rows() != v.rows()) {
    throw DomainError("U̇ and V̇ must be square matrices of equal size");
  }
  if (antisymmetry_residual(u) > kBogoliubovTolerance ||
      antisymmetry_residual(v) > kBogoliubovTolerance) {
    throw DomainError(
        "U̇ and V̇ must be antisymmetric; this holds only for derivatives taken in "
        "the limit ω → ω0 of a real Bogoliubov family");
  }
  return {u, v};
}

CMatrix omega_tilde_numeric(const CMatrix& s, const CMatrix& s_dot, int order) {
  if (s.rows() != s.cols() || s_dot.rows() != s.rows() || s_dot.cols() != s.cols() ||
      s.rows() % 2 != 0) {
    throw DomainError("S and Ṡ must be square matrices of equal even size");
  }
  if (antisymmetry_residual(s_dot) > 1e-8) throw DomainError("Ṡ must be antisymmetric");
  const QuadratureRule& rule = gauss_legendre(order);
  const CMatrix xi = xi_matrix(static_cast<int>(s.rows() / 2));
  const CMatrix s_xi = s * xi;
  const CMatrix xi_s = xi * s;
  std::vector<CMatrix> terms(rule.nodes.size());
  parallel_for(terms.size(), [&](std::size_t i) {
    const double t = 0.5 * (rule.nodes[i] + 1.0);
    terms[i] = 0.5 * rule.weights[i] *
               (expm(-kI * t * s_xi) * s_dot * expm(kI * t * xi_s));
  });
  CMatrix out = CMatrix::Zero(s.rows(), s.cols());
  for (const auto& term : terms) out += term;
  return out;
}

CMatrix flow_matrix(const QuadraticGenerator& gen) {
  const Eigen::Index m = gen.modes();
  CMatrix k(2 * m, 2 * m);
  k << gen.one_body(), gen.pairing().conjugate(), gen.pairing(), gen.one_body().conjugate();
  return k;
}

BogoliubovMap bogoliubov_flow(const QuadraticGenerator& gen, double s) {
  return BogoliubovMap::from_w(expm(s * flow_matrix(gen)));
}

}  // namespace fqfi
