#include "fermi_qfi/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "fermi_qfi/errors.hpp"

namespace fqfi::oracle {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

RMatrix random_antisymmetric(Rng& rng, int modes, double scale) {
  RMatrix a = RMatrix::Zero(modes, modes);
  for (int k = 0; k < modes; ++k) {
    for (int l = k + 1; l < modes; ++l) {
      a(k, l) = uniform(rng, -scale, scale);
      a(l, k) = -a(k, l);
    }
  }
  return a;
}

CMatrix random_hermitian(Rng& rng, Eigen::Index dim, double scale) {
  CMatrix h(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      h(i, j) = Complex(uniform(rng, -scale, scale), uniform(rng, -scale, scale));
    }
  }
  return 0.5 * (h + h.adjoint());
}

QuadraticGenerator random_generator(Rng& rng, int modes, bool pairing, double scale) {
  const RMatrix u = random_antisymmetric(rng, modes, scale);
  const RMatrix v = pairing ? random_antisymmetric(rng, modes, scale) : RMatrix::Zero(modes, modes);
  return {u.cast<Complex>(), v.cast<Complex>()};
}

FockVector random_state(Rng& rng, int modes, std::optional<int> particles) {
  const auto basis = enumerate_basis(modes, particles);
  FockVector v(modes);
  double norm = 0.0;
  std::vector<Complex> amps(basis.size());
  for (auto& a : amps) {
    a = Complex(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
    norm += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(norm);
  for (std::size_t i = 0; i < basis.size(); ++i) v.accumulate(basis[i], amps[i] * inv);
  return v;
}

Occupation random_occupation(Rng& rng, int modes) {
  const std::uint64_t bits =
      std::uniform_int_distribution<std::uint64_t>(0, (std::uint64_t{1} << modes) - 1)(rng);
  return {modes, bits};
}

FockVector apply_dense(const CMatrix& op, const FockVector& v) {
  return FockVector::from_dense(v.modes(), op * v.to_dense());
}

CMatrix generator_dense(const QuadraticGenerator& gen) {
  const int m = gen.modes();
  if (m > kMaxDenseModes) throw CapacityError("dense generator limited to 12 modes");
  const Eigen::Index dim = Eigen::Index{1} << m;
  CMatrix h = CMatrix::Zero(dim, dim);
  auto add = [&](Eigen::Index col, const std::optional<SignedState>& r, Complex c) {
    if (r) h(static_cast<Eigen::Index>(r->state.bits()), col) += static_cast<double>(r->sign) * c;
  };
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Occupation s(m, static_cast<std::uint64_t>(col));
    for (int k = 0; k < m; ++k) {
      for (int l = k + 1; l < m; ++l) {
        const Complex a = -kI * gen.one_body()(k, l);
        const Complex p = -kI * gen.pairing()(k, l);
        add(col, apply_bilinear(s, k, l, Bilinear::hop_kl), a);
        add(col, apply_bilinear(s, k, l, Bilinear::hop_lk), -a);
        add(col, apply_bilinear(s, k, l, Bilinear::pair_create), p);
        add(col, apply_bilinear(s, k, l, Bilinear::pair_annihilate), p);
      }
    }
  }
  return h;
}

ParametrizedState bogoliubov_family(const BogoliubovMap& w0, const QuadraticGenerator& gen,
                                    const FockVector& psi0) {
  const CMatrix base = w0.assemble_w();
  const CMatrix k = flow_matrix(gen);
  ParametrizedState family;
  family.at = [base, k, psi0](double omega) {
    const BogoliubovMap map = BogoliubovMap::from_w(base * expm(omega * k));
    return apply_dense(many_body_unitary(map), psi0);
  };
  return family;
}

BogoliubovMap random_map(Rng& rng, int modes, bool pairing, double scale) {
  return bogoliubov_flow(random_generator(rng, modes, pairing, scale), 1.0);
}

ChainInstance random_chain_instance(Rng& rng, int modes) {
  ChainInstance c;
  c.omega0 = uniform(rng, -0.5, 0.5);
  const QuadraticGenerator gen = random_generator(rng, modes, true, 0.6);
  const CMatrix base = random_map(rng, modes, true, 0.4).assemble_w();
  const CMatrix k = flow_matrix(gen);
  const Eigen::Index dim = Eigen::Index{1} << modes;
  const CMatrix h0 = random_hermitian(rng, dim, 1.0);
  const CMatrix h1 = random_hermitian(rng, dim, 0.5);
  const double t = uniform(rng, 0.3, 1.5);

  auto t_of = [base, k](double w) {
    return many_body_unitary(BogoliubovMap::from_w(base * expm(w * k)));
  };
  auto u_of = [h0, h1, t](double w) { return expm(-kI * t * (h0 + w * h1)); };

  const CMatrix t0 = t_of(c.omega0);
  const CMatrix t_dot = central_derivative(t_of, c.omega0);
  c.gen_h = -kI * t0.adjoint() * t_dot;
  const CMatrix x = -kI * t * (h0 + c.omega0 * h1);
  c.gen_u = -kI * u_of(c.omega0).adjoint() * expm_frechet(x, -kI * t * h1);

  c.psi0 = random_state(rng, modes);
  c.phi = apply_dense(t0, c.psi0);
  c.phi_dot = apply_dense(t_dot, c.psi0);
  const FockVector psi0 = c.psi0;
  c.composed.at = [t_of, u_of, psi0](double w) { return apply_dense(u_of(w) * t_of(w), psi0); };
  return c;
}

EvolutionInstance random_evolution_instance(Rng& rng, int modes, double time) {
  EvolutionInstance e;
  e.gen = random_generator(rng, modes, true, 0.8);
  Eigen::VectorXd eps(modes), eps_dot(modes), eps_ddot(modes);
  for (int k = 0; k < modes; ++k) {
    eps(k) = uniform(rng, -2.0, 2.0);
    eps_dot(k) = uniform(rng, -1.0, 1.0);
    eps_ddot(k) = uniform(rng, -1.0, 1.0);
  }
  e.spec = EvolutionSpec::from_mode_energies(random_state(rng, modes), time, eps, eps_dot);
  const CMatrix k = flow_matrix(e.gen);
  const FockVector coeffs = e.spec.coefficients;
  e.family.at = [k, coeffs, eps, eps_dot, eps_ddot, time](double w) {
    FockVector evolved(coeffs.modes());
    for (const auto& [bits, amp] : coeffs.entries()) {
      double energy = 0.0;
      for (Eigen::Index j = 0; j < eps.size(); ++j) {
        if ((bits >> j) & 1U) energy += eps(j) + eps_dot(j) * w + 0.5 * eps_ddot(j) * w * w;
      }
      evolved.accumulate(bits, amp * std::exp(-kI * energy * time));
    }
    const BogoliubovMap map = BogoliubovMap::from_w(expm(w * k));
    return apply_dense(many_body_unitary(map), evolved);
  };
  return e;
}

double relative_error(double a, double ref, double floor) {
  return std::abs(a - ref) / std::max(std::abs(ref), floor);
}

}  // namespace fqfi::oracle
