#include "fermi_qfi/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "fermi_qfi/bogoliubov.hpp"
#include "fermi_qfi/errors.hpp"
#include "fermi_qfi/hall.hpp"
#include "fermi_qfi/oracle.hpp"
#include "fermi_qfi/qfi.hpp"

namespace fqfi {
namespace {

using oracle::Rng;

struct Suite {
  std::string name;
  std::vector<CheckResult>* out;

  void record(const std::string& check, double residual, double tolerance) const {
    const bool pass = std::isfinite(residual) && residual <= tolerance;
    out->push_back({name, check, residual, tolerance, pass});
  }
};

// ------------------------------------------------------------------- fock

void fock_suite(const Suite& s, Rng& rng) {
  {
    const int m = 4;
    const Eigen::Index dim = Eigen::Index{1} << m;
    double worst = 0.0;
    for (int k = 0; k < m; ++k) {
      const CMatrix ak = ladder_matrix(m, k, Ladder::annihilate);
      for (int l = 0; l < m; ++l) {
        const CMatrix al = ladder_matrix(m, l, Ladder::annihilate);
        const CMatrix al_dag = ladder_matrix(m, l, Ladder::create);
        const CMatrix expect = (k == l ? 1.0 : 0.0) * CMatrix::Identity(dim, dim);
        worst = std::max(worst, max_abs(ak * al_dag + al_dag * ak - expect));
        worst = std::max(worst, max_abs(ak * al + al * ak));
      }
    }
    s.record("anticommutation relations (M=4, exhaustive)", worst, 0.0);
  }
  {
    const int m = 5;
    int mismatches = 0;
    const std::pair<Bilinear, std::pair<Ladder, Ladder>> kinds[] = {
        {Bilinear::hop_kl, {Ladder::create, Ladder::annihilate}},
        {Bilinear::pair_create, {Ladder::create, Ladder::create}},
        {Bilinear::pair_annihilate, {Ladder::annihilate, Ladder::annihilate}},
    };
    for (const auto& state : enumerate_basis(m)) {
      for (int k = 0; k < m; ++k) {
        for (int l = k + 1; l < m; ++l) {
          for (const auto& [kind, ops] : kinds) {
            // op_k op_l |n>: apply the right factor first
            std::optional<SignedState> composed;
            if (auto first = apply_ladder(state, l, ops.second)) {
              if (auto second = apply_ladder(first->state, k, ops.first)) {
                composed = SignedState{first->sign * second->sign, second->state};
              }
            }
            const auto direct = apply_bilinear(state, k, l, kind);
            if (direct.has_value() != composed.has_value() ||
                (direct && (direct->sign != composed->sign || direct->state != composed->state))) {
              ++mismatches;
            }
          }
          // a_l^† a_k
          std::optional<SignedState> composed;
          if (auto first = apply_ladder(state, k, Ladder::annihilate)) {
            if (auto second = apply_ladder(first->state, l, Ladder::create)) {
              composed = SignedState{first->sign * second->sign, second->state};
            }
          }
          const auto direct = apply_bilinear(state, k, l, Bilinear::hop_lk);
          if (direct.has_value() != composed.has_value() ||
              (direct && (direct->sign != composed->sign || direct->state != composed->state))) {
            ++mismatches;
          }
        }
      }
    }
    s.record("bilinears equal ladder compositions (M=5, exhaustive)", mismatches, 0.0);
  }
  {
    double worst = 0.0;
    double herm = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const auto gen = oracle::random_generator(rng, 4, true);
      const auto v = oracle::random_state(rng, 4);
      const auto u = oracle::random_state(rng, 4);
      const CMatrix dense = oracle::generator_dense(gen);
      const CVector diff = apply_quadratic_generator(gen, v).to_dense() - dense * v.to_dense();
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
      herm = std::max(herm, std::abs(inner_product(u, apply_quadratic_generator(gen, v)) -
                                     inner_product(apply_quadratic_generator(gen, u), v)));
    }
    s.record("generator action vs dense bilinear oracle (M=4)", worst, 1e-12);
    s.record("generator Hermiticity <u|Hv> = <Hu|v> (M=4)", herm, 1e-12);
  }
}

// ------------------------------------------------------------- bogoliubov

void bogoliubov_suite(const Suite& s, Rng& rng) {
  const int m = 3;
  const Eigen::Index dim = Eigen::Index{1} << m;
  double valid = 0.0;
  double recon = 0.0;
  double intertwine = 0.0;
  double vac = 0.0;
  double one_particle = 0.0;
  double pairs = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    const BogoliubovMap map = oracle::random_map(rng, m, true, 0.5);
    const auto report = validate(map);
    valid = std::max({valid, report.norm_residual, report.pair_residual,
                      report.unitarity_residual});
    const auto g = generator_matrix(map);
    recon = std::max(recon, max_abs(expm(kI * g.S * xi_matrix(m)) - map.assemble_w()));

    const CMatrix t = many_body_unitary(map);
    std::vector<CMatrix> create(m), annihilate(m);
    for (int k = 0; k < m; ++k) {
      create[k] = ladder_matrix(m, k, Ladder::create);
      annihilate[k] = ladder_matrix(m, k, Ladder::annihilate);
    }
    for (int i = 0; i < m; ++i) {
      CMatrix c_dag = CMatrix::Zero(dim, dim);
      CMatrix c = CMatrix::Zero(dim, dim);
      for (int k = 0; k < m; ++k) {
        c_dag += create[k] * map.U(k, i) + annihilate[k] * map.V(k, i);
        c += annihilate[k] * std::conj(map.U(k, i)) + create[k] * std::conj(map.V(k, i));
      }
      intertwine = std::max(intertwine, max_abs(t * create[i] * t.adjoint() - c_dag));
      intertwine = std::max(intertwine, max_abs(t * annihilate[i] * t.adjoint() - c));
    }
    const auto factors = canonical_decomposition(map);
    vac = std::max(vac, std::abs(t(0, 0) - vacuum_overlap(map)));
    const CMatrix r = one_particle_overlaps(map);
    for (int k = 0; k < m; ++k) {
      for (int l = 0; l < m; ++l) {
        const Complex direct = t(Eigen::Index{1} << k, Eigen::Index{1} << l);
        one_particle = std::max(one_particle, std::abs(direct - r(k, l)));
        // <vac| a_n a_k T |vac>
        const Complex q = (annihilate[k] * annihilate[l] * t)(0, 0);
        pairs = std::max(pairs, std::abs(q + factors.Z(k, l) * factors.det_root));
      }
    }
  }
  s.record("random maps satisfy the Bogoliubov conditions", valid, 1e-10);
  s.record("exp(iSΞ) reconstructs W", recon, 1e-8);
  s.record("T γ T† = α W intertwining (M=3)", intertwine, 1e-8);
  s.record("<vac|T|vac> equals det_root", vac, 1e-8);
  s.record("one-particle overlaps equal Fock matrix elements", one_particle, 1e-8);
  s.record("<vac|a_n a_k T|vac> = -Z_nk det_root", pairs, 1e-8);

  double omega = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    const RMatrix r1 = oracle::random_antisymmetric(rng, m, 0.7);
    const RMatrix r2 = oracle::random_antisymmetric(rng, m, 0.7);
    const RMatrix d1 = oracle::random_antisymmetric(rng, m, 0.7);
    const RMatrix d2 = oracle::random_antisymmetric(rng, m, 0.7);
    RMatrix is(2 * m, 2 * m), is_dot(2 * m, 2 * m);
    is << r2, r1, r1, r2;
    is_dot << d2, d1, d1, d2;
    const CMatrix sm = -kI * is.cast<Complex>();
    const CMatrix sd = -kI * is_dot.cast<Complex>();
    const CMatrix xi = xi_matrix(m);
    const CMatrix w = expm(kI * sm * xi);
    const CMatrix w_dot = expm_frechet(kI * sm * xi, kI * sd * xi);
    const CMatrix lhs = omega_tilde_numeric(sm, sd, 32) * xi;
    omega = std::max(omega, max_abs(lhs + kI * w.adjoint() * w_dot));
  }
  s.record("commuting case: Ω̃Ξ = -iW†Ẇ", omega, 1e-8);
}

// -------------------------------------------------------------------- qfi

void qfi_suite(const Suite& s, Rng& rng) {
  double basis = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const int m = 4;
    const auto gen = oracle::random_generator(rng, m, true, 0.8);
    const auto w0 = oracle::random_map(rng, m, true, 0.3);
    const Occupation n = oracle::random_occupation(rng, m);
    const auto family = oracle::bogoliubov_family(w0, gen, FockVector::basis(n));
    const double fd = qfi_bures_fd(family, 0.0).value;
    basis = std::max(basis, oracle::relative_error(qfi_basis_state(n, gen), fd));
  }
  s.record("basis-state QFI vs Bures finite differences (M=4)", basis, 1e-5);

  double chain = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const auto c = oracle::random_chain_instance(rng, 3);
    const double value = qfi_chain(matrix_action(c.gen_h), matrix_action(c.gen_u), c.psi0,
                                   c.phi, c.phi_dot);
    chain = std::max(chain, oracle::relative_error(value, qfi_bures_fd(c.composed, c.omega0).value));
  }
  s.record("chain rule vs Bures finite differences (M=3)", chain, 1e-5);

  double compact = 0.0;
  double gathered = 0.0;
  for (double t : {0.0, 0.5, 2.0}) {
    const auto e = oracle::random_evolution_instance(rng, 4, t);
    const double value = qfi_hamiltonian_evolution(e.spec, e.gen);
    compact = std::max(compact, oracle::relative_error(value, qfi_bures_fd(e.family, 0.0).value));
    gathered = std::max(gathered,
                        oracle::relative_error(4.0 * general_state_variance(e.spec, e.gen), value));
  }
  s.record("Hamiltonian-evolution QFI vs Bures finite differences (M=4)", compact, 1e-5);
  s.record("explicit variance sum vs operator route", gathered, 1e-12);

  double pure = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const auto gen = oracle::random_generator(rng, 4, true, 0.8);
    const auto family =
        oracle::bogoliubov_family(BogoliubovMap::identity(4), gen, oracle::random_state(rng, 4));
    const double a = qfi_pure(family.at(0.0), family.derivative_at(0.0));
    pure = std::max(pure, oracle::relative_error(a, qfi_bures_fd(family, 0.0).value));
  }
  s.record("pure-state formula vs Bures finite differences", pure, 1e-5);
}

// ------------------------------------------------------------------- hall

void hall_suite(const Suite& s, Rng& rng, bool inject_fault) {
  const double m_eff = gaas::mass_ratio * si::electron_mass;
  double closed = 0.0;
  int count = 0;
  for (std::int64_t m_count : {1, 3, 5, 9, 21, 51}) {
    for (std::int64_t f = 0; f <= 3; ++f) {
      for (std::int64_t mbar : {std::int64_t{0}, m_count / 2, m_count - 1}) {
        const auto g = geometry_from_counts(m_count, f * m_count + mbar,
                                            oracle::uniform(rng, 1e-7, 1e-5),
                                            oracle::uniform(rng, 0.1, 5.0), m_eff);
        const double ref = qfi_hall_closed(g);
        const double sum = qfi_hall_sum(g);
        closed = std::max(closed, ref == 0.0 ? std::abs(sum) : oracle::relative_error(sum, ref));
        ++count;
      }
    }
  }
  s.record("closed form vs direct sum (" + std::to_string(count) + " instances)", closed, 1e-12);

  std::function<double(int, int, double, double)> derivative = overlap_derivative;
  if (inject_fault) {
    derivative = [](int bra, int ket, double km_lb, double omega) {
      const double v = overlap_derivative(bra, ket, km_lb, omega);
      return bra == ket + 2 ? -v : v;
    };
  }
  double fd_numeric = 0.0;
  double fd_hutch = 0.0;
  double diagonal = 0.0;
  for (int draw = 0; draw < 3; ++draw) {
    const double w0 = oracle::uniform(rng, 0.5, 2.0);
    const double km = oracle::uniform(rng, -2.0, 2.0);
    const double h = 1e-4 * w0;
    for (int bra = 0; bra <= 10; ++bra) {
      for (int ket = 0; ket <= 10; ++ket) {
        const double expect = derivative(bra, ket, km / std::sqrt(w0), w0);
        auto fd = [&](auto&& overlap) {
          const double d1 = (overlap(bra, ket, km, w0, w0 + h) - overlap(bra, ket, km, w0, w0 - h)) / (2 * h);
          const double d2 = (overlap(bra, ket, km, w0, w0 + h / 2) -
                             overlap(bra, ket, km, w0, w0 - h / 2)) / h;
          return (4 * d2 - d1) / 3;
        };
        fd_numeric = std::max(fd_numeric, std::abs(fd(numeric_overlap) - expect) * w0);
        fd_hutch = std::max(fd_hutch, std::abs(fd(hutchisson_overlap) - expect) * w0);
        diagonal = std::max(diagonal, std::abs(hutchisson_overlap(bra, ket, km, w0, w0) -
                                               (bra == ket ? 1.0 : 0.0)));
      }
    }
  }
  s.record("overlap derivative vs quadrature finite differences (n,n' <= 10)", fd_numeric, 1e-6);
  s.record("overlap derivative vs Hutchisson finite differences", fd_hutch, 1e-6);
  s.record("Hutchisson overlap at ω = ω0 is δ_nn'", diagonal, 1e-12);

  const auto g = geometry_from_density(gaas::length, gaas::width, gaas::field, m_eff, gaas::density);
  s.record("GaAs benchmark σ(B) = 6.2e-11 T (relative)",
           oracle::relative_error(sensitivity(g, 1.0).sigmaB, 6.2e-11), 0.05);
}

}  // namespace

bool is_known_suite(const std::string& suite) {
  return suite == "all" || suite == "fock" || suite == "bogoliubov" || suite == "qfi" ||
         suite == "hall";
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  if (!is_known_suite(options.suite)) throw DomainError("unknown suite: " + options.suite);
  std::vector<CheckResult> out;
  Rng rng(options.seed);
  const bool all = options.suite == "all";
  if (all || options.suite == "fock") fock_suite({"fock", &out}, rng);
  if (all || options.suite == "bogoliubov") bogoliubov_suite({"bogoliubov", &out}, rng);
  if (all || options.suite == "qfi") qfi_suite({"qfi", &out}, rng);
  if (all || options.suite == "hall") hall_suite({"hall", &out}, rng, options.inject_fault);
  return out;
}

}  // namespace fqfi
