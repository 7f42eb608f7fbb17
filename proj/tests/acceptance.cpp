// Acceptance criteria: one PASS/FAIL line each, with the measured residual,
// the pinned tolerance and the wall time.  Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "fermi_qfi/bogoliubov.hpp"
#include "fermi_qfi/hall.hpp"
#include "fermi_qfi/oracle.hpp"
#include "fermi_qfi/qfi.hpp"

using namespace fqfi;
using oracle::Rng;

namespace {

struct Outcome {
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double time_limit,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  bool ok = false;
  try {
    o = body();
    ok = std::isfinite(o.residual) && o.residual <= o.tolerance;
  } catch (const std::exception& e) {
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && secs < time_limit;
  if (!ok) ++failures;
  std::printf("%s  %2d. %s  residual=%.3e tol=%.1e  time=%.3fs (limit %gs)%s%s\n",
              ok ? "PASS" : "FAIL", id, name.c_str(), o.residual, o.tolerance, secs, time_limit,
              o.detail.empty() ? "" : "  ", o.detail.c_str());
  std::fflush(stdout);
}

std::string run_cli(std::vector<std::string> args, int* code = nullptr) {
  args.insert(args.begin(), "fermi_qfi");
  std::ostringstream out, err;
  const int c = cli::run(args, out, err);
  if (code) *code = c;
  return out.str();
}

nlohmann::json machine_block(const std::string& text) {
  const std::string marker = "--- machine-readable ---\n";
  return nlohmann::json::parse(text.substr(text.find(marker) + marker.size()));
}

double fd_richardson(const std::function<double(double)>& f, double x, double h) {
  const double d1 = (f(x + h) - f(x - h)) / (2 * h);
  const double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
  return (4 * d2 - d1) / 3;
}

struct OverlapDraw {
  double km;
  double omega0;
};

std::vector<OverlapDraw> overlap_draws() {
  Rng rng(404);
  std::vector<OverlapDraw> d(20);
  for (auto& x : d) x = {oracle::uniform(rng, -3.0, 3.0), oracle::uniform(rng, 0.3, 3.0)};
  return d;
}

// max over n, n' <= 10 of ω0 |∂_ω overlap - overlap_derivative|
double overlap_fd_residual(double (*overlap)(int, int, double, double, double)) {
  double worst = 0.0;
  for (const auto& [km, w0] : overlap_draws()) {
    for (int bra = 0; bra <= 10; ++bra) {
      for (int ket = 0; ket <= 10; ++ket) {
        const double fd = fd_richardson(
            [&](double w) { return overlap(bra, ket, km, w0, w); }, w0, 1e-4 * w0);
        const double exact = overlap_derivative(bra, ket, km / std::sqrt(w0), w0);
        worst = std::max(worst, std::abs(fd - exact) * w0);
      }
    }
  }
  return worst;
}

}  // namespace

int main() {
  const double m_eff = gaas::mass_ratio * si::electron_mass;

  criterion(1, "GaAs benchmark sigma_B = 6.2e-11 T (relative)", 1.0, [] {
    const auto doc = machine_block(run_cli({"bench-gaas"}));
    const double sigma = doc["sigmaB_Me1"].get<double>();
    return Outcome{oracle::relative_error(sigma, 6.2e-11), 0.05,
                   "sigma=" + cli::format_number(sigma)};
  });

  criterion(2, "magnetic length at 1 T = 25.7 nm (relative)", 1.0, [] {
    const double lb = magnetic_length(1.0);
    return Outcome{oracle::relative_error(lb, 25.7e-9), 0.005, "l_B=" + cli::format_number(lb)};
  });

  criterion(3, "closed form vs direct sum, M <= 201", 30.0, [&] {
    Rng rng(303);
    double worst = 0.0;
    int count = 0;
    for (std::int64_t M : {1, 3, 5, 7, 9, 11, 15, 21, 33, 51, 77, 101, 151, 201}) {
      for (std::int64_t f = 0; f <= 3; ++f) {
        std::vector<std::int64_t> mbars = {0, 1, M / 2, M - 1};
        std::sort(mbars.begin(), mbars.end());
        mbars.erase(std::unique(mbars.begin(), mbars.end()), mbars.end());
        for (const auto mbar : mbars) {
          if (mbar >= M) continue;
          for (int draw = 0; draw < 3; ++draw) {
            const double L = std::exp(oracle::uniform(rng, std::log(1e-8), std::log(1e-4)));
            const double B = std::exp(oracle::uniform(rng, std::log(1e-3), std::log(1e2)));
            const auto g = geometry_from_counts(M, f * M + mbar, L, B, m_eff);
            const double closed = qfi_hall_closed(g);
            const double sum = qfi_hall_sum(g);
            worst = std::max(worst, closed == 0.0 ? std::abs(sum)
                                                  : oracle::relative_error(sum, closed));
            ++count;
          }
        }
      }
    }
    return Outcome{count >= 500 ? worst : 1e300, 1e-12, std::to_string(count) + " combinations"};
  });

  criterion(4, "overlap derivative vs finite differences of quadrature overlap", 10.0, [] {
    return Outcome{overlap_fd_residual(numeric_overlap), 1e-6, "20 draws, n,n' <= 10"};
  });

  criterion(5, "Hutchisson overlap: derivative and identity at omega0", 10.0, [] {
    const double fd = overlap_fd_residual(hutchisson_overlap);
    double delta = 0.0;
    for (const auto& [km, w0] : overlap_draws()) {
      for (int bra = 0; bra <= 10; ++bra) {
        for (int ket = 0; ket <= 10; ++ket) {
          delta = std::max(delta, std::abs(hutchisson_overlap(bra, ket, km, w0, w0) -
                                           (bra == ket ? 1.0 : 0.0)));
        }
      }
    }
    // both tolerances folded into one residual: fd / 1e-6 and delta / 1e-12
    return Outcome{std::max(fd / 1e-6, delta / 1e-12), 1.0,
                   "fd=" + cli::format_number(fd) + " delta=" + cli::format_number(delta)};
  });

  criterion(6, "basis-state QFI vs Bures finite differences, 50 families, M <= 6", 60.0, [] {
    Rng rng(606);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const int m = 2 + trial % 5;
      const auto gen = oracle::random_generator(rng, m, trial % 4 != 0, 0.8);
      const auto w0 = oracle::random_map(rng, m, true, 0.5);
      const auto n = oracle::random_occupation(rng, m);
      const auto family = oracle::bogoliubov_family(w0, gen, FockVector::basis(n));
      const double fd = qfi_bures_fd(family, 0.0).value;
      worst = std::max(worst, oracle::relative_error(qfi_basis_state(n, gen), fd, 1e-12));
    }
    return Outcome{worst, 1e-5, {}};
  });

  criterion(7, "chain rule vs composed family, 25 instances, M <= 4", 60.0, [] {
    Rng rng(707);
    double fd_err = 0.0;
    double trivial = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
      const int m = 2 + trial % 3;
      const auto c = oracle::random_chain_instance(rng, m);
      const auto h = matrix_action(c.gen_h);
      const auto u = matrix_action(c.gen_u);
      const double value = qfi_chain(h, u, c.psi0, c.phi, c.phi_dot);
      fd_err = std::max(fd_err, oracle::relative_error(value, qfi_bures_fd(c.composed, c.omega0).value));

      const auto none = matrix_action(CMatrix::Zero(c.gen_h.rows(), c.gen_h.cols()));
      trivial = std::max(trivial, oracle::relative_error(qfi_chain(h, none, c.psi0, c.phi, c.phi_dot),
                                                         qfi_unitary_variance(h, c.psi0)));
      trivial = std::max(trivial, oracle::relative_error(
                                      qfi_chain(none, u, c.psi0, c.psi0, FockVector(m)),
                                      qfi_unitary_variance(u, c.psi0)));
    }
    return Outcome{std::max(fd_err / 1e-5, trivial / 1e-12), 1.0,
                   "fd=" + cli::format_number(fd_err) + " trivial=" + cli::format_number(trivial)};
  });

  criterion(8, "Hamiltonian-evolution QFI, 25 instances, M <= 5", 60.0, [] {
    Rng rng(808);
    double gathered = 0.0, fd_err = 0.0, at_zero = 0.0;
    const double times[] = {0.0, 0.5, 2.0};
    for (int trial = 0; trial < 25; ++trial) {
      const int m = 2 + trial % 4;
      const double t = times[trial % 3];
      const auto e = oracle::random_evolution_instance(rng, m, t);
      const double value = qfi_hamiltonian_evolution(e.spec, e.gen);
      gathered = std::max(gathered,
                          oracle::relative_error(4 * general_state_variance(e.spec, e.gen), value));
      fd_err = std::max(fd_err, oracle::relative_error(value, qfi_bures_fd(e.family, 0.0).value));
      if (t == 0.0) {
        at_zero = std::max(at_zero, oracle::relative_error(
                                        value, qfi_unitary_variance(generator_action(e.gen),
                                                                    e.spec.coefficients)));
      }
    }
    return Outcome{std::max({gathered / 1e-12, fd_err / 1e-5, at_zero / 1e-12}), 1.0,
                   "sum=" + cli::format_number(gathered) + " fd=" + cli::format_number(fd_err) +
                       " t0=" + cli::format_number(at_zero)};
  });

  criterion(9, "scaling exponent 1+2*lambda, N in [1e3, 1e6]", 10.0, [] {
    double worst = 0.0;
    std::string detail;
    for (const char* lambda : {"0.5", "0.75", "1"}) {
      const auto doc = nlohmann::json::parse(
          run_cli({"scaling", "--lambda", lambda, "--N-min", "1e3", "--N-max", "1e6", "--format", "json"}));
      const double fit = doc["fitted_slope"].get<double>();
      worst = std::max(worst, oracle::relative_error(fit, doc["theory_slope"].get<double>()));
      detail += std::string(detail.empty() ? "" : " ") + "slope(" + lambda + ")=" + std::to_string(fit);
    }
    return Outcome{worst, 0.02, detail};
  });

  criterion(10, "sensitivity surface: mask w > max(L, l_B) and sigma decreasing in w", 30.0, [] {
    int code = -1;
    std::istringstream csv(run_cli({"hall-sweep"}, &code));
    if (code != 0) return Outcome{1e300, 0.0, "hall-sweep exit " + std::to_string(code)};
    std::string line;
    std::getline(csv, line);
    int mask_errors = 0, rises = 0, rows = 0, valid = 0;
    long long worst_m = 0;
    double prev_b = -1.0, prev_sigma = 0.0;
    bool prev_valid = false;
    while (std::getline(csv, line)) {
      std::vector<std::string> c;
      std::istringstream fields(line);
      for (std::string x; std::getline(fields, x, ',');) c.push_back(x);
      c.resize(10);
      const double B = std::stod(c[0]), w = std::stod(c[1]), L = std::stod(c[2]);
      const bool ok = c[9] == "true";
      ++rows;
      valid += ok;
      mask_errors += ok != (w > std::max(L, magnetic_length(B)));
      if (ok && c[8].empty()) ++mask_errors;
      const double sigma = ok ? std::stod(c[8]) : 0.0;
      if (ok && prev_valid && B == prev_b && !(sigma < prev_sigma)) {
        ++rises;
        worst_m = std::max(worst_m, std::stoll(c[4]));
      }
      prev_b = B;
      prev_valid = ok;
      prev_sigma = sigma;
    }
    std::string detail = std::to_string(rows) + " points, " + std::to_string(valid) +
                         " valid, mask mismatches " + std::to_string(mask_errors) +
                         ", sigma rises " + std::to_string(rises);
    if (rises) detail += " (largest M after a rise: " + std::to_string(worst_m) + ")";
    return Outcome{static_cast<double>(mask_errors + rises), 0.0, detail};
  });

  criterion(11, "filled band with V=0 gives exactly zero, 20 draws, M <= 8", 1.0, [] {
    Rng rng(1111);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int m = 1 + trial % 8;
      const auto gen = oracle::random_generator(rng, m, false, 2.0);
      worst = std::max(worst, std::abs(qfi_basis_state(Occupation::filled(m), gen)));
    }
    return Outcome{worst, 0.0, {}};
  });

  criterion(12, "Omega tilde: commuting closed form and quadrature convergence", 10.0, [] {
    Rng rng(1212);
    double closed = 0.0, conv = 0.0, min_comm = 1e300;
    for (int trial = 0; trial < 10; ++trial) {
      const int m = 2 + trial % 3;
      const RMatrix r1 = oracle::random_antisymmetric(rng, m, 0.7);
      const RMatrix r2 = oracle::random_antisymmetric(rng, m, 0.7);
      const RMatrix d1 = oracle::random_antisymmetric(rng, m, 0.7);
      const RMatrix d2 = oracle::random_antisymmetric(rng, m, 0.7);
      RMatrix is(2 * m, 2 * m), is_dot(2 * m, 2 * m);
      is << r2, r1, r1, r2;
      is_dot << d2, d1, d1, d2;
      const CMatrix s = -kI * is.cast<Complex>();
      const CMatrix sd = -kI * is_dot.cast<Complex>();
      const CMatrix xi = xi_matrix(m);
      const CMatrix w = expm(kI * s * xi);
      const CMatrix w_dot = expm_frechet(kI * s * xi, kI * sd * xi);
      closed = std::max(closed, max_abs(omega_tilde_numeric(s, sd, 32) * xi + kI * w.adjoint() * w_dot));
    }
    for (int trial = 0; trial < 10; ++trial) {
      const int m = 2 + trial % 3;
      const CMatrix s = -kI * oracle::random_antisymmetric(rng, 2 * m, 0.7).cast<Complex>();
      const CMatrix sd = -kI * oracle::random_antisymmetric(rng, 2 * m, 0.7).cast<Complex>();
      const CMatrix xi = xi_matrix(m);
      min_comm = std::min(min_comm, max_abs(s * xi - xi * s));
      conv = std::max(conv, max_abs(omega_tilde_numeric(s, sd, 32) - omega_tilde_numeric(s, sd, 64)));
    }
    const bool noncommuting = min_comm > 1e-3;
    return Outcome{noncommuting ? std::max(closed / 1e-8, conv / 1e-10) : 1e300, 1.0,
                   "closed=" + cli::format_number(closed) + " order32-vs-64=" + cli::format_number(conv)};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
