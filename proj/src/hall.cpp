#include "fermi_qfi/hall.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "fermi_qfi/errors.hpp"
#include "fermi_qfi/parallel.hpp"
#include "fermi_qfi/quadrature.hpp"

namespace fqfi {
namespace {

using std::numbers::pi;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be positive and finite");
  }
}

void require_level(int n) {
  if (n < 0) throw DomainError("oscillator levels must be non-negative");
  if (n > kMaxOscillatorLevel) {
    throw CapacityError("oscillator level above 60 exceeds the Hermite stability cap");
  }
}

HallGeometry finish(HallGeometry g) {
  if (g.N < 0) throw DomainError("electron count must be non-negative");
  g.omega = cyclotron_frequency(g.B, g.m_eff);
  g.l_B = magnetic_length(g.B);
  g.f = g.N / g.M;
  g.mbar = g.N - g.f * g.M;
  g.strong_field = g.l_B < g.w / 10.0;
  g.narrow = g.L < g.w;
  g.plot_valid = g.w > std::max(g.L, g.l_B);
  return g;
}

std::int64_t flux_count(double L, double w, double B) {
  return round_to_odd(B * L * w / si::flux_quantum);
}

// Orthonormal Hermite functions without the Gaussian factor: p_n(x) with
// ∫ p_n p_m e^{-x²} dx = δ_nm.
double hermite_orthonormal(int n, double x) {
  double prev = 0.0;
  double cur = 1.0 / std::pow(pi, 0.25);
  for (int j = 0; j < n; ++j) {
    const double next = x * std::sqrt(2.0 / (j + 1.0)) * cur - std::sqrt(j / (j + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

struct LogTerm {
  double log_abs;
  int sign;
};

// log|base^e| with sign; 0^0 = 1, 0^e = nothing.
bool power(double base, int e, LogTerm& acc) {
  if (e == 0) return true;
  if (base == 0.0) return false;
  acc.log_abs += e * std::log(std::abs(base));
  if (base < 0.0 && (e & 1)) acc.sign = -acc.sign;
  return true;
}

// R = ⟨bra|_{ω0} |ket⟩_ω: (-1)^ket, (γp) powers follow the ket, (γq) powers the bra.
double hutchisson(int bra, int ket, double km, double omega0, double omega) {
  require_level(bra);
  require_level(ket);
  require_positive(omega0, "omega0");
  require_positive(omega, "omega");
  const double l2 = 1.0 / omega;
  const double l02 = 1.0 / omega0;
  const double gamma = km * (l2 - l02) / std::sqrt(l2);
  const double x = (omega - omega0) / (omega + omega0);
  const double q = 2.0 * std::sqrt(omega * omega0) / (omega + omega0);
  const double p = 2.0 * omega0 / (omega + omega0);

  std::vector<LogTerm> terms;
  for (int r = 0; r <= std::min(bra, ket); ++r) {
    for (int s = 0; 2 * s <= ket - r; ++s) {
      const int a = ket - r - 2 * s;
      for (int t = 0; 2 * t <= bra - r; ++t) {
        const int b = bra - r - 2 * t;
        LogTerm term{-std::lgamma(r + 1.0) - std::lgamma(a + 1.0) - std::lgamma(s + 1.0) -
                         std::lgamma(b + 1.0) - std::lgamma(t + 1.0),
                     1};
        if (!power(-2.0 * q, r, term) || !power(gamma * p, a, term) || !power(x, s, term) ||
            !power(gamma * q, b, term) || !power(-x, t, term)) {
          continue;
        }
        terms.push_back(term);
      }
    }
  }
  if (terms.empty()) return 0.0;
  std::sort(terms.begin(), terms.end(),
            [](const LogTerm& u, const LogTerm& v) { return u.log_abs > v.log_abs; });
  const double top = terms.front().log_abs;
  double sum = 0.0;
  for (const auto& t : terms) sum += t.sign * std::exp(t.log_abs - top);
  if (sum == 0.0) return 0.0;

  const double log_prefactor =
      0.5 * (-(bra + ket) * std::log(2.0) + std::log(q) + std::lgamma(bra + 1.0) +
             std::lgamma(ket + 1.0)) -
      0.25 * gamma * gamma * p;
  const double magnitude = std::exp(log_prefactor + top + std::log(std::abs(sum)));
  if (!std::isfinite(magnitude)) throw NumericError("Hutchisson sum overflowed");
  const int sign = ((ket & 1) ? -1 : 1) * (sum < 0.0 ? -1 : 1);
  return sign * magnitude;
}

}  // namespace

double HallGeometry::k(std::int64_t m) const { return 2.0 * pi * static_cast<double>(m) / L; }

std::int64_t round_to_odd(double x) {
  if (!(x >= 0.0) || x > 9e18) throw DomainError("flux count out of range");
  return 2 * static_cast<std::int64_t>(std::floor(x / 2.0)) + 1;
}

double magnetic_length(double B) {
  require_positive(B, "B");
  return std::sqrt(si::hbar / (si::elementary_charge * B));
}

double cyclotron_frequency(double B, double m_eff) {
  require_positive(B, "B");
  require_positive(m_eff, "m_eff");
  return si::elementary_charge * B / m_eff;
}

HallGeometry geometry_from_count(double L, double w, double B, double m_eff, std::int64_t N) {
  require_positive(L, "L");
  require_positive(w, "w");
  require_positive(B, "B");
  require_positive(m_eff, "m_eff");
  HallGeometry g;
  g.L = L;
  g.w = w;
  g.B = B;
  g.m_eff = m_eff;
  g.N = N;
  g.M = flux_count(L, w, B);
  return finish(g);
}

HallGeometry geometry_from_density(double L, double w, double B, double m_eff, double n2d) {
  require_positive(n2d, "n2d");
  require_positive(L, "L");
  require_positive(w, "w");
  return geometry_from_count(L, w, B, m_eff, std::llround(n2d * L * w));
}

HallGeometry geometry_from_filling(double L, double w, double B, double m_eff, double nu) {
  if (!(nu >= 0.0)) throw DomainError("filling factor must be non-negative");
  require_positive(L, "L");
  require_positive(w, "w");
  require_positive(B, "B");
  const auto M = flux_count(L, w, B);
  return geometry_from_count(L, w, B, m_eff, std::llround(nu * static_cast<double>(M)));
}

HallGeometry geometry_from_counts(std::int64_t M, std::int64_t N, double L, double B,
                                  double m_eff) {
  if (M < 1 || M % 2 == 0) throw DomainError("flux count must be a positive odd integer");
  require_positive(L, "L");
  require_positive(B, "B");
  require_positive(m_eff, "m_eff");
  HallGeometry g;
  g.L = L;
  g.B = B;
  g.m_eff = m_eff;
  g.w = static_cast<double>(M) * si::flux_quantum / (B * L);
  g.M = M;
  g.N = N;
  return finish(g);
}

double overlap_derivative(int n_bra, int n_ket, double km_lb, double omega) {
  if (n_bra < 0 || n_ket < 0) throw DomainError("oscillator levels must be non-negative");
  require_positive(omega, "omega");
  const double n = n_ket;
  const int d = n_bra - n_ket;
  switch (d) {
    case -1: return km_lb / (std::numbers::sqrt2 * omega) * std::sqrt(n);
    case 1: return -km_lb / (std::numbers::sqrt2 * omega) * std::sqrt(n + 1.0);
    case -2: return std::sqrt(n * (n - 1.0)) / (4.0 * omega);
    case 2: return -std::sqrt((n + 2.0) * (n + 1.0)) / (4.0 * omega);
    default: return 0.0;
  }
}

double numeric_overlap(int n_bra, int n_ket, double km, double omega0, double omega) {
  require_level(n_bra);
  require_level(n_ket);
  require_positive(omega0, "omega0");
  require_positive(omega, "omega");
  const double l0 = 1.0 / std::sqrt(omega0);
  const double l1 = 1.0 / std::sqrt(omega);
  const double y0 = km * l0 * l0;
  const double y1 = km * l1 * l1;
  // Product of the two Gaussians is exp(-a (y - c)² - K).
  const double a = 0.5 / (l0 * l0) + 0.5 / (l1 * l1);
  const double c = km / a;
  const double big_k = 0.5 * y0 * y0 / (l0 * l0) + 0.5 * y1 * y1 / (l1 * l1) - a * c * c;
  const QuadratureRule& rule = gauss_hermite(2 * (n_bra + n_ket) + 32);
  const double scale = 1.0 / std::sqrt(a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = c + scale * rule.nodes[i];
    sum += rule.weights[i] * hermite_orthonormal(n_bra, (y - y0) / l0) *
           hermite_orthonormal(n_ket, (y - y1) / l1);
  }
  return std::exp(-big_k) * scale / std::sqrt(l0 * l1) * sum;
}

double hutchisson_overlap(int n_bra, int n_ket, double km, double omega0, double omega) {
  return hutchisson(n_bra, n_ket, km, omega0, omega);
}

double detail::hutchisson_main_text(int n_prime, int n, double km, double omega0,
                                    double omega) {
  return hutchisson(n_prime, n, km, omega0, omega);
}

double qfi_hall_sum(const HallGeometry& geom) {
  if (static_cast<double>(geom.M) * static_cast<double>(geom.f + 1) > kHallSumLimit) {
    throw CapacityError("direct Hall sum refused for M (f+1) > 1e7; use the closed form");
  }
  const int f = static_cast<int>(geom.f);
  const int n_max = f + 3;
  long double total = 0.0L;
  for (std::int64_t m = geom.m_min(); m <= geom.m_max(); ++m) {
    const bool extra = (m - geom.m_min()) < geom.mbar;
    const int top = extra ? f : f - 1;
    const double km_lb = geom.k(m) * geom.l_B;
    for (int n = 0; n <= top; ++n) {
      for (int np = top + 1; np <= n_max; ++np) {
        const double r = overlap_derivative(np, n, km_lb, geom.omega);
        total += static_cast<long double>(r) * r;
      }
    }
  }
  return static_cast<double>(4.0L * total);
}

long double hall_closed_core(std::int64_t M, std::int64_t f, std::int64_t N,
                             long double lb_over_L) {
  using I128 = __int128;
  const long double Ml = M;
  const long double fl = f;
  const long double Nl = N;
  const long double a = -fl * (fl + 1) * Ml + 2 * fl * Nl + Nl;
  long double b;
  const long double scale = std::max({fl * fl * fl * Ml * Ml * Ml, Ml * Nl * Nl * (fl + 1),
                                      Nl * Nl * Nl, Nl * Ml * Ml * (fl + 1) * (fl + 1)});
  if (scale < 1e35L) {
    // All terms fit in 128 bits: evaluate the cancelling polynomial exactly.
    const I128 m = M;
    const I128 ff = f;
    const I128 n = N;
    const I128 exact = 2 * ff * (ff + 1) * (2 * ff + 1) * m * m * m +
                       6 * (2 * ff + 1) * m * n * n - 3 * n * (2 * ff * m + m) * (2 * ff * m + m) -
                       4 * n * n * n + n;
    b = static_cast<long double>(exact);
  } else {
    b = 2 * fl * (fl + 1) * (2 * fl + 1) * Ml * Ml * Ml + 6 * (2 * fl + 1) * Ml * Nl * Nl -
        3 * Nl * (2 * fl * Ml + Ml) * (2 * fl * Ml + Ml) - 4 * Nl * Nl * Nl + Nl;
  }
  return a / 2 - (2 * std::numbers::pi_v<long double> * std::numbers::pi_v<long double> / 3) *
                     lb_over_L * lb_over_L * b;
}

double qfi_hall_closed(const HallGeometry& geom) {
  const long double core = hall_closed_core(geom.M, geom.f, geom.N,
                                            static_cast<long double>(geom.l_B) / geom.L);
  const long double omega = geom.omega;
  return static_cast<double>(core / (omega * omega));
}

SensitivityResult sensitivity(const HallGeometry& geom, double Me) {
  if (!(Me >= 1.0)) throw DomainError("number of measurements must be at least 1");
  SensitivityResult r;
  r.qfi = qfi_hall_closed(geom);
  if (!(r.qfi > 0.0)) throw DomainError("parameter not estimable (QFI = 0)");
  r.Me = Me;
  r.sigmaB = (geom.m_eff / si::elementary_charge) / std::sqrt(Me * r.qfi);
  r.strong_field = geom.strong_field;
  r.narrow = geom.narrow;
  r.plot_valid = geom.plot_valid;
  return r;
}

double scaling_leading(double N, double lambda, double mu, double nu_coef, double f,
                       double omega) {
  if (!(lambda >= 0.5 && lambda <= 1.0)) throw DomainError("lambda must lie in [1/2, 1]");
  if (!(f >= 1.0)) throw DomainError("leading-order scaling needs f >= 1");
  require_positive(N, "N");
  require_positive(mu, "mu");
  require_positive(nu_coef, "nu");
  require_positive(omega, "omega");
  return 2.0 * pi * pi / (3.0 * f * f * omega * omega * nu_coef * nu_coef) *
         std::pow(N, 1.0 + 2.0 * lambda);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n < 1) throw DomainError("grid needs at least one point");
  require_positive(lo, "grid minimum");
  require_positive(hi, "grid maximum");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<Fig1Row> fig1_surface(const Fig1Config& config) {
  const auto bs = log_grid(config.B_min, config.B_max, config.B_points);
  const auto ws = log_grid(config.w_min, config.w_max, config.w_points);
  if (!(config.Me >= 1.0)) throw DomainError("number of measurements must be at least 1");
  std::vector<Fig1Row> rows(bs.size() * ws.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const double B = bs[i / ws.size()];
    const double w = ws[i % ws.size()];
    const HallGeometry g = geometry_from_density(config.L, w, B, config.m_eff, config.n2d);
    Fig1Row& row = rows[i];
    row.B = B;
    row.w = w;
    row.L = config.L;
    row.N = g.N;
    row.M = g.M;
    row.f = g.f;
    row.mbar = g.mbar;
    row.valid = g.plot_valid;
    if (!row.valid) return;
    row.qfi = qfi_hall_closed(g);
    if (*row.qfi > 0.0) {
      row.sigmaB = (g.m_eff / si::elementary_charge) / std::sqrt(config.Me * *row.qfi);
    }
  });
  return rows;
}

}  // namespace fqfi
