#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace fqfi {

namespace si {
inline constexpr double hbar = 1.054571817e-34;            // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double electron_mass = 9.1093837015e-31;   // kg
/// h/e in Wb
inline constexpr double flux_quantum = 2.0 * 3.14159265358979323846 * hbar / elementary_charge;
}  // namespace si

namespace gaas {
inline constexpr double mass_ratio = 0.068;
inline constexpr double density = 1.0e15;  // 1/m²
inline constexpr double field = 1.0;       // T
inline constexpr double width = 1e-2;      // m
inline constexpr double length = 1e-3;     // m
}  // namespace gaas

/// Landau-gauge Hall bar: |y| <= w/2, 0 <= x <= L, periodic in x.
/// M flux quanta (odd), N = f M + mbar electrons, the mbar extra electrons
/// sitting at the most negative momenta m = -(M-1)/2, ..., mbar - (M+1)/2.
struct HallGeometry {
  double L = 0.0;      // m
  double w = 0.0;      // m
  double B = 0.0;      // T
  double m_eff = 0.0;  // kg
  std::int64_t N = 0;
  std::int64_t M = 1;
  std::int64_t f = 0;
  std::int64_t mbar = 0;
  double omega = 0.0;  // rad/s
  double l_B = 0.0;    // m

  bool strong_field = false;  // l_B < w/10
  bool narrow = false;        // L < w
  bool plot_valid = false;    // w > max(L, l_B)

  [[nodiscard]] std::int64_t m_min() const { return -(M - 1) / 2; }
  [[nodiscard]] std::int64_t m_max() const { return (M - 1) / 2; }
  /// k_m = 2π m / L
  [[nodiscard]] double k(std::int64_t m) const;
};

/// 2⌊x/2⌋ + 1: the nearest odd integer, ties going to the larger one.
std::int64_t round_to_odd(double x);

double magnetic_length(double B);
double cyclotron_frequency(double B, double m_eff);

HallGeometry geometry_from_count(double L, double w, double B, double m_eff, std::int64_t N);
/// N = round(n2d L w)
HallGeometry geometry_from_density(double L, double w, double B, double m_eff, double n2d);
/// N = round(ν M)
HallGeometry geometry_from_filling(double L, double w, double B, double m_eff, double nu);
/// Exact odd flux count M; w is chosen so that B L w / (h/e) = M.
HallGeometry geometry_from_counts(std::int64_t M, std::int64_t N, double L, double B,
                                  double m_eff);

/// d/dω <n_bra|_{ω0} |n_ket>_ω at ω = ω0 for equal m:
///   (k_m l_B / (√2 ω)) (√n δ_{n',n-1} - √(n+1) δ_{n',n+1})
///   + (1/(4ω)) (√(n(n-1)) δ_{n',n-2} - √((n+2)(n+1)) δ_{n',n+2})
/// with n = n_ket, n' = n_bra.
double overlap_derivative(int n_bra, int n_ket, double km_lb, double omega);

inline constexpr int kMaxOscillatorLevel = 60;

/// <n_bra|_{ω0} |n_ket>_ω by Gauss–Hermite quadrature, in units ħ = m_eff = 1
/// (oscillator length 1/√ω, km in the same inverse length unit).
double numeric_overlap(int n_bra, int n_ket, double km, double omega0, double omega);

/// Same overlap from the Hutchisson triple sum, summed in log space.
double hutchisson_overlap(int n_bra, int n_ket, double km, double omega0, double omega);

namespace detail {
/// The triple sum with the index naming used in the main text, R_{n'n}.
double hutchisson_main_text(int n_prime, int n, double km, double omega0, double omega);
}  // namespace detail

inline constexpr double kHallSumLimit = 1e7;

/// 4 Σ_m Σ_{n occupied} Σ_{n' empty, n' <= f+3} |Ṙ_{n'n}|²  (s²).
/// Refuses instances with M (f + 1) > 1e7.
double qfi_hall_sum(const HallGeometry& geom);

/// Dimensionless ω² I from the closed form,
///   A/2 - (2π²/3)(l_B/L)² B,
/// A = -f(f+1)M + 2fN + N,
/// B = 2f(f+1)(2f+1)M³ + 6(2f+1)MN² - 3N(2fM+M)² - 4N³ + N.
long double hall_closed_core(std::int64_t M, std::int64_t f, std::int64_t N,
                             long double lb_over_L);

/// Closed-form QFI in s².
double qfi_hall_closed(const HallGeometry& geom);

struct SensitivityResult {
  double qfi = 0.0;     // s²
  double sigmaB = 0.0;  // T
  double Me = 1.0;
  bool strong_field = false;
  bool narrow = false;
  bool plot_valid = false;
};

/// σ(B) = (m_eff/e) / sqrt(Me I).  Throws DomainError when I = 0.
SensitivityResult sensitivity(const HallGeometry& geom, double Me = 1.0);

/// Leading order (2π²/(3 f² ω² ν²)) N^{1+2λ} for w = μ N^λ l_B, L = ν N^{1-λ} l_B.
/// μ does not enter the leading term.
double scaling_leading(double N, double lambda, double mu, double nu_coef, double f,
                       double omega);

struct Fig1Config {
  double L = 1e-6;
  double w_min = 1e-5;
  double w_max = 1e-2;
  int w_points = 31;
  double B_min = 1e-8;
  double B_max = 1e2;
  int B_points = 41;
  double m_eff = gaas::mass_ratio * si::electron_mass;
  double n2d = gaas::density;
  double Me = 1.0;
};

struct Fig1Row {
  double B = 0.0;
  double w = 0.0;
  double L = 0.0;
  std::int64_t N = 0;
  std::int64_t M = 0;
  std::int64_t f = 0;
  std::int64_t mbar = 0;
  std::optional<double> qfi;
  std::optional<double> sigmaB;
  bool valid = false;
};

/// n points log-spaced over [lo, hi]; a single point sits at lo.
std::vector<double> log_grid(double lo, double hi, int n);

/// Sensitivity over the (B, w) grid, B-major.  Rows failing w > max(L, l_B)
/// keep their geometry and carry no QFI.
std::vector<Fig1Row> fig1_surface(const Fig1Config& config);

}  // namespace fqfi
