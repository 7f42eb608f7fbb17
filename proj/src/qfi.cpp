#include "fermi_qfi/qfi.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <string>

#include "fermi_qfi/errors.hpp"

namespace fqfi {
namespace {

constexpr double kClip = 1e-9;
constexpr double kMixedThreshold = 1e-14;

double clip(double value) {
  if (value < -kClip) throw NumericError("QFI estimate is negative beyond rounding");
  return std::max(0.0, value);
}

void require_normalized(const FockVector& v, const char* what) {
  if (!v.is_normalized()) {
    throw DomainError(std::string(what) + " is not normalized (|<ψ|ψ>-1| > 1e-9)");
  }
}

int string_sign(std::uint64_t bits, int k, int l) {
  const std::uint64_t mask = ((std::uint64_t{1} << l) - 1) & ~((std::uint64_t{1} << k) - 1);
  return (std::popcount(bits & mask) & 1) ? -1 : 1;
}

}  // namespace

double default_fd_step(double omega) { return 1e-4 * std::max(1.0, std::abs(omega)); }

FockVector ParametrizedState::derivative_at(double omega, double step) const {
  if (derivative) return derivative(omega);
  const double h = step > 0.0 ? step : default_fd_step(omega);
  auto diff = [&](double dh) {
    FockVector d = at(omega + dh) - at(omega - dh);
    d *= Complex(1.0 / (2.0 * dh));
    return d;
  };
  FockVector fine = diff(0.5 * h);
  fine *= Complex(4.0 / 3.0);
  FockVector coarse = diff(h);
  coarse *= Complex(1.0 / 3.0);
  return fine - coarse;
}

double qfi_pure(const FockVector& psi, const FockVector& psi_dot) {
  require_normalized(psi, "state");
  if (psi.modes() != psi_dot.modes()) throw DomainError("state and derivative differ in modes");
  const double dd = inner_product(psi_dot, psi_dot).real();
  const double overlap = std::norm(inner_product(psi_dot, psi));
  return clip(4.0 * (dd - overlap));
}

double bures_distance_squared(const FockVector& a, const FockVector& b) {
  const Complex ov = inner_product(a, b);
  const Complex phase = std::abs(ov) > 0.0 ? std::conj(ov) / std::abs(ov) : Complex{1.0};
  // ||a - e^{-i arg ov} b||² without cancellation in 2 - 2|ov|
  double sum = 0.0;
  for (const auto& [bits, amp] : a.entries()) sum += std::norm(amp - phase * b.amplitude(bits));
  for (const auto& [bits, amp] : b.entries()) {
    if (!a.entries().contains(bits)) sum += std::norm(amp);
  }
  return sum;
}

FdEstimate qfi_bures_fd(const ParametrizedState& state, double omega, double delta) {
  if (delta < 0.0) throw DomainError("finite-difference step must be positive");
  const double h = delta > 0.0 ? delta : default_fd_step(omega);
  const FockVector centre = state.at(omega);
  require_normalized(centre, "state");
  auto stencil = [&](double d) {
    const FockVector plus = state.at(omega + d);
    const FockVector minus = state.at(omega - d);
    require_normalized(plus, "state");
    require_normalized(minus, "state");
    return 2.0 * (bures_distance_squared(centre, plus) + bures_distance_squared(centre, minus)) /
           (d * d);
  };
  const double coarse = stencil(h);
  const double fine = stencil(0.5 * h);
  const double refined = (4.0 * fine - coarse) / 3.0;
  return {std::max(0.0, refined), std::abs(refined - fine)};
}

double qfi_unitary_variance(const OperatorAction& generator, const FockVector& psi0) {
  return clip(4.0 * variance(generator, psi0));
}

double qfi_chain(const OperatorAction& gen_h, const OperatorAction& gen_u,
                 const FockVector& psi0, const FockVector& phi, const FockVector& phi_dot) {
  require_normalized(psi0, "reference state");
  require_normalized(phi, "intermediate state");
  const double var_h = variance(gen_h, psi0);
  const double var_u = variance(gen_u, phi);
  const FockVector u_phi = gen_u(phi);
  const double cross = inner_product(phi_dot, u_phi).imag();
  const double mean_u = inner_product(phi, u_phi).real();
  const double mean_h = expectation(gen_h, psi0).real();
  return clip(4.0 * (var_h + var_u - 2.0 * cross - 2.0 * mean_u * mean_h));
}

double qfi_basis_state(const Occupation& n, const QuadraticGenerator& gen) {
  if (gen.modes() != n.modes()) throw DomainError("generator and state differ in modes");
  double sum = 0.0;
  for (int k = 0; k < n.modes(); ++k) {
    for (int l = k + 1; l < n.modes(); ++l) {
      sum += std::norm(gen.coefficient(k, l, n.occupied(k) != n.occupied(l)));
    }
  }
  return 4.0 * sum;
}

// --------------------------------------------------------------- EvolutionSpec

EvolutionSpec EvolutionSpec::from_mode_energies(FockVector coefficients, double time,
                                                Eigen::VectorXd mode_energy,
                                                Eigen::VectorXd mode_energy_rate) {
  EvolutionSpec s;
  s.coefficients = std::move(coefficients);
  s.time = time;
  s.mode_energy = std::move(mode_energy);
  s.mode_energy_rate = std::move(mode_energy_rate);
  return s;
}

namespace {

double additive(const Eigen::VectorXd& eps, std::uint64_t bits) {
  double e = 0.0;
  for (Eigen::Index k = 0; k < eps.size(); ++k) {
    if ((bits >> k) & 1U) e += eps(k);
  }
  return e;
}

double lookup(const std::map<std::uint64_t, double>& table,
              const std::optional<Eigen::VectorXd>& modes, std::uint64_t bits,
              const char* what) {
  if (auto it = table.find(bits); it != table.end()) return it->second;
  if (modes) return additive(*modes, bits);
  throw DomainError(std::string("no ") + what + " given for a populated basis state");
}

}  // namespace

double EvolutionSpec::energy_of(std::uint64_t bits) const {
  return lookup(energy, mode_energy, bits, "energy");
}

double EvolutionSpec::rate_of(std::uint64_t bits) const {
  return lookup(energy_rate, mode_energy_rate, bits, "energy rate");
}

void EvolutionSpec::validate() const {
  require_normalized(coefficients, "initial state");
  for (const auto* v : {&mode_energy, &mode_energy_rate}) {
    if (*v && (*v)->size() != coefficients.modes()) {
      throw DomainError("single-particle data must have one entry per mode");
    }
  }
  for (const auto& [bits, amp] : coefficients.entries()) {
    const double e = energy_of(bits);
    const double r = rate_of(bits);
    if (mode_energy && std::abs(e - additive(*mode_energy, bits)) > 1e-9 * std::max(1.0, std::abs(e))) {
      throw DomainError("E_n is not additive over the single-particle energies");
    }
    if (mode_energy_rate &&
        std::abs(r - additive(*mode_energy_rate, bits)) > 1e-9 * std::max(1.0, std::abs(r))) {
      throw DomainError("Ė_n is not additive over the single-particle rates");
    }
  }
}

FockVector EvolutionSpec::evolved() const {
  FockVector phi(coefficients.modes());
  for (const auto& [bits, amp] : coefficients.entries()) {
    phi.accumulate(bits, amp * std::exp(-kI * energy_of(bits) * time));
  }
  return phi;
}

double qfi_hamiltonian_evolution(const EvolutionSpec& spec, const QuadraticGenerator& gen) {
  spec.validate();
  const FockVector phi = spec.evolved();
  FockVector v = apply_quadratic_generator(gen, phi);
  v *= Complex(-1.0);
  for (const auto& [bits, amp] : phi.entries()) {
    v.accumulate(bits, spec.rate_of(bits) * spec.time * amp);
  }
  const Complex mean = inner_product(phi, v);
  const double second = inner_product(v, v).real();
  if (std::abs(mean.imag()) > 1e-9 * std::max(1.0, std::sqrt(second))) {
    throw NumericError("imaginary mean of Ė t - ℋ: generator is not Hermitian");
  }
  return clip(4.0 * (second - mean.real() * mean.real()));
}

double general_state_variance(const EvolutionSpec& spec, const QuadraticGenerator& gen) {
  spec.validate();
  const int m = spec.coefficients.modes();
  if (gen.modes() != m) throw DomainError("generator and state differ in modes");
  const FockVector phi = spec.evolved();

  std::set<std::uint64_t> support;
  for (const auto& [bits, amp] : phi.entries()) {
    support.insert(bits);
    for (int k = 0; k < m; ++k) {
      for (int l = k + 1; l < m; ++l) {
        support.insert(bits ^ (std::uint64_t{1} << k) ^ (std::uint64_t{1} << l));
      }
    }
  }

  double first = 0.0;
  double mean = 0.0;
  for (const std::uint64_t n : support) {
    Complex h{};
    for (int k = 0; k < m; ++k) {
      const bool nk = (n >> k) & 1U;
      for (int l = k + 1; l < m; ++l) {
        const bool nl = (n >> l) & 1U;
        const Complex source =
            phi.amplitude(n ^ (std::uint64_t{1} << k) ^ (std::uint64_t{1} << l));
        if (source == Complex{}) continue;
        h += static_cast<double>(string_sign(n, k, l)) * gen.coefficient(k, l, nk != nl) * source;
      }
    }
    h *= kI;
    const Complex c = phi.amplitude(n);
    const double et = c == Complex{} ? 0.0 : spec.rate_of(n) * spec.time;
    first += std::norm(et * c - h);
    mean += et * std::norm(c) - (std::conj(c) * h).real();
  }
  return std::max(0.0, first - mean * mean);
}

double qfi_mixed_diagonal(const Eigen::VectorXd& p, const Eigen::VectorXd& p_dot,
                          const CMatrix& cross) {
  const Eigen::Index r = p.size();
  if (p_dot.size() != r || cross.rows() != r || cross.cols() != r) {
    throw DomainError("mixed-state inputs have inconsistent sizes");
  }
  if ((p.array() < 0.0).any()) throw DomainError("probabilities must be non-negative");
  if (std::abs(p.sum() - 1.0) > 1e-9) throw DomainError("probabilities must sum to 1");
  double classical = 0.0;
  for (Eigen::Index i = 0; i < r; ++i) {
    if (p(i) >= kMixedThreshold) classical += p_dot(i) * p_dot(i) / p(i);
  }
  double quantum = 0.0;
  for (Eigen::Index n = 0; n < r; ++n) {
    for (Eigen::Index k = 0; k < r; ++k) {
      const double s = p(n) + p(k);
      if (s < kMixedThreshold) continue;
      const double d = p(n) - p(k);
      quantum += d * d / s * std::norm(cross(n, k));
    }
  }
  return clip(classical + 2.0 * quantum);
}

}  // namespace fqfi
