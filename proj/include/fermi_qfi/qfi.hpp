#pragma once

#include <functional>
#include <map>
#include <optional>

#include "fermi_qfi/fock.hpp"

namespace fqfi {

/// One-parameter family of pure states.  When `derivative` is empty the
/// derivative falls back to a central difference with one Richardson step.
struct ParametrizedState {
  std::function<FockVector(double)> at;
  std::function<FockVector(double)> derivative;

  [[nodiscard]] FockVector derivative_at(double omega, double step = 0.0) const;
};

/// Default finite-difference step 1e-4 * max(1, |ω|).
double default_fd_step(double omega);

struct FdEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// 4(<ψ̇|ψ̇> - |<ψ̇|ψ>|²), clipped at 0.
double qfi_pure(const FockVector& psi, const FockVector& psi_dot);

/// d_B² = 2 - 2|<ψ|ψ'>| for pure states, evaluated as ||ψ - e^{-i arg<ψ|ψ'>} ψ'||².
double bures_distance_squared(const FockVector& a, const FockVector& b);

/// QFI from the Bures distance: symmetric stencil
///   I(δ) = 2 (d²(ω, ω+δ) + d²(ω, ω-δ)) / δ²
/// refined by one Richardson step with δ/2.  `error` is |refined - I(δ/2)|.
FdEstimate qfi_bures_fd(const ParametrizedState& state, double omega, double delta = 0.0);

/// 4 var(ℋ, ψ0)
double qfi_unitary_variance(const OperatorAction& generator, const FockVector& psi0);

/// QFI of Û T̂ ψ0 from ℋ = -iT̂†∂T̂, 𝒰 = -iÛ†∂Û, φ = T̂ψ0 and φ̇ = ∂T̂ ψ0:
///   4 [var(ℋ, ψ0) + var(𝒰, φ) - 2 Im<φ̇|𝒰|φ> - 2 <𝒰>_φ <ℋ>_ψ0].
double qfi_chain(const OperatorAction& gen_h, const OperatorAction& gen_u,
                 const FockVector& psi0, const FockVector& phi, const FockVector& phi_dot);

/// 4 Σ_{k<l} |D^{(|n_k - n_l|)}_kl|²
double qfi_basis_state(const Occupation& n, const QuadraticGenerator& gen);

/// Superposition ψ_n evolving under a non-interacting Hamiltonian for time t.
/// Energies E_n(ω0) and rates Ė_n(ω0) come either from explicit per-state maps
/// or from single-particle data (E_n = Σ ε_k n_k); when both are present the
/// maps must be additive over the single-particle values.
struct EvolutionSpec {
  FockVector coefficients{1};
  double time = 0.0;
  std::map<std::uint64_t, double> energy;
  std::map<std::uint64_t, double> energy_rate;
  std::optional<Eigen::VectorXd> mode_energy;
  std::optional<Eigen::VectorXd> mode_energy_rate;

  static EvolutionSpec from_mode_energies(FockVector coefficients, double time,
                                          Eigen::VectorXd mode_energy,
                                          Eigen::VectorXd mode_energy_rate);

  [[nodiscard]] double energy_of(std::uint64_t bits) const;
  [[nodiscard]] double rate_of(std::uint64_t bits) const;
  /// Normalization within 1e-9, energy data for every populated state, additivity.
  void validate() const;
  /// φ = Σ ψ_n e^{-i E_n t} |n>
  [[nodiscard]] FockVector evolved() const;
};

/// 4 var(Ė t - ℋ, φ) with ℋ applied through the sign-string action.
double qfi_hamiltonian_evolution(const EvolutionSpec& spec, const QuadraticGenerator& gen);

/// var(Ė t - ℋ, φ) = Σ |Ė_n t φ_n - h_n|² - (Σ Ė_n t |φ_n|² - Re φ_n* h_n)²
/// with h_n = i Σ_{k<l} (-1)^{Σ_{j=k}^{l-1} n_j} D_kl φ_{n with k,l flipped}.
double general_state_variance(const EvolutionSpec& spec, const QuadraticGenerator& gen);

/// Σ ṗ_r²/p_r + 2 Σ_{n,m} (p_n - p_m)²/(p_n + p_m) |<ψ_n|ψ̇_m>|²,
/// skipping p_r < 1e-14 and p_n + p_m < 1e-14.
double qfi_mixed_diagonal(const Eigen::VectorXd& p, const Eigen::VectorXd& p_dot,
                          const CMatrix& cross);

}  // namespace fqfi
