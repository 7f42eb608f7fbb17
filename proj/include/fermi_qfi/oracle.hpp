#pragma once

#include <optional>
#include <random>

#include "fermi_qfi/bogoliubov.hpp"
#include "fermi_qfi/fock.hpp"
#include "fermi_qfi/qfi.hpp"

// Independent reference constructions used by the verification suites and tests.
namespace fqfi::oracle {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);

RMatrix random_antisymmetric(Rng& rng, int modes, double scale = 1.0);
CMatrix random_hermitian(Rng& rng, Eigen::Index dim, double scale = 1.0);

/// Real antisymmetric (U̇, V̇); V̇ = 0 unless `pairing`.
QuadraticGenerator random_generator(Rng& rng, int modes, bool pairing, double scale = 1.0);

/// Random normalized state over all 2^M states, or over the N-particle sector.
FockVector random_state(Rng& rng, int modes, std::optional<int> particles = std::nullopt);

Occupation random_occupation(Rng& rng, int modes);

FockVector apply_dense(const CMatrix& op, const FockVector& v);

/// Dense matrix of -i Σ_{k<l} [A_kl (a_k^†a_l - a_l^†a_k) + P_kl (a_k^†a_l^† + a_k a_l)]
/// assembled term by term from apply_bilinear.
CMatrix generator_dense(const QuadraticGenerator& gen);

/// ω ↦ T(W0 exp(ωK)) ψ0 with K the flow matrix of `gen` (dense Fock oracle).
ParametrizedState bogoliubov_family(const BogoliubovMap& w0, const QuadraticGenerator& gen,
                                    const FockVector& psi0);

/// Random valid Bogoliubov map exp(K) of a random real generator.
BogoliubovMap random_map(Rng& rng, int modes, bool pairing, double scale);

/// Two-unitary family Û_ω T̂_ω ψ0 at ω0: T̂ a dense Bogoliubov unitary,
/// Û = exp(-i t (H0 + ω H1)) with random Hermitian H0, H1.
struct ChainInstance {
  double omega0 = 0.0;
  CMatrix gen_h;  // -i T†∂T
  CMatrix gen_u;  // -i Û†∂Û
  FockVector psi0{1};
  FockVector phi{1};
  FockVector phi_dot{1};
  ParametrizedState composed;
};

ChainInstance random_chain_instance(Rng& rng, int modes);

/// Superposition evolving under mode energies ε_k(ω) = ε_k + ε̇_k ω + ½ ε̈_k ω²
/// after the basis change T(exp(ωK)); reference point ω0 = 0.
struct EvolutionInstance {
  EvolutionSpec spec;
  QuadraticGenerator gen = QuadraticGenerator::zero(1);
  ParametrizedState family;
};

EvolutionInstance random_evolution_instance(Rng& rng, int modes, double time);

/// |a - ref| / max(|ref|, floor)
double relative_error(double a, double ref, double floor = 1e-300);

}  // namespace fqfi::oracle
