#pragma once

#include "fermi_qfi/fock.hpp"
#include "fermi_qfi/linalg.hpp"

namespace fqfi {

/// c_i^† = a_j^† U_ji + a_j V_ji, c_i = a_j U*_ji + a_j^† V*_ji.
struct BogoliubovMap {
  CMatrix U;
  CMatrix V;

  static BogoliubovMap identity(int modes);
  /// Splits a 2M x 2M matrix [[U, V*], [V, U*]] into its U and V blocks.
  static BogoliubovMap from_w(const CMatrix& w);

  [[nodiscard]] int modes() const { return static_cast<int>(U.rows()); }
  /// W = [[U, V*], [V, U*]]
  [[nodiscard]] CMatrix assemble_w() const;
};

inline constexpr double kBogoliubovTolerance = 1e-10;

struct ValidationReport {
  double norm_residual = 0.0;        // max |U†U + V†V - Id|
  double pair_residual = 0.0;        // max |UᵗV + VᵗU|
  double unitarity_residual = 0.0;   // max |W†W - Id|
  bool ok = false;
};

ValidationReport validate(const BogoliubovMap& map);

/// Ξ = [[0, Id], [Id, 0]]
CMatrix xi_matrix(int modes);

struct GeneratorMatrix {
  CMatrix S;
  /// iS real, equivalently [S, Ξ] = 0.
  bool commuting = false;
};

/// W = exp(i S Ξ) with the principal logarithm.  Throws BranchCutError when W
/// has an eigenvalue at -1.
GeneratorMatrix generator_matrix(const BogoliubovMap& map);

/// T = det_root * exp(Ẑ) exp(Ŷ) exp(X̂) with
///   X̂ = ½ Σ X_ij a_i a_j,  X = U*⁻¹ V
///   Ŷ = Σ Y_ij a_i^† a_j,  exp(-Y) = U†
///   Ẑ = ½ Σ Z_ij a_i^† a_j^†,  Z = V* U*⁻¹
/// and det_root the principal square root of det U†.  The global phase of T
/// is fixed by that branch and never enters a QFI.
struct CanonicalFactors {
  CMatrix X;
  CMatrix Y;
  CMatrix Z;
  Complex det_root;
};

/// Throws DomainError when |det U| <= 1e-12.
CanonicalFactors canonical_decomposition(const BogoliubovMap& map);

/// <vac|T|vac>
Complex vacuum_overlap(const BogoliubovMap& map);

/// R_kl = <vac| a_k T a_l^† |vac> = det_root * (U†)⁻¹.  Equals U when V = 0 and det U = 1.
CMatrix one_particle_overlaps(const BogoliubovMap& map);

inline constexpr int kMaxDenseModes = 12;

/// Dense Fock-space matrices of the three canonical pieces.
CMatrix one_body_operator(int modes, const CMatrix& y);
CMatrix pair_annihilation_operator(int modes, const CMatrix& x);
CMatrix pair_creation_operator(int modes, const CMatrix& z);

/// Dense 2^M x 2^M representation of T (M <= 12).
CMatrix many_body_unitary(const BogoliubovMap& map);

/// Quadratic generator from the derivatives (U̇, V̇) at the reference point.
/// Both inputs must be antisymmetric within 1e-10.
QuadraticGenerator quadratic_generator_from_derivative(const RMatrix& u_dot,
                                                       const RMatrix& v_dot);

/// ∫_0^1 exp(-isSΞ) Ṡ exp(isΞS) ds by Gauss–Legendre quadrature.
CMatrix omega_tilde_numeric(const CMatrix& s, const CMatrix& s_dot, int order = 32);

/// K = [[U̇, V̇*], [V̇, U̇*]]
CMatrix flow_matrix(const QuadraticGenerator& gen);

/// W(s) = exp(sK).  For real antisymmetric U̇, V̇ this is a real orthogonal
/// Bogoliubov map whose derivative at s = 0 is (U̇, V̇).
BogoliubovMap bogoliubov_flow(const QuadraticGenerator& gen, double s);

}  // namespace fqfi
