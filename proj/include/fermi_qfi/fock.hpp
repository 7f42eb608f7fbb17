#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fermi_qfi/linalg.hpp"

namespace fqfi {

/// Largest mode count for operations that touch all 2^M Fock states.
inline constexpr int kMaxFullModes = 24;
/// Largest mode count an occupation word can hold.
inline constexpr int kMaxModes = 64;
/// Amplitudes below this magnitude are dropped after arithmetic.
inline constexpr double kPruneTolerance = 1e-15;
/// Tolerance on <psi|psi> = 1 for states entering variances and QFIs.
inline constexpr double kNormTolerance = 1e-9;

/// Fermionic occupation-number basis ket |n_0 n_1 ... n_{M-1}>.
///
/// Mode k is bit k of the word (mode 0 is the least significant bit and the
/// leftmost entry of the Jordan–Wigner string).  Printed left to right
/// starting from mode 0, so "10" has mode 0 occupied.
class Occupation {
 public:
  Occupation(int modes, std::uint64_t bits);

  static Occupation from_string(std::string_view text);
  static Occupation vacuum(int modes) { return {modes, 0}; }
  static Occupation filled(int modes);

  [[nodiscard]] int modes() const { return modes_; }
  [[nodiscard]] std::uint64_t bits() const { return bits_; }
  [[nodiscard]] bool occupied(int k) const { return (bits_ >> k) & 1U; }
  [[nodiscard]] int particles() const;
  /// Parity of the number of occupied modes j < k, as a sign (+1 / -1).
  [[nodiscard]] int string_sign(int k) const;
  [[nodiscard]] Occupation flipped(int k) const;
  [[nodiscard]] std::string to_string() const;

  auto operator<=>(const Occupation&) const = default;

 private:
  int modes_;
  std::uint64_t bits_;
};

enum class Ladder { create, annihilate };

/// k < l always; hop_kl = a_k^† a_l, hop_lk = a_l^† a_k,
/// pair_create = a_k^† a_l^†, pair_annihilate = a_k a_l.
enum class Bilinear { hop_kl, hop_lk, pair_create, pair_annihilate };

struct SignedState {
  int sign;
  Occupation state;
};

/// All 2^M states (M <= 24) or the C(M, N) states of the N-particle sector,
/// ascending in the binary value of the occupation word.
std::vector<Occupation> enumerate_basis(int modes,
                                        std::optional<int> particles = std::nullopt);

/// Action of a single creation/annihilation operator; nullopt when Pauli forbids it.
std::optional<SignedState> apply_ladder(const Occupation& state, int k, Ladder kind);

/// Action of a_k^†a_l, a_l^†a_k, a_k^†a_l^† or a_k a_l for k < l.
std::optional<SignedState> apply_bilinear(const Occupation& state, int k, int l,
                                          Bilinear kind);

/// Sparse pure state over the Fock space of a fixed number of modes.
class FockVector {
 public:
  using Storage = std::map<std::uint64_t, Complex>;

  explicit FockVector(int modes);
  static FockVector basis(const Occupation& state, Complex amplitude = 1.0);
  /// Dense amplitudes indexed by occupation word; size must be 2^modes.
  static FockVector from_dense(int modes, const CVector& amplitudes);

  [[nodiscard]] int modes() const { return modes_; }
  [[nodiscard]] Complex amplitude(const Occupation& state) const;
  [[nodiscard]] Complex amplitude(std::uint64_t bits) const;
  [[nodiscard]] std::size_t size() const { return amps_.size(); }
  [[nodiscard]] const Storage& entries() const { return amps_; }
  [[nodiscard]] double norm_squared() const;
  [[nodiscard]] bool is_normalized(double tol = kNormTolerance) const;
  [[nodiscard]] CVector to_dense() const;

  /// Adds `value` to the amplitude of `state` (no pruning).
  void accumulate(std::uint64_t bits, Complex value);
  void accumulate(const Occupation& state, Complex value) {
    accumulate(state.bits(), value);
  }
  /// Drops amplitudes with magnitude below `tol`.
  void prune(double tol = kPruneTolerance);

  FockVector& operator+=(const FockVector& other);
  FockVector& operator-=(const FockVector& other);
  FockVector& operator*=(Complex factor);

  friend FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
  friend FockVector operator-(FockVector a, const FockVector& b) { return a -= b; }
  friend FockVector operator*(Complex s, FockVector v) { return v *= s; }
  friend FockVector operator*(FockVector v, Complex s) { return v *= s; }

 private:
  void require_same_modes(const FockVector& other) const;

  int modes_;
  Storage amps_;
};

/// <u|v>, conjugating u.
Complex inner_product(const FockVector& u, const FockVector& v);

/// Hermitian generator built from a one-body part (a_k^† a_l terms) and a
/// pairing part (a_k^† a_l^† terms):
///   H = -i sum_{k<l} [ A_kl (a_k^†a_l - a_l^†a_k) + P_kl (a_k^†a_l^† + a_k a_l) ].
/// Both matrices must be antisymmetric; H is Hermitian when they are real.
class QuadraticGenerator {
 public:
  QuadraticGenerator(CMatrix one_body, CMatrix pairing);
  static QuadraticGenerator zero(int modes);

  [[nodiscard]] int modes() const { return static_cast<int>(one_body_.rows()); }
  [[nodiscard]] const CMatrix& one_body() const { return one_body_; }
  [[nodiscard]] const CMatrix& pairing() const { return pairing_; }
  /// D^(d) with d = |n_k - n_l|: pairing for d = 0, one-body for d = 1.
  [[nodiscard]] Complex coefficient(int k, int l, bool occupations_differ) const {
    return occupations_differ ? one_body_(k, l) : pairing_(k, l);
  }
  [[nodiscard]] bool is_real(double tol = 1e-12) const;

 private:
  CMatrix one_body_;
  CMatrix pairing_;
};

/// H|v> with the sign-string rule for each doubly flipped ket.
FockVector apply_quadratic_generator(const QuadraticGenerator& gen, const FockVector& v);

using OperatorAction = std::function<FockVector(const FockVector&)>;

OperatorAction generator_action(QuadraticGenerator gen);
/// Action of a dense operator on the full 2^M Fock space.
OperatorAction matrix_action(CMatrix op);

/// <v|H|v>
Complex expectation(const OperatorAction& op, const FockVector& v);

/// <v|H^2|v> - <v|H|v>^2 for a Hermitian action and normalized v.
/// Throws DomainError for non-normalized v and NumericError when an imaginary
/// residue above 1e-9 (relative to the moment size) reveals a non-Hermitian action.
double variance(const OperatorAction& op, const FockVector& v);

/// Dense matrix of a single ladder operator on the 2^M Fock space.
CMatrix ladder_matrix(int modes, int k, Ladder kind);

}  // namespace fqfi
