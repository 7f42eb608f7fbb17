#include "fermi_qfi/fock.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <utility>

#include "fermi_qfi/errors.hpp"

namespace fqfi {
namespace {

constexpr std::uint64_t kMaxSectorStates = std::uint64_t{1} << kMaxFullModes;

std::uint64_t low_mask(int k) {
  return k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
}

int parity_sign(std::uint64_t word) { return (std::popcount(word) & 1) ? -1 : 1; }

void check_mode(const Occupation& s, int k) {
  if (k < 0 || k >= s.modes()) {
    throw DomainError("mode index " + std::to_string(k) + " out of range for " +
                      std::to_string(s.modes()) + " modes");
  }
}

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    if (r > kMaxSectorStates) return r;
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------- Occupation

Occupation::Occupation(int modes, std::uint64_t bits) : modes_(modes), bits_(bits) {
  if (modes < 1 || modes > kMaxModes) {
    throw CapacityError("mode count must lie in [1, 64]");
  }
  if ((bits & ~low_mask(modes)) != 0) {
    throw DomainError("occupation word has bits beyond the mode count");
  }
}

Occupation Occupation::from_string(std::string_view text) {
  std::uint64_t bits = 0;
  for (std::size_t k = 0; k < text.size(); ++k) {
    if (text[k] == '1') {
      bits |= std::uint64_t{1} << k;
    } else if (text[k] != '0') {
      throw DomainError("occupation string must contain only 0 and 1");
    }
  }
  return {static_cast<int>(text.size()), bits};
}

Occupation Occupation::filled(int modes) { return {modes, low_mask(modes)}; }

int Occupation::particles() const { return std::popcount(bits_); }

int Occupation::string_sign(int k) const { return parity_sign(bits_ & low_mask(k)); }

Occupation Occupation::flipped(int k) const {
  check_mode(*this, k);
  return {modes_, bits_ ^ (std::uint64_t{1} << k)};
}

std::string Occupation::to_string() const {
  std::string out(modes_, '0');
  for (int k = 0; k < modes_; ++k) {
    if (occupied(k)) out[k] = '1';
  }
  return out;
}

// ------------------------------------------------------------- basis, ladders

std::vector<Occupation> enumerate_basis(int modes, std::optional<int> particles) {
  if (modes < 1) throw CapacityError("mode count must be at least 1");
  if (!particles) {
    if (modes > kMaxFullModes) {
      throw CapacityError("full Fock enumeration is limited to 24 modes");
    }
    std::vector<Occupation> out;
    out.reserve(std::size_t{1} << modes);
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << modes); ++b) out.emplace_back(modes, b);
    return out;
  }
  if (modes > kMaxModes) throw CapacityError("mode count must lie in [1, 64]");
  const int n = *particles;
  if (n < 0 || n > modes) throw DomainError("particle number out of range");
  if (binomial(modes, n) > kMaxSectorStates) {
    throw CapacityError("particle-number sector has more than 2^24 states");
  }
  std::vector<Occupation> out;
  if (n == 0) {
    out.emplace_back(modes, 0);
    return out;
  }
  // Gosper's hack walks the fixed-popcount words in ascending order.
  std::uint64_t word = low_mask(n);
  const std::uint64_t limit = modes == 64 ? 0 : (std::uint64_t{1} << modes);
  while (true) {
    out.emplace_back(modes, word);
    if (word == low_mask(modes) << (modes - n) || word == ~std::uint64_t{0}) break;
    const std::uint64_t c = word & (~word + 1);
    const std::uint64_t r = word + c;
    word = (((r ^ word) >> 2) / c) | r;
    if (limit != 0 && word >= limit) break;
  }
  return out;
}

std::optional<SignedState> apply_ladder(const Occupation& state, int k, Ladder kind) {
  check_mode(state, k);
  const bool occ = state.occupied(k);
  if ((kind == Ladder::create) == occ) return std::nullopt;
  return SignedState{state.string_sign(k), state.flipped(k)};
}

std::optional<SignedState> apply_bilinear(const Occupation& state, int k, int l,
                                          Bilinear kind) {
  check_mode(state, k);
  check_mode(state, l);
  if (k >= l) throw DomainError("apply_bilinear requires k < l");
  const bool nk = state.occupied(k);
  const bool nl = state.occupied(l);
  bool allowed = false;
  int extra = 1;
  switch (kind) {
    case Bilinear::hop_kl: allowed = !nk && nl; break;
    case Bilinear::hop_lk: allowed = nk && !nl; extra = -1; break;
    case Bilinear::pair_create: allowed = !nk && !nl; break;
    case Bilinear::pair_annihilate: allowed = nk && nl; break;
  }
  if (!allowed) return std::nullopt;
  const std::uint64_t between = state.bits() & low_mask(l) & ~low_mask(k);
  const std::uint64_t flip = (std::uint64_t{1} << k) | (std::uint64_t{1} << l);
  return SignedState{extra * parity_sign(between),
                     Occupation(state.modes(), state.bits() ^ flip)};
}

// ----------------------------------------------------------------- FockVector

FockVector::FockVector(int modes) : modes_(modes) {
  if (modes < 1 || modes > kMaxModes) throw CapacityError("mode count must lie in [1, 64]");
}

FockVector FockVector::basis(const Occupation& state, Complex amplitude) {
  FockVector v(state.modes());
  v.amps_[state.bits()] = amplitude;
  return v;
}

FockVector FockVector::from_dense(int modes, const CVector& amplitudes) {
  if (modes > kMaxFullModes) throw CapacityError("dense Fock vectors are limited to 24 modes");
  if (amplitudes.size() != (Eigen::Index{1} << modes)) {
    throw DomainError("dense amplitude vector must have 2^modes entries");
  }
  FockVector v(modes);
  for (Eigen::Index i = 0; i < amplitudes.size(); ++i) {
    if (std::abs(amplitudes(i)) >= kPruneTolerance) {
      v.amps_.emplace_hint(v.amps_.end(), static_cast<std::uint64_t>(i), amplitudes(i));
    }
  }
  return v;
}

Complex FockVector::amplitude(const Occupation& state) const {
  if (state.modes() != modes_) throw DomainError("occupation has the wrong mode count");
  return amplitude(state.bits());
}

Complex FockVector::amplitude(std::uint64_t bits) const {
  auto it = amps_.find(bits);
  return it == amps_.end() ? Complex{} : it->second;
}

double FockVector::norm_squared() const {
  double s = 0.0;
  for (const auto& [bits, a] : amps_) s += std::norm(a);
  return s;
}

bool FockVector::is_normalized(double tol) const {
  return std::abs(norm_squared() - 1.0) <= tol;
}

CVector FockVector::to_dense() const {
  if (modes_ > kMaxFullModes) throw CapacityError("dense Fock vectors are limited to 24 modes");
  CVector out = CVector::Zero(Eigen::Index{1} << modes_);
  for (const auto& [bits, a] : amps_) out(static_cast<Eigen::Index>(bits)) = a;
  return out;
}

void FockVector::accumulate(std::uint64_t bits, Complex value) { amps_[bits] += value; }

void FockVector::prune(double tol) {
  std::erase_if(amps_, [tol](const auto& kv) { return std::abs(kv.second) < tol; });
}

void FockVector::require_same_modes(const FockVector& other) const {
  if (other.modes_ != modes_) throw DomainError("Fock vectors have different mode counts");
}

FockVector& FockVector::operator+=(const FockVector& other) {
  require_same_modes(other);
  for (const auto& [bits, a] : other.amps_) amps_[bits] += a;
  prune();
  return *this;
}

FockVector& FockVector::operator-=(const FockVector& other) {
  require_same_modes(other);
  for (const auto& [bits, a] : other.amps_) amps_[bits] -= a;
  prune();
  return *this;
}

FockVector& FockVector::operator*=(Complex factor) {
  for (auto& [bits, a] : amps_) a *= factor;
  prune();
  return *this;
}

Complex inner_product(const FockVector& u, const FockVector& v) {
  if (u.modes() != v.modes()) throw DomainError("Fock vectors have different mode counts");
  const auto& small = u.size() <= v.size() ? u.entries() : v.entries();
  const auto& large = u.size() <= v.size() ? v.entries() : u.entries();
  const bool u_small = u.size() <= v.size();
  Complex s{};
  for (const auto& [bits, a] : small) {
    auto it = large.find(bits);
    if (it == large.end()) continue;
    s += u_small ? std::conj(a) * it->second : std::conj(it->second) * a;
  }
  return s;
}

// --------------------------------------------------------- QuadraticGenerator

QuadraticGenerator::QuadraticGenerator(CMatrix one_body, CMatrix pairing)
    : one_body_(std::move(one_body)), pairing_(std::move(pairing)) {
  const auto m = one_body_.rows();
  if (one_body_.cols() != m || pairing_.rows() != m || pairing_.cols() != m) {
    throw DomainError("generator matrices must be square and of equal size");
  }
  if (m < 1 || m > kMaxModes) throw CapacityError("mode count must lie in [1, 64]");
  if (antisymmetry_residual(one_body_) > 1e-10 || antisymmetry_residual(pairing_) > 1e-10) {
    throw DomainError("generator matrices must be antisymmetric");
  }
}

QuadraticGenerator QuadraticGenerator::zero(int modes) {
  return {CMatrix::Zero(modes, modes), CMatrix::Zero(modes, modes)};
}

bool QuadraticGenerator::is_real(double tol) const {
  return one_body_.imag().cwiseAbs().maxCoeff() <= tol &&
         pairing_.imag().cwiseAbs().maxCoeff() <= tol;
}

FockVector apply_quadratic_generator(const QuadraticGenerator& gen, const FockVector& v) {
  const int m = v.modes();
  if (gen.modes() != m) throw DomainError("generator and state have different mode counts");
  FockVector out(m);
  for (const auto& [bits, amp] : v.entries()) {
    for (int k = 0; k < m; ++k) {
      const bool nk = (bits >> k) & 1U;
      for (int l = k + 1; l < m; ++l) {
        const bool nl = (bits >> l) & 1U;
        const Complex d = gen.coefficient(k, l, nk != nl);
        if (d == Complex{}) continue;
        const std::uint64_t between = bits & low_mask(l) & ~low_mask(k);
        const std::uint64_t target = bits ^ (std::uint64_t{1} << k) ^ (std::uint64_t{1} << l);
        out.accumulate(target, -kI * static_cast<double>(parity_sign(between)) * d * amp);
      }
    }
  }
  out.prune();
  return out;
}

OperatorAction generator_action(QuadraticGenerator gen) {
  return [g = std::move(gen)](const FockVector& v) { return apply_quadratic_generator(g, v); };
}

OperatorAction matrix_action(CMatrix op) {
  return [m = std::move(op)](const FockVector& v) {
    if (m.rows() != (Eigen::Index{1} << v.modes()) || m.cols() != m.rows()) {
      throw DomainError("dense operator does not match the Fock dimension");
    }
    return FockVector::from_dense(v.modes(), m * v.to_dense());
  };
}

Complex expectation(const OperatorAction& op, const FockVector& v) {
  return inner_product(v, op(v));
}

double variance(const OperatorAction& op, const FockVector& v) {
  if (!v.is_normalized()) throw DomainError("variance requires a normalized state");
  const FockVector hv = op(v);
  const FockVector hhv = op(hv);
  const Complex m1 = inner_product(v, hv);
  const Complex m2 = inner_product(v, hhv);
  const double scale = std::max(1.0, std::abs(m2.real()));
  if (std::abs(m1.imag()) > 1e-9 * std::sqrt(scale) || std::abs(m2.imag()) > 1e-9 * scale) {
    std::ostringstream msg;
    msg << "imaginary residue in moments (" << m1.imag() << ", " << m2.imag()
        << "): operator is not Hermitian";
    throw NumericError(msg.str());
  }
  return m2.real() - m1.real() * m1.real();
}

CMatrix ladder_matrix(int modes, int k, Ladder kind) {
  if (modes > 14) throw CapacityError("dense ladder matrices are limited to 14 modes");
  const Eigen::Index dim = Eigen::Index{1} << modes;
  CMatrix out = CMatrix::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    if (auto r = apply_ladder(Occupation(modes, static_cast<std::uint64_t>(s)), k, kind)) {
      out(static_cast<Eigen::Index>(r->state.bits()), s) = r->sign;
    }
  }
  return out;
}

}  // namespace fqfi
