#pragma once

// Arbitrary-precision substrate: primality, factoring, divisors, phi, CRT.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace totient {

/// Nonnegative integer of unbounded magnitude.
using Natural = mpz_class;

/// Raised when a configurable work cap is hit; the caller may retry with a
/// larger cap.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised on malformed textual input (integers, factorization strings).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Strict ASCII decimal, no sign, no whitespace.
Natural parse_natural(std::string_view text);
std::string to_decimal(const Natural& n);

bool fits_u64(const Natural& n);
std::uint64_t to_u64(const Natural& n);
Natural from_u64(std::uint64_t v);

// ---------------------------------------------------------------------------
// Primality
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kDefaultSeed = 0x5eed'7071'e17d'0001ULL;

/// Deterministic for n < 2^64. Above that: trial division, a base-2 strong
/// probable-prime test, `rounds - 1` further random bases drawn from `seed`,
/// and a strong Lucas test.
bool is_prime(const Natural& n, unsigned rounds = 64,
              std::uint64_t seed = kDefaultSeed);
bool is_prime_u64(std::uint64_t n);

/// `rounds` argument for is_prime on candidates produced by a search (not
/// adversarial input): random bases enough that the average-case error for
/// a random odd `bits`-bit candidate is below 2^-128. 64 below 64 bits.
unsigned search_rounds(std::size_t bits);

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

struct PrimePower {
  Natural prime;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Canonical prime power factorization: primes strictly increasing, each
/// passing is_prime, exponents positive. The empty factorization is 1.
class Factorization {
 public:
  Factorization() = default;

  /// Validates the invariants and throws std::invalid_argument if any fails.
  explicit Factorization(std::vector<PrimePower> entries);

  /// Skips the primality checks; for entries whose primes are already known
  /// to pass is_prime (e.g. built from tested factors). Ordering is still
  /// normalized.
  static Factorization assume_valid(std::vector<PrimePower> entries);

  /// Merges factorizations of coprime or overlapping values (exponents add).
  static Factorization product(const Factorization& a, const Factorization& b);

  [[nodiscard]] std::span<const PrimePower> entries() const { return entries_; }
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }

  [[nodiscard]] Natural value() const;
  /// τ(n) = ∏(α_i + 1); saturates at UINT64_MAX.
  [[nodiscard]] std::uint64_t divisor_count() const;

  friend bool operator==(const Factorization&, const Factorization&) = default;

 private:
  std::vector<PrimePower> entries_;
};

/// True iff the entries satisfy every Factorization invariant.
bool is_valid_factorization(std::span<const PrimePower> entries);

/// Text form `p1^a1 * p2^a2 * ...`; `^1` is optional on input and omitted on
/// output; `1` is the empty factorization. Parsing checks syntax only.
std::vector<PrimePower> parse_factorization(std::string_view text);
std::string format_factorization(std::span<const PrimePower> entries);
inline std::string format_factorization(const Factorization& f) {
  return format_factorization(f.entries());
}

struct FactorConfig {
  std::uint64_t seed = kDefaultSeed;
  /// Total rho iterations allowed across one factorize() call.
  std::uint64_t work_cap = std::uint64_t{1} << 28;
};

/// Trial division, then Brent-rho splitting on the cofactor, recursively.
/// Throws BudgetExceeded when config.work_cap is hit. Requires n >= 1.
Factorization factorize(const Natural& n, const FactorConfig& config = {});
Factorization factorize_u64(std::uint64_t n, const FactorConfig& config = {});

// ---------------------------------------------------------------------------
// Divisors, phi, CRT
// ---------------------------------------------------------------------------

/// All τ(n) divisors, strictly increasing.
std::vector<Natural> divisors(const Factorization& f);
/// Same, for values whose divisors fit in 64 bits.
std::vector<std::uint64_t> divisors_u64(const Factorization& f);

Natural euler_phi(const Factorization& f);
Natural euler_phi(std::span<const PrimePower> entries);

struct Residue {
  Natural value;
  Natural modulus;

  friend bool operator==(const Residue&, const Residue&) = default;
};

/// Unique x mod ∏m_i with x ≡ a_i (mod m_i). Throws std::invalid_argument if
/// two moduli share a factor or a modulus is zero.
Residue crt_combine(std::span<const Residue> residues);

}  // namespace totient
