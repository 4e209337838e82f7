#include "totient/numcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <utility>

namespace totient {

namespace {

// Uniform in [0, bound) up to a 2^-64 bias.
Natural random_below(const Natural& bound, std::mt19937_64& rng) {
  std::vector<std::uint64_t> words(mpz_size(bound.get_mpz_t()) + 1);
  for (auto& w : words) w = rng();
  Natural r;
  mpz_import(r.get_mpz_t(), words.size(), -1, sizeof(std::uint64_t), 0, 0, words.data());
  return r % bound;
}

using u64 = std::uint64_t;
__extension__ typedef unsigned __int128 u128;

constexpr u64 kSmallPrimeLimit = 1u << 16;
// Trial division bound used inside is_prime before any modular exponentiation.
constexpr u64 kPrimalityTrialLimit = 1000;

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kSmallPrimeLimit, false);
    std::vector<std::uint32_t> out;
    for (u64 i = 2; i < kSmallPrimeLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(static_cast<std::uint32_t>(i));
      for (u64 j = i * i; j < kSmallPrimeLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool strong_probable_prime_u64(u64 n, u64 a) {
  a %= n;
  if (a == 0) return true;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

bool strong_probable_prime(const Natural& n, const Natural& a) {
  Natural d = n - 1;
  const mp_bitcnt_t s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  Natural x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  const Natural n_minus_1 = n - 1;
  if (x == 1 || x == n_minus_1) return true;
  for (mp_bitcnt_t r = 1; r < s; ++r) {
    mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

Natural mod_nonneg(const Natural& x, const Natural& n) {
  Natural r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
  return r;
}

Natural half_mod(Natural x, const Natural& n) {
  if (mpz_odd_p(x.get_mpz_t())) x += n;
  mpz_fdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), 1);
  return x;
}

// Strong Lucas probable-prime test with Selfridge parameters (P = 1).
// n odd, > 2^64, not a perfect square.
bool strong_lucas_probable_prime(const Natural& n) {
  long D = 5;
  for (;;) {
    Natural d_val = D;
    const int j = mpz_jacobi(d_val.get_mpz_t(), n.get_mpz_t());
    if (j == -1) break;
    if (j == 0) return false;  // |D| < n shares a factor with n
    D = D > 0 ? -(D + 2) : -D + 2;
  }
  const Natural big_d = D;
  const Natural q = mod_nonneg(Natural((1 - D) / 4), n);

  Natural k = n + 1;
  const mp_bitcnt_t s = mpz_scan1(k.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(k.get_mpz_t(), k.get_mpz_t(), s);

  Natural u = 1;
  Natural v = 1;
  Natural qk = q;
  const std::size_t bits = mpz_sizeinbase(k.get_mpz_t(), 2);
  for (std::size_t i = bits - 1; i-- > 0;) {
    u = mod_nonneg(u * v, n);
    v = mod_nonneg(v * v - 2 * qk, n);
    qk = mod_nonneg(qk * qk, n);
    if (mpz_tstbit(k.get_mpz_t(), i)) {
      Natural tu = mod_nonneg(u + v, n);
      Natural tv = mod_nonneg(big_d * u + v, n);
      u = half_mod(std::move(tu), n);
      v = half_mod(std::move(tv), n);
      qk = mod_nonneg(qk * q, n);
    }
  }
  if (u == 0 || v == 0) return true;
  for (mp_bitcnt_t r = 1; r < s; ++r) {
    v = mod_nonneg(v * v - 2 * qk, n);
    if (v == 0) return true;
    qk = mod_nonneg(qk * qk, n);
  }
  return false;
}

// --- factoring -------------------------------------------------------------

struct WorkMeter {
  u64 cap;
  u64 used = 0;

  void charge(u64 steps) {
    used += steps;
    if (used > cap) {
      throw BudgetExceeded("factorization work cap of " + std::to_string(cap) +
                           " rho iterations exceeded");
    }
  }
};

u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

u64 absdiff(u64 a, u64 b) { return a > b ? a - b : b - a; }

// Brent's cycle detection with batched gcds. Returns a nontrivial factor of
// the odd composite n.
u64 brent_rho_u64(u64 n, std::mt19937_64& rng, WorkMeter& meter) {
  constexpr u64 kBatch = 128;
  std::uniform_int_distribution<u64> pick(1, n - 1);
  for (;;) {
    const u64 c = pick(rng);
    auto f = [&](u64 x) { return static_cast<u64>((static_cast<u128>(x) * x + c) % n); };
    u64 y = pick(rng);
    u64 x = y;
    u64 ys = y;
    u64 g = 1;
    u64 q = 1;
    for (u64 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += kBatch) {
        ys = y;
        const u64 steps = std::min(kBatch, r - k);
        for (u64 i = 0; i < steps; ++i) {
          y = f(y);
          q = mulmod(q, absdiff(x, y), n);
        }
        meter.charge(steps);
        g = gcd_u64(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd_u64(absdiff(x, ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_odd_u64(u64 n, std::vector<u64>& out, std::mt19937_64& rng,
                    WorkMeter& meter) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = brent_rho_u64(n, rng, meter);
  factor_odd_u64(d, out, rng, meter);
  factor_odd_u64(n / d, out, rng, meter);
}

Natural brent_rho(const Natural& n, std::mt19937_64& rng, WorkMeter& meter) {
  constexpr u64 kBatch = 128;
  for (;;) {
    const Natural c = random_below(n - 1, rng) + 1;
    auto f = [&](const Natural& x) { return mod_nonneg(x * x + c, n); };
    Natural y = random_below(n, rng);
    Natural x = y;
    Natural ys = y;
    Natural g = 1;
    Natural q = 1;
    Natural diff;
    for (u64 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += kBatch) {
        ys = y;
        const u64 steps = std::min(kBatch, r - k);
        for (u64 i = 0; i < steps; ++i) {
          y = f(y);
          diff = x - y;
          q = mod_nonneg(q * diff, n);
        }
        meter.charge(steps);
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        diff = x - ys;
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_big(const Natural& n, std::vector<Natural>& out,
                std::mt19937_64& rng, WorkMeter& meter) {
  if (n == 1) return;
  if (fits_u64(n)) {
    std::vector<u64> parts;
    factor_odd_u64(to_u64(n), parts, rng, meter);
    for (u64 p : parts) out.push_back(from_u64(p));
    return;
  }
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  // Rho struggles on exact powers; peel them off first.
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (unsigned long k = 2; k <= bits; ++k) {
    Natural root;
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
      std::vector<Natural> inner;
      factor_big(root, inner, rng, meter);
      for (unsigned long i = 0; i < k; ++i) out.insert(out.end(), inner.begin(), inner.end());
      return;
    }
  }
  const Natural d = brent_rho(n, rng, meter);
  factor_big(d, out, rng, meter);
  factor_big(Natural(n / d), out, rng, meter);
}

template <class Int>
std::vector<PrimePower> collect(std::vector<Int> primes) {
  std::sort(primes.begin(), primes.end());
  std::vector<PrimePower> entries;
  for (const Int& p : primes) {
    Natural np;
    if constexpr (std::is_same_v<Int, Natural>) {
      np = p;
    } else {
      np = from_u64(p);
    }
    if (!entries.empty() && entries.back().prime == np) {
      ++entries.back().exponent;
    } else {
      entries.push_back({std::move(np), 1});
    }
  }
  return entries;
}

}  // namespace

// ---------------------------------------------------------------------------

Natural parse_natural(std::string_view text) {
  if (text.empty()) throw ParseError("empty integer");
  for (char c : text) {
    if (c < '0' || c > '9') {
      throw ParseError("malformed integer '" + std::string(text) + "'");
    }
  }
  return Natural(std::string(text), 10);
}

std::string to_decimal(const Natural& n) { return n.get_str(10); }

bool fits_u64(const Natural& n) {
  static_assert(sizeof(unsigned long) == 8, "64-bit unsigned long required");
  return sgn(n) >= 0 && mpz_fits_ulong_p(n.get_mpz_t());
}

std::uint64_t to_u64(const Natural& n) {
  if (!fits_u64(n)) throw std::out_of_range("value does not fit in 64 bits");
  return n.get_ui();
}

Natural from_u64(std::uint64_t v) { return Natural(static_cast<unsigned long>(v)); }

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % p == 0) return n == p;
  }
  if (n < 37 * 37) return true;
  // Deterministic witness set for all n < 2^64.
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL,
                1795265022ULL}) {
    if (!strong_probable_prime_u64(n, a)) return false;
  }
  return true;
}

bool is_prime(const Natural& n, unsigned rounds, std::uint64_t seed) {
  if (sgn(n) <= 0) return false;
  if (fits_u64(n)) return is_prime_u64(to_u64(n));
  if (mpz_even_p(n.get_mpz_t())) return false;
  for (std::uint32_t p : small_primes()) {
    if (p > kPrimalityTrialLimit) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  if (!strong_probable_prime(n, Natural(2))) return false;
  if (rounds > 1) {
    std::mt19937_64 rng(seed);
    const Natural span = n - 3;  // bases in [2, n-2]
    for (unsigned i = 1; i < rounds; ++i) {
      if (!strong_probable_prime(n, random_below(span, rng) + 2)) return false;
    }
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) return false;
  return strong_lucas_probable_prime(n);
}

unsigned search_rounds(std::size_t bits) {
  // Average-case bound for t random bases on k-bit odd candidates, valid for
  // k >= 21 and t <= k/9: k^1.5 · 2^t · t^-0.5 · 4^(2 − sqrt(t·k)).
  if (bits < 64) return 64;
  const double k = static_cast<double>(bits);
  for (unsigned t = 1; t <= 63 && t <= k / 9; ++t) {
    const double log2_bound = 1.5 * std::log2(k) + t - 0.5 * std::log2(t) +
                              2.0 * (2.0 - std::sqrt(t * k));
    if (log2_bound < -128.0) return t + 1;
  }
  return 64;
}

// ---------------------------------------------------------------------------

bool is_valid_factorization(std::span<const PrimePower> entries) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].exponent == 0) return false;
    if (i > 0 && !(entries[i - 1].prime < entries[i].prime)) return false;
    if (!is_prime(entries[i].prime)) return false;
  }
  return true;
}

Factorization::Factorization(std::vector<PrimePower> entries) : entries_(std::move(entries)) {
  if (!is_valid_factorization(entries_)) {
    throw std::invalid_argument("invalid factorization '" +
                                format_factorization(entries_) + "'");
  }
}

Factorization Factorization::assume_valid(std::vector<PrimePower> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
  Factorization f;
  for (auto& e : entries) {
    if (e.exponent == 0) continue;
    if (!f.entries_.empty() && f.entries_.back().prime == e.prime) {
      f.entries_.back().exponent += e.exponent;
    } else {
      f.entries_.push_back(std::move(e));
    }
  }
  return f;
}

Factorization Factorization::product(const Factorization& a, const Factorization& b) {
  std::vector<PrimePower> merged(a.entries_.begin(), a.entries_.end());
  merged.insert(merged.end(), b.entries_.begin(), b.entries_.end());
  return assume_valid(std::move(merged));
}

Natural Factorization::value() const {
  Natural v = 1;
  Natural pw;
  for (const auto& e : entries_) {
    mpz_pow_ui(pw.get_mpz_t(), e.prime.get_mpz_t(), e.exponent);
    v *= pw;
  }
  return v;
}

std::uint64_t Factorization::divisor_count() const {
  u64 count = 1;
  for (const auto& e : entries_) {
    const u64 factor = u64{e.exponent} + 1;
    if (count > std::numeric_limits<u64>::max() / factor) {
      return std::numeric_limits<u64>::max();
    }
    count *= factor;
  }
  return count;
}

std::vector<PrimePower> parse_factorization(std::string_view text) {
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("malformed factorization '" + std::string(text) + "': " + why);
  };
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  auto read_digits = [&]() -> std::string_view {
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    return text.substr(start, pos - start);
  };

  std::vector<PrimePower> entries;
  skip_ws();
  for (;;) {
    const std::string_view base = read_digits();
    if (base.empty()) throw fail("expected a decimal base at offset " + std::to_string(pos));
    PrimePower pp{parse_natural(base), 1};
    skip_ws();
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      skip_ws();
      const std::string_view exp = read_digits();
      if (exp.empty()) throw fail("expected an exponent after '^'");
      const Natural e = parse_natural(exp);
      if (!mpz_fits_uint_p(e.get_mpz_t())) throw fail("exponent too large");
      pp.exponent = static_cast<unsigned>(e.get_ui());
      skip_ws();
    }
    entries.push_back(std::move(pp));
    if (pos == text.size()) break;
    if (text[pos] != '*') throw fail(std::string("unexpected character '") + text[pos] + "'");
    ++pos;
    skip_ws();
  }
  if (entries.size() == 1 && entries[0].prime == 1 && entries[0].exponent == 1) {
    entries.clear();
  }
  return entries;
}

std::string format_factorization(std::span<const PrimePower> entries) {
  if (entries.empty()) return "1";
  std::string out;
  for (const auto& e : entries) {
    if (!out.empty()) out += " * ";
    out += to_decimal(e.prime);
    if (e.exponent != 1) {
      out += '^';
      out += std::to_string(e.exponent);
    }
  }
  return out;
}

Factorization factorize_u64(std::uint64_t n, const FactorConfig& config) {
  if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
  std::vector<u64> primes;
  for (std::uint32_t p : small_primes()) {
    if (u64{p} * p > n) break;
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  if (n > 1) {
    WorkMeter meter{config.work_cap};
    std::mt19937_64 rng(config.seed);
    factor_odd_u64(n, primes, rng, meter);
  }
  return Factorization::assume_valid(collect(std::move(primes)));
}

Factorization factorize(const Natural& n, const FactorConfig& config) {
  if (sgn(n) <= 0) throw std::invalid_argument("factorize: n must be >= 1");
  if (fits_u64(n)) return factorize_u64(to_u64(n), config);

  std::vector<Natural> primes;
  Natural rest = n;
  for (std::uint32_t p : small_primes()) {
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      primes.push_back(Natural(p));
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
    }
  }
  WorkMeter meter{config.work_cap};
  std::mt19937_64 rng(config.seed);
  factor_big(rest, primes, rng, meter);
  return Factorization::assume_valid(collect(std::move(primes)));
}

// ---------------------------------------------------------------------------

std::vector<Natural> divisors(const Factorization& f) {
  std::vector<Natural> out{Natural(1)};
  out.reserve(static_cast<std::size_t>(std::min<u64>(f.divisor_count(), 1u << 20)));
  for (const auto& e : f.entries()) {
    const std::size_t base_count = out.size();
    Natural pw = 1;
    for (unsigned a = 1; a <= e.exponent; ++a) {
      pw *= e.prime;
      for (std::size_t i = 0; i < base_count; ++i) out.push_back(out[i] * pw);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> divisors_u64(const Factorization& f) {
  if (!fits_u64(f.value())) throw std::invalid_argument("divisors_u64: value exceeds 64 bits");
  std::vector<u64> out{1};
  out.reserve(f.divisor_count());
  for (const auto& e : f.entries()) {
    const u64 p = to_u64(e.prime);
    const std::size_t base_count = out.size();
    u64 pw = 1;
    for (unsigned a = 1; a <= e.exponent; ++a) {
      pw *= p;
      for (std::size_t i = 0; i < base_count; ++i) out.push_back(out[i] * pw);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Natural euler_phi(std::span<const PrimePower> entries) {
  Natural phi = 1;
  Natural pw;
  for (const auto& e : entries) {
    mpz_pow_ui(pw.get_mpz_t(), e.prime.get_mpz_t(), e.exponent - 1);
    phi *= pw;
    phi *= e.prime - 1;
  }
  return phi;
}

Natural euler_phi(const Factorization& f) { return euler_phi(f.entries()); }

Residue crt_combine(std::span<const Residue> residues) {
  Residue acc{Natural(0), Natural(1)};
  Natural g;
  Natural inv;
  for (const auto& r : residues) {
    if (sgn(r.modulus) <= 0) throw std::invalid_argument("crt_combine: modulus must be positive");
    mpz_gcd(g.get_mpz_t(), acc.modulus.get_mpz_t(), r.modulus.get_mpz_t());
    if (g != 1) {
      throw std::invalid_argument("crt_combine: modulus " + to_decimal(r.modulus) +
                                  " is not coprime to the others");
    }
    const Natural a = mod_nonneg(r.value, r.modulus);
    if (r.modulus == 1) continue;
    // acc.value + acc.modulus * t ≡ a (mod r.modulus)
    mpz_invert(inv.get_mpz_t(), acc.modulus.get_mpz_t(), r.modulus.get_mpz_t());
    const Natural t = mod_nonneg((a - acc.value) * inv, r.modulus);
    acc.value += acc.modulus * t;
    acc.modulus *= r.modulus;
  }
  return acc;
}

}  // namespace totient
