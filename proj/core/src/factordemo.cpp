#include "totient/factordemo.hpp"

#include <cmath>
#include <stdexcept>

#include "totient/inverter.hpp"

namespace totient::factordemo {

namespace {

Natural random_prime_bits(gmp_randclass& rng, unsigned bits) {
  const Natural low = Natural(1) << (bits - 1);
  for (;;) {
    Natural c = low + rng.get_z_bits(bits - 1);
    c |= 1;
    if (is_prime(c)) return c;
  }
}

double ln(const Natural& n) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

void require_semiprime(const Factorization& f) {
  const auto e = f.entries();
  if (e.size() != 2 || e[0].exponent != 1 || e[1].exponent != 1 || e[0].prime == 2) {
    throw std::invalid_argument("factor_via_inversion: n must be a product of two distinct odd primes");
  }
}

}  // namespace

SemiprimeInstance SemiprimeInstance::random(unsigned bits, std::uint64_t seed) {
  if (bits < 3) throw std::invalid_argument("SemiprimeInstance: bits must be >= 3");
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(static_cast<unsigned long>(seed));
  Natural p = random_prime_bits(rng, bits);
  Natural q;
  do {
    q = random_prime_bits(rng, bits);
  } while (q == p);
  return {p * q, std::move(p), std::move(q)};
}

KPairSampler::KPairSampler(const Natural& n, const OracleBudget& budget, std::uint64_t seed)
    : rng_(gmp_randinit_default), bound_(budget.k_range ? *budget.k_range : Natural(n * n * n)) {
  if (bound_ < 1) throw std::invalid_argument("KPairSampler: k range must be positive");
  rng_.seed(static_cast<unsigned long>(seed));
}

std::pair<Natural, Natural> KPairSampler::next() {
  Natural k1 = rng_.get_z_range(bound_) + 1;
  Natural k2 = rng_.get_z_range(bound_) + 1;
  return {std::move(k1), std::move(k2)};
}

std::pair<Natural, Natural> sample_k_pair(const Natural& n, const OracleBudget& budget,
                                          std::uint64_t seed) {
  return KPairSampler(n, budget, seed).next();
}

Target target(const Natural& n, const Natural& k1, const Natural& k2,
              const FactorConfig& factoring, const std::optional<Factorization>& n_factorization) {
  const Natural a = 2 * k1 + 1;
  const Natural b = 2 * k2 + 1;
  Target t;
  t.value = 4 * a * b * n;
  t.known_part = Factorization::product(
      Factorization::product(Factorization::assume_valid({{Natural(2), 2}}), factorize(a, factoring)),
      factorize(b, factoring));
  t.cofactor = n;
  if (n_factorization) t.full = Factorization::product(t.known_part, *n_factorization);
  return t;
}

std::optional<std::pair<Natural, Natural>> recover_factors(const Natural& m, const Natural& n,
                                                           const Natural& k1, const Natural& k2) {
  const Natural a = 2 * k1 + 1;
  const Natural b = 2 * k2 + 1;
  const Natural abn = a * b * n;
  const Natural num = m - 1 - 4 * abn;
  if (sgn(num) < 0 || mpz_odd_p(num.get_mpz_t())) return std::nullopt;
  const Natural s = num / 2;
  const Natural disc = s * s - 4 * abn;
  if (sgn(disc) < 0 || !mpz_perfect_square_p(disc.get_mpz_t())) return std::nullopt;
  const Natural root = sqrt(disc);
  if (mpz_odd_p(Natural(s + root).get_mpz_t())) return std::nullopt;
  const Natural z1 = (s - root) / 2;
  const Natural z2 = (s + root) / 2;

  auto attempt = [&](const Natural& za, const Natural& zb) -> std::optional<std::pair<Natural, Natural>> {
    if (!mpz_divisible_p(za.get_mpz_t(), a.get_mpz_t()) ||
        !mpz_divisible_p(zb.get_mpz_t(), b.get_mpz_t())) {
      return std::nullopt;
    }
    Natural p = za / a;
    Natural q = zb / b;
    if (p * q != n || !is_prime(p) || !is_prime(q)) return std::nullopt;
    if (q < p) std::swap(p, q);
    return std::pair{std::move(p), std::move(q)};
  };
  if (auto r = attempt(z1, z2)) return r;
  return attempt(z2, z1);
}

std::optional<Attempt> try_pair(const Natural& n, const Factorization& n_factorization,
                                const Natural& k1, const Natural& k2,
                                const OracleBudget& budget) {
  const Target t = target(n, k1, k2, budget.factoring, n_factorization);
  const PreimageSet preimages =
      invert(*t.full, InvertOptions{.odd_shortcut = true, .node_cap = budget.node_cap});
  for (const Natural& m : preimages.solutions) {
    if (auto pq = recover_factors(m, n, k1, k2)) return Attempt{m, pq->first, pq->second};
  }
  return std::nullopt;
}

FactorReport factor_via_inversion(const Natural& n, const OracleBudget& budget,
                                  std::uint64_t seed) {
  const Factorization n_fact = factorize(n, budget.factoring);
  require_semiprime(n_fact);
  const double tau_limit = std::pow(ln(n), 3.0);

  KPairSampler sampler(n, budget, seed);
  FactorReport report;
  while (report.samples_used < budget.max_samples) {
    auto [k1, k2] = sampler.next();
    ++report.samples_used;
    try {
      if (budget.tau_filter) {
        const auto ta = factorize(Natural(2 * k1 + 1), budget.factoring).divisor_count();
        const auto tb = factorize(Natural(2 * k2 + 1), budget.factoring).divisor_count();
        if (static_cast<double>(ta) > tau_limit || static_cast<double>(tb) > tau_limit) continue;
      }
      if (auto hit = try_pair(n, n_fact, k1, k2, budget)) {
        report.success = true;
        report.k1 = std::move(k1);
        report.k2 = std::move(k2);
        report.m = std::move(hit->m);
        report.p = std::move(hit->p);
        report.q = std::move(hit->q);
        return report;
      }
    } catch (const BudgetExceeded&) {
      ++report.capped;
    }
  }
  return report;
}

}  // namespace totient::factordemo
