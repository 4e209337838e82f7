#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "totient/numcore.hpp"

namespace totient {
namespace {

Natural pow2(unsigned e) { return Natural(1) << e; }

TEST(IsPrime, SpotValues) {
  EXPECT_FALSE(is_prime(Natural(0)));
  EXPECT_FALSE(is_prime(Natural(1)));
  EXPECT_TRUE(is_prime(Natural(2)));
  EXPECT_FALSE(is_prime(Natural(91)));
  EXPECT_TRUE(is_prime(Natural(97)));
}

TEST(IsPrime, MersenneNumbers) {
  // 2^p − 1 is prime for p in {61, 89, 107, 127, 521} and composite for the
  // other listed prime exponents.
  for (unsigned p : {61u, 89u, 107u, 127u, 521u}) EXPECT_TRUE(is_prime(pow2(p) - 1)) << p;
  for (unsigned p : {67u, 101u, 103u, 109u, 113u}) EXPECT_FALSE(is_prime(pow2(p) - 1)) << p;
}

TEST(IsPrime, MersenneM89AgreesWithGmp) {
  const Natural m89 = pow2(89) - 1;
  EXPECT_EQ(is_prime(m89), mpz_probab_prime_p(m89.get_mpz_t(), 50) > 0);
}

TEST(IsPrime, AgreesWithTrialDivisionBelowOneMillion) {
  for (std::uint64_t n = 0; n < 1'000'000; ++n) {
    ASSERT_EQ(is_prime_u64(n), oracle::trial_prime(n)) << n;
  }
}

TEST(IsPrime, StrongPseudoprimesRejected) {
  // Strong pseudoprimes to several small bases, and Carmichael numbers.
  for (std::uint64_t n : {2047ULL, 1373653ULL, 25326001ULL, 3215031751ULL, 2152302898747ULL,
                          3474749660383ULL, 341550071728321ULL, 3825123056546413051ULL, 561ULL,
                          41041ULL, 825265ULL}) {
    EXPECT_FALSE(is_prime_u64(n)) << n;
    EXPECT_FALSE(is_prime(from_u64(n))) << n;
  }
}

TEST(IsPrime, LargeSemiprimesAndProducts) {
  const Natural p = pow2(127) - 1;
  const Natural q = pow2(89) - 1;
  EXPECT_FALSE(is_prime(p * q));
  EXPECT_FALSE(is_prime(p * p));
  EXPECT_FALSE(is_prime(pow2(128) + 1));
  // Arnault's composite, a strong pseudoprime to every prime base below 307.
  const Natural arnault(
      "2887148238050771212671429597130393991977609459279722700926516024197432303799152733116328983"
      "1446719936045474407736803366016318312108327596081765591303627009599306024015339713880040008"
      "7635575498781185659591396939451744347591286591232195113287021081225316221226838669036024436"
      "3975633958016622302573025773919919880311306549193046613008591151051299922347211519609659193"
      "4553313817087838883513043826045001226006008640541036050116209116961393048497097232089011880"
      "2232719566766549017567924047549768963398089812271813316939195512453091549271297006611",
      10);
  EXPECT_FALSE(is_prime(arnault));
}

TEST(IsPrime, SeedDoesNotChangeVerdictOnKnownValues) {
  const Natural p = pow2(521) - 1;
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) EXPECT_TRUE(is_prime(p, 64, seed));
}

TEST(IsPrime, SearchRounds) {
  EXPECT_EQ(search_rounds(32), 64u);
  EXPECT_EQ(search_rounds(430), 16u);
  EXPECT_EQ(search_rounds(1000), 7u);
  EXPECT_EQ(search_rounds(11'298), 2u);
  for (std::size_t b = 64; b < 20'000; b += 97) {
    EXPECT_GE(search_rounds(b), search_rounds(b + 97)) << b;
  }
}

TEST(Factorize, SpotValues) {
  EXPECT_TRUE(factorize(Natural(1)).empty());
  EXPECT_EQ(format_factorization(factorize(Natural(540))), "2^2 * 3^3 * 5");
  EXPECT_EQ(format_factorization(factorize(Natural(91))), "7 * 13");
  EXPECT_THROW(factorize(Natural(0)), std::invalid_argument);
}

TEST(Factorize, AgreesWithTrialDivisionBelowOneMillion) {
  for (std::uint64_t n = 1; n <= 1'000'000; ++n) {
    const auto f = factorize_u64(n);
    const auto expected = oracle::trial_factor(n);
    ASSERT_EQ(f.size(), expected.size()) << n;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      ASSERT_EQ(f.entries()[i].prime, from_u64(expected[i].first)) << n;
      ASSERT_EQ(f.entries()[i].exponent, expected[i].second) << n;
    }
  }
}

TEST(Factorize, RhoSplitsLargeComposites) {
  const Natural m31 = pow2(31) - 1;
  const Natural m61 = pow2(61) - 1;
  const Natural p = 1000003;
  const Natural n = m31 * m61 * p * p;
  const auto f = factorize(n);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f.entries()[0].prime, p);
  EXPECT_EQ(f.entries()[0].exponent, 2u);
  EXPECT_EQ(f.entries()[1].prime, m31);
  EXPECT_EQ(f.entries()[2].prime, m61);
  EXPECT_EQ(f.value(), n);
}

TEST(Factorize, PerfectPowerOfLargePrime) {
  const Natural p = pow2(61) - 1;
  Natural n;
  mpz_pow_ui(n.get_mpz_t(), p.get_mpz_t(), 3);
  const auto f = factorize(n);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f.entries()[0].prime, p);
  EXPECT_EQ(f.entries()[0].exponent, 3u);
}

TEST(Factorize, RandomProductsOfLargePrimes) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Natural n = 1;
    std::vector<Natural> primes;
    for (int i = 0; i < 3; ++i) {
      std::uint64_t c = (rng() >> 36) | (1ULL << 27);
      while (!is_prime_u64(c)) ++c;
      primes.push_back(from_u64(c));
      n *= primes.back();
    }
    const auto f = factorize(n);
    EXPECT_EQ(f.value(), n);
    for (const auto& e : f.entries()) EXPECT_TRUE(is_prime(e.prime));
  }
}

TEST(Factorize, WorkCapSignalsBudgetExceeded) {
  const std::uint64_t p = 2147483647ULL;  // 2^31 − 1
  const std::uint64_t q = 2147483629ULL;
  FactorConfig tight;
  tight.work_cap = 10;
  EXPECT_THROW(factorize_u64(p * q, tight), BudgetExceeded);
  EXPECT_EQ(factorize_u64(p * q).size(), 2u);
}

TEST(Factorize, ResultIndependentOfSeed) {
  const Natural n = (pow2(31) - 1) * (pow2(61) - 1);
  FactorConfig a;
  a.seed = 1;
  FactorConfig b;
  b.seed = 12345;
  EXPECT_EQ(factorize(n, a), factorize(n, b));
}

TEST(Divisors, SpotValues) {
  const auto d12 = divisors(factorize(Natural(12)));
  EXPECT_EQ(d12, (std::vector<Natural>{1, 2, 3, 4, 6, 12}));
  EXPECT_EQ(divisors(Factorization{}), (std::vector<Natural>{1}));
  const Factorization f24({{Natural(2), 3}, {Natural(3), 1}});
  EXPECT_EQ(divisors(f24).size(), 8u);
  EXPECT_EQ(f24.divisor_count(), 8u);
}

TEST(Divisors, AgreeWithTrialDivisionBelow1e5) {
  for (std::uint64_t n = 1; n <= 100'000; n += (n < 2000 ? 1 : 37)) {
    const auto got = divisors_u64(factorize_u64(n));
    ASSERT_EQ(got, oracle::trial_divisors(n)) << n;
  }
}

TEST(Divisors, MembershipMatchesTrialDivisionBelow1e5) {
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    const auto d = divisors_u64(factorize_u64(n));
    ASSERT_EQ(d.size(), factorize_u64(n).divisor_count()) << n;
    for (std::uint64_t x : d) ASSERT_EQ(n % x, 0u) << n;
  }
}

TEST(EulerPhi, SpotValues) {
  EXPECT_EQ(euler_phi(factorize(Natural(12))), 4);
  EXPECT_EQ(euler_phi(factorize(Natural(589))), 540);
  EXPECT_EQ(euler_phi(Factorization{}), 1);
}

TEST(EulerPhi, AgreesWithSieveBelowOneMillion) {
  const auto phi = oracle::eratosthenes_phi(1'000'000);
  for (std::uint64_t n = 1; n <= 1'000'000; ++n) {
    ASSERT_EQ(euler_phi(factorize_u64(n)), phi[n]) << n;
  }
}

TEST(EulerPhi, TinyValuesAgreeWithGcdCount) {
  for (std::uint64_t n = 1; n <= 300; ++n) {
    EXPECT_EQ(euler_phi(factorize_u64(n)), from_u64(oracle::naive_phi(n))) << n;
  }
}

TEST(Crt, SpotValues) {
  const std::vector<Residue> a{{1, 8}, {2, 3}, {4, 5}};
  EXPECT_EQ(crt_combine(a), (Residue{89, 120}));
  const std::vector<Residue> b{{0, 1}};
  EXPECT_EQ(crt_combine(b), (Residue{0, 1}));
  const std::vector<Residue> c{{3, 5}, {3, 7}};
  EXPECT_EQ(crt_combine(c), (Residue{3, 35}));
}

TEST(Crt, RejectsSharedFactors) {
  const std::vector<Residue> bad{{1, 6}, {1, 4}};
  EXPECT_THROW(crt_combine(bad), std::invalid_argument);
  const std::vector<Residue> zero{{1, 0}};
  EXPECT_THROW(crt_combine(zero), std::invalid_argument);
}

TEST(Crt, RandomSystemsReproduceEveryResidue) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Residue> sys;
    Natural product = 1;
    for (int i = 0; i < 5; ++i) {
      Natural m;
      do {
        m = from_u64(rng() % 100000 + 2);
      } while (gcd(m, product) != 1);
      product *= m;
      sys.push_back({from_u64(rng()), m});
    }
    const Residue r = crt_combine(sys);
    EXPECT_EQ(r.modulus, product);
    EXPECT_LT(r.value, r.modulus);
    for (const auto& s : sys) EXPECT_EQ(Natural(r.value % s.modulus), Natural(s.value % s.modulus));
  }
}

TEST(FactorizationText, ParseAndFormat) {
  EXPECT_TRUE(parse_factorization("1").empty());
  const auto f = parse_factorization("19 * 31");
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0], (PrimePower{19, 1}));
  EXPECT_EQ(f[1], (PrimePower{31, 1}));
  const auto g = parse_factorization("2^2*3^3 * 5^1");
  EXPECT_EQ(format_factorization(g), "2^2 * 3^3 * 5");
  EXPECT_EQ(format_factorization(std::vector<PrimePower>{}), "1");
}

TEST(FactorizationText, MalformedInputs) {
  for (const char* bad : {"", "2^", "2 ** 3", "a", "2 *", "^3", "2^3^4", "-5", "2 3"}) {
    EXPECT_THROW(parse_factorization(bad), ParseError) << bad;
  }
}

TEST(FactorizationText, RoundTripsRandomFactorizations) {
  for (std::uint64_t n = 1; n < 5000; n += 7) {
    const auto f = factorize_u64(n);
    const auto text = format_factorization(f);
    EXPECT_EQ(Factorization(parse_factorization(text)), f) << text;
  }
}

TEST(FactorizationType, ValidationRejectsBrokenInvariants) {
  EXPECT_THROW(Factorization({{Natural(4), 1}}), std::invalid_argument);
  EXPECT_THROW(Factorization({{Natural(5), 1}, {Natural(3), 1}}), std::invalid_argument);
  EXPECT_THROW(Factorization({{Natural(3), 0}}), std::invalid_argument);
  EXPECT_THROW(Factorization({{Natural(3), 1}, {Natural(3), 1}}), std::invalid_argument);
  EXPECT_NO_THROW(Factorization({{Natural(2), 2}, {Natural(3), 3}, {Natural(5), 1}}));
}

TEST(ParseNatural, StrictDecimal) {
  EXPECT_EQ(parse_natural("12345678901234567890123"), Natural("12345678901234567890123"));
  EXPECT_THROW(parse_natural(""), ParseError);
  EXPECT_THROW(parse_natural("12x"), ParseError);
  EXPECT_THROW(parse_natural(" 1"), ParseError);
  EXPECT_THROW(parse_natural("-1"), ParseError);
}

}  // namespace
}  // namespace totient
