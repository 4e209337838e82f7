#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "totient/inverter.hpp"

namespace totient {
namespace {

std::vector<Natural> nat(std::initializer_list<unsigned long> xs) {
  std::vector<Natural> out;
  for (auto x : xs) out.emplace_back(x);
  return out;
}

PreimageSet full(std::uint64_t n) {
  return invert(factorize_u64(n), InvertOptions{.odd_shortcut = false});
}

// Sieve to 8·10^6 shared by the oracle tests; 2·2000^2 = 8·10^6 covers every
// preimage of n <= 2000.
const std::map<std::uint32_t, std::vector<std::uint32_t>>& sieve_buckets() {
  static const auto buckets = oracle::preimage_buckets(oracle::eratosthenes_phi(8'000'000), 2000);
  return buckets;
}

std::vector<Natural> bucket(std::uint32_t n) {
  std::vector<Natural> out;
  for (auto m : sieve_buckets().at(n)) out.push_back(from_u64(m));
  return out;
}

TEST(Invert, SpotValuesMatchSieve) {
  const std::vector<std::pair<std::uint32_t, std::vector<Natural>>> frozen{
      {1, nat({1, 2})},
      {2, nat({3, 4, 6})},
      {3, {}},
      {4, nat({5, 8, 10, 12})},
      {8, nat({15, 16, 20, 24, 30})},
      {10, nat({11, 22})},
      {14, {}},
      {100, nat({101, 125, 202, 250})},
  };
  for (const auto& [n, expected] : frozen) {
    EXPECT_EQ(bucket(n), expected) << n;
    EXPECT_EQ(invert_value(Natural(n)).solutions, expected) << n;
  }
}

TEST(Invert, OracleEquivalenceUpTo2000) {
  for (std::uint32_t n = 1; n <= 2000; ++n) {
    ASSERT_EQ(full(n).solutions, bucket(n)) << n;
  }
}

TEST(Invert, InvertValueMatchesInvertOfFactorization) {
  const auto a = invert_value(Natural(540));
  EXPECT_TRUE(std::binary_search(a.solutions.begin(), a.solutions.end(), Natural(589)));
  EXPECT_EQ(a.solutions, invert(factorize(Natural(540))).solutions);
  EXPECT_TRUE(invert_value(Natural(7)).solutions.empty());
}

TEST(Invert, SoundnessUpTo1e5) {
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    const auto set = invert(factorize_u64(n));
    for (const auto& m : set.solutions) {
      ASSERT_EQ(euler_phi(factorize(m)), from_u64(n)) << n << " " << m;
    }
  }
}

TEST(Invert, SolutionsStrictlyIncreasingWithoutDedup) {
  for (std::uint64_t n = 1; n <= 20'000; ++n) {
    const auto set = full(n);
    for (std::size_t i = 1; i < set.solutions.size(); ++i) {
      ASSERT_LT(set.solutions[i - 1], set.solutions[i]) << n;
    }
  }
}

TEST(Invert, DepthStaysLogarithmic) {
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    const auto set = full(n);
    ASSERT_LE(set.max_depth, 2.0 * std::log2(static_cast<double>(n)) + 2.0) << n;
  }
}

TEST(Invert, NodeAndPathCountersForSmallCases) {
  // Units of 4 are (2,0):1, (2,1):2, (3,0):2, (2,2):4, (5,0):4. Walked by
  // hand: root; 2·{3 dead, 5 → 10}; 4·{3 → 12}; 3 dead; 8; 5. That is 9 nodes
  // and 6 root-to-end paths.
  const auto set = full(4);
  EXPECT_EQ(set.solutions, nat({5, 8, 10, 12}));
  EXPECT_EQ(set.nodes_explored, 9u);
  EXPECT_EQ(set.paths_explored, 6u);
  EXPECT_EQ(set.max_depth, 2u);

  const auto one = full(1);
  EXPECT_EQ(one.nodes_explored, 2u);
  EXPECT_EQ(one.paths_explored, 2u);
}

TEST(Invert, OddShortcut) {
  const auto fast = invert(factorize_u64(15));
  EXPECT_TRUE(fast.solutions.empty());
  EXPECT_EQ(fast.nodes_explored, 0u);
  const auto slow = full(15);
  EXPECT_TRUE(slow.solutions.empty());
  EXPECT_GT(slow.nodes_explored, 0u);
}

TEST(Invert, NodeCapThrows) {
  const auto f = factorize_u64(720720);
  EXPECT_THROW(invert(f, InvertOptions{.node_cap = 5}), BudgetExceeded);
  EXPECT_NO_THROW(invert(f, InvertOptions{.node_cap = 0}));
}

TEST(Invert, MultiprecisionPathPowersOfTwo) {
  // φ(m) = 2^e forces m = 2^a times distinct Fermat primes 3, 5, 17, 257,
  // 65537 (2-adic weights 1, 2, 4, 8, 16). For e = 31 each of the 32 subsets
  // fixes one a >= 1, and the full subset also allows the odd m = 2^32 − 1.
  const Natural two31 = Natural(1) << 31;
  const auto set = invert_value(two31);
  EXPECT_EQ(set.solutions.size(), 33u);
  EXPECT_EQ(set.solutions.front(), Natural(4294967295UL));
  for (const auto& m : set.solutions) EXPECT_EQ(euler_phi(factorize(m)), two31);

  // Same count just below the switch: 31 subsets with a >= 1 plus one odd m.
  EXPECT_EQ(invert_value(Natural(1) << 30).solutions.size(), 32u);
}

TEST(Invert, MultiprecisionPathLargeValue) {
  const Natural p = (Natural(1) << 61) - 1;  // prime
  const Natural n = 2 * (p - 1);
  const auto set = invert_value(n);
  EXPECT_FALSE(set.solutions.empty());
  for (const auto& m : set.solutions) EXPECT_EQ(euler_phi(factorize(m)), n);
  EXPECT_TRUE(std::binary_search(set.solutions.begin(), set.solutions.end(), Natural(3 * p)));
}

TEST(UnitIndex, AtMostTwoUnitsPerValueUpTo1e5) {
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    const auto f = factorize_u64(n);
    const auto idx = build_unit_index(f, divisors(f));
    ASSERT_LE(idx.max_bucket(), 2u) << n;
  }
}

TEST(UnitIndex, BucketsForFour) {
  const auto f = factorize_u64(4);
  const auto idx = build_unit_index(f, divisors(f));
  EXPECT_EQ(idx.units().size(), 5u);
  const auto two = idx.units_for(Natural(2));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0], PrimePowerUnit::make(Natural(2), 1));
  EXPECT_EQ(two[1], PrimePowerUnit::make(Natural(3), 0));
  EXPECT_TRUE(idx.units_for(Natural(3)).empty());
  EXPECT_EQ(PrimePowerUnit::make(Natural(5), 2).value, 100);
  EXPECT_EQ(PrimePowerUnit::make(Natural(5), 2).solution_factor(), 125);
}

TEST(IsTotient, SpotValues) {
  EXPECT_TRUE(is_totient(factorize_u64(10)));
  EXPECT_FALSE(is_totient(factorize_u64(14)));
  EXPECT_TRUE(is_totient(factorize_u64(1)));
  EXPECT_FALSE(is_totient(factorize_u64(7)));
}

TEST(IsTotient, ConsistentWithInvertUpTo1e4) {
  for (std::uint64_t n = 1; n <= 10'000; ++n) {
    const auto f = factorize_u64(n);
    ASSERT_EQ(is_totient(f), !full(n).solutions.empty()) << n;
  }
}

TEST(Certificate, FoundCertificatesVerify) {
  for (std::uint64_t n = 1; n <= 10'000; ++n) {
    const auto cert = find_certificate(factorize_u64(n));
    if (!cert) continue;
    ASSERT_TRUE(verify_certificate(from_u64(n), cert->entries())) << n;
  }
}

TEST(Certificate, VerifySpotValues) {
  EXPECT_TRUE(verify_certificate(Natural(540), parse_factorization("19 * 31")));
  EXPECT_FALSE(verify_certificate(Natural(540), parse_factorization("19 * 29")));
  EXPECT_FALSE(verify_certificate(Natural(540), parse_factorization("31 * 19")));
  EXPECT_FALSE(verify_certificate(Natural(540), parse_factorization("589")));
  EXPECT_FALSE(verify_certificate(Natural(12), parse_factorization("13^0")));
  EXPECT_TRUE(verify_certificate(Natural(1), parse_factorization("1")));
  EXPECT_TRUE(verify_certificate(Natural(1), parse_factorization("2")));
}

TEST(PsiStar, SpotValues) {
  EXPECT_EQ(psi_star_count(factorize_u64(1)), 2u);
  EXPECT_EQ(psi_star_count(factorize_u64(2)), 5u);
  EXPECT_EQ(psi_star_count(factorize_u64(4)), 9u);
}

TEST(PsiStar, DivisorSumAgreesWithSieveUpTo500) {
  for (std::uint32_t n = 1; n <= 500; ++n) {
    std::uint64_t expected = 0;
    for (std::uint32_t d = 1; d <= n; ++d) {
      if (n % d == 0) expected += sieve_buckets().at(d).size();
    }
    ASSERT_EQ(psi_star_count(factorize_u64(n)), expected) << n;
  }
}

TEST(Serialization, JsonFieldsAndText) {
  const auto set = full(4);
  const auto j = nlohmann::json::parse(to_json(set));
  EXPECT_EQ(j.at("n").get<int>(), 4);
  EXPECT_EQ(j.at("solutions"), nlohmann::json::parse("[5,8,10,12]"));
  EXPECT_EQ(j.at("nodes_explored").get<int>(), 9);
  EXPECT_EQ(j.at("paths_explored").get<int>(), 6);
  EXPECT_EQ(format_solutions(set), "5 8 10 12");
  EXPECT_EQ(format_solutions(full(14)), "");
}

TEST(Serialization, JsonKeepsBigIntegersExact) {
  const auto set = invert_value(Natural(1) << 31);
  const std::string text = to_json(set);
  EXPECT_NE(text.find("4294967295"), std::string::npos);
  EXPECT_NE(text.find("\"n\":2147483648,"), std::string::npos);
}

}  // namespace
}  // namespace totient
