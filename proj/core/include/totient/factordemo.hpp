#pragma once

// Factoring n = pq through totient inversion.
//
// For random k1, k2 the value N' = 4(2k1+1)(2k2+1)n is inverted. When both
// 2(2k1+1)p + 1 and 2(2k2+1)q + 1 are prime, Ψ(N') contains their product,
// and p, q follow from a quadratic. The inverter used here factors N'
// internally, so this shows the reduction's logic rather than a speedup.

#include <cstdint>
#include <optional>
#include <utility>

#include "totient/numcore.hpp"

namespace totient::factordemo {

/// n = pq with p != q odd primes; p and q are kept for tests only.
struct SemiprimeInstance {
  Natural n;
  Natural p;
  Natural q;

  /// Two distinct primes of exactly `bits` bits (bits >= 3), drawn from seed.
  static SemiprimeInstance random(unsigned bits, std::uint64_t seed);
};

struct OracleBudget {
  std::uint64_t max_samples = 100'000;
  /// Per-inversion nodes_explored cap standing in for the polylog timeout.
  std::uint64_t node_cap = 1'000'000;
  /// Upper end of the k range; n^3 when unset.
  std::optional<Natural> k_range;
  /// Skip pairs with τ(2k_i + 1) > (ln n)^3.
  bool tau_filter = false;
  FactorConfig factoring;
};

/// Uniform independent draws of (k1, k2) from [1, bound].
class KPairSampler {
 public:
  KPairSampler(const Natural& n, const OracleBudget& budget, std::uint64_t seed);

  std::pair<Natural, Natural> next();
  [[nodiscard]] const Natural& bound() const { return bound_; }

 private:
  gmp_randclass rng_;
  Natural bound_;
};

std::pair<Natural, Natural> sample_k_pair(const Natural& n, const OracleBudget& budget,
                                          std::uint64_t seed);

struct Target {
  Natural value;              // 4(2k1+1)(2k2+1)n
  Factorization known_part;   // factorization of 4(2k1+1)(2k2+1)
  Natural cofactor;           // n, opaque unless fully factored below
  std::optional<Factorization> full;
};

/// Factors the multiplier; merges in `n_factorization` when supplied (the
/// desk oracle). Throws BudgetExceeded if the multiplier cannot be factored.
Target target(const Natural& n, const Natural& k1, const Natural& k2,
              const FactorConfig& factoring = {},
              const std::optional<Factorization>& n_factorization = std::nullopt);

/// With a = 2k1+1, b = 2k2+1: solves z^2 − s·z + abn = 0 for
/// s = (m − 1 − 4abn)/2 and returns (p, q), p < q, when the roots split as
/// (a·p, b·q) or (b·q, a·p) with pq = n and both prime.
std::optional<std::pair<Natural, Natural>> recover_factors(const Natural& m, const Natural& n,
                                                           const Natural& k1, const Natural& k2);

struct Attempt {
  Natural m;
  Natural p;
  Natural q;
};

/// One (k1, k2) trial against a fully factored n. nullopt on no recovery;
/// throws BudgetExceeded when the inversion exceeds budget.node_cap.
std::optional<Attempt> try_pair(const Natural& n, const Factorization& n_factorization,
                                const Natural& k1, const Natural& k2,
                                const OracleBudget& budget);

struct FactorReport {
  bool success = false;
  std::uint64_t samples_used = 0;
  std::uint64_t capped = 0;  // inversions aborted by the node cap
  Natural k1;
  Natural k2;
  Natural m;
  Natural p;
  Natural q;
};

/// Samples pairs until one recovers (p, q) or budget.max_samples is spent;
/// `success == false` in the latter case. Requires n = pq, p != q odd.
FactorReport factor_via_inversion(const Natural& n, const OracleBudget& budget,
                                  std::uint64_t seed);

}  // namespace totient::factordemo
