#pragma once

// Partition → totient-decision reduction.
//
// build_system() produces residues a_1..a_2k modulo M such that for any lifts
// N_i ≡ a_i (mod M) and any subset of at most k indices,
//   gcd(2·∏N + 1, M) = 1  ⇔  the subset has exactly k elements and its x-sum
//                             is S/2,
// while N_i − 1 never divides 4·∏N_all and both 2·∏N_all + 1 and
// 4·∏N_all + 1 share a factor with M. decide() then turns prime lifts into
// values n = 4·p_1···p_2k whose totient status mirrors the Partition answer.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "totient/numcore.hpp"

namespace totient::reduction {

/// 2k >= 2 nonnegative integers with even total.
class PartitionInstance {
 public:
  explicit PartitionInstance(std::vector<std::uint64_t> xs);

  [[nodiscard]] std::span<const std::uint64_t> xs() const { return xs_; }
  [[nodiscard]] std::size_t k() const { return xs_.size() / 2; }
  [[nodiscard]] std::uint64_t total() const { return total_; }
  [[nodiscard]] std::uint64_t half() const { return total_ / 2; }

  friend bool operator==(const PartitionInstance&, const PartitionInstance&) = default;

 private:
  std::vector<std::uint64_t> xs_;
  std::uint64_t total_ = 0;
};

/// One ASCII decimal per line; blank lines are ignored.
PartitionInstance parse_instance(std::string_view text);

/// Appends two zeros when k is even, so that k becomes odd.
PartitionInstance normalize(const PartitionInstance& inst);

/// Brute force over all k-subsets; returns the first balanced one as a
/// bitmask over indices, if any. Exponential in k.
std::optional<std::uint64_t> balanced_subset(const PartitionInstance& inst);

struct Component {
  std::string label;  // "8", "3", "5", "R<j>", "T<i>,<j>" (1-based)
  Natural modulus;
};

struct CongruenceSystem {
  std::size_t k = 0;
  Natural modulus;                 // M
  std::vector<Natural> residues;   // a_1..a_2k, stored 0-based
  std::vector<std::uint64_t> r_primes;
  std::vector<std::uint64_t> u_primes;  // u_count = u_primes.size()
  std::vector<std::uint64_t> v_primes;  // v = u_primes.back() of them
  std::vector<std::uint64_t> g;         // g_1..g_{k-1}
  /// theta[i] lists the classes mod U_i other than S/2, ascending.
  std::vector<std::vector<std::uint64_t>> theta;
  /// delta[i][j] = k^{-1} mod U_i·V_j.
  std::vector<std::vector<std::uint64_t>> delta;
  std::vector<Component> components;  // pairwise coprime, product M
};

struct SystemLimits {
  std::size_t max_modulus_bits = std::size_t{1} << 18;
};

class SystemTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requires k odd (normalize first). Throws SystemTooLarge naming the
/// component at which log2(M) would pass limits.max_modulus_bits.
CongruenceSystem build_system(const PartitionInstance& inst, const SystemLimits& limits = {});

/// Direct gcd check over every pair of components.
bool components_pairwise_coprime(const CongruenceSystem& sys);

/// Line-oriented dump: k, component moduli, M, residues and the g/θ/δ tables.
std::string dump_system(const CongruenceSystem& sys);

struct ConditionReport {
  bool passed = true;
  std::size_t lifts_checked = 0;
  std::size_t subsets_checked = 0;
  std::string counterexample;  // first failure, empty when passed
};

/// Draws `samples` random lifts N_i = a_i + c_i·M (0 <= c_i < 2^32) and checks
/// all three conditions exhaustively over subsets of size <= k.
ConditionReport verify_conditions(const CongruenceSystem& sys, const PartitionInstance& inst,
                                  std::size_t samples, std::uint64_t seed);

struct PrimeLifts {
  /// shifts[i] = least t with a_i + M·t prime; nullopt for excluded or
  /// exhausted indices.
  std::vector<std::optional<std::uint64_t>> shifts;
  std::vector<std::size_t> exhausted;  // 0-based indices with no prime found

  [[nodiscard]] bool complete() const { return exhausted.empty(); }
};

/// Least shift in [0, search_bound) per non-excluded (0-based) index.
PrimeLifts find_prime_lifts(const CongruenceSystem& sys, std::span<const std::size_t> exclude,
                            std::uint64_t search_bound, std::uint64_t seed = kDefaultSeed);

/// All t in [0, bound) with a + M·t prime, ascending.
std::vector<std::uint64_t> primes_in_progression(const Natural& a, const Natural& modulus,
                                                 std::uint64_t bound,
                                                 std::uint64_t seed = kDefaultSeed);

struct SearchBounds {
  std::uint64_t lift = 10'000;
  std::uint64_t x = 10'000;
  std::uint64_t y = 10'000;
};

/// F = 2·∏_{u∈left} p_u + 1 and G = 2·∏_{u∉left} p_u + 1 for one split of
/// the indices into k and k with index 1 on the left and ℓ on the right.
struct Split {
  std::uint64_t left_mask = 0;
  Natural f;
  Natural g;
};

struct Candidate {
  std::size_t ell = 0;  // 1-based partner index, 2..k+2
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::vector<Natural> primes;  // p_1..p_2k
  std::vector<Split> splits;
  Natural n_value;              // 4·p_1···p_2k
  Factorization n_factorization;
};

struct CandidateBatch {
  std::vector<Candidate> candidates;
};

/// For each ℓ in 2..min(k+2, 2k) and every (x, y) below the bounds with
/// a_1 + M·x and a_ℓ + M·y prime, one candidate. `lifts` must cover every
/// index except the first.
CandidateBatch assemble_candidates(const CongruenceSystem& sys, const PartitionInstance& inst,
                                   const PrimeLifts& lifts, const SearchBounds& bounds,
                                   std::uint64_t seed = kDefaultSeed);

enum class Verdict { kYes, kNo, kInconclusive };

std::string_view to_string(Verdict v);

struct Decision {
  Verdict verdict = Verdict::kInconclusive;
  /// On yes: factorization of m with φ(m) = n_value.
  std::optional<Factorization> certificate;
  Natural n_value;
  std::size_t candidates_checked = 0;
  std::string reason;
};

/// Yes as soon as a candidate n-value (scanned in batch order) is a totient.
/// No only when the batch is nonempty, every candidate is a nontotient and
/// brute force confirms no balanced subset. Anything else is inconclusive.
Decision decide(const PartitionInstance& inst, const SearchBounds& bounds,
                std::uint64_t seed = kDefaultSeed, const SystemLimits& limits = {});

}  // namespace totient::reduction
