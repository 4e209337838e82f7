#pragma once

// Enumerates Ψ(n) = {m : φ(m) = n} from the factorization of n.
//
// Every preimage corresponds to exactly one representation
//     n = ∏ ℓ_j^γ_j (ℓ_j − 1),   ℓ_1 < ℓ_2 < ... primes, γ_j >= 0,
// with m = ∏ ℓ_j^(γ_j + 1). The search walks these representations depth
// first: a node holds the cofactor still to be covered and the largest prime
// used so far, and a child picks one more unit (ℓ, γ) with ℓ above that
// prime and ℓ^γ(ℓ − 1) dividing the cofactor.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "totient/numcore.hpp"

namespace totient {

/// (ℓ, γ) with ℓ prime; contributes ℓ^γ(ℓ − 1) to n and ℓ^(γ+1) to m.
struct PrimePowerUnit {
  Natural ell;
  unsigned gamma = 0;
  Natural value;  // ℓ^γ(ℓ − 1), cached

  static PrimePowerUnit make(const Natural& ell, unsigned gamma);
  [[nodiscard]] Natural solution_factor() const;

  friend bool operator==(const PrimePowerUnit&, const PrimePowerUnit&) = default;
};

/// Every unit whose value divides n, ordered by (value, ℓ, γ). Each value
/// admits at most two units.
class UnitIndex {
 public:
  UnitIndex() = default;
  explicit UnitIndex(std::vector<PrimePowerUnit> units);

  [[nodiscard]] std::span<const PrimePowerUnit> units() const { return units_; }
  /// Units with value exactly e (empty span if none).
  [[nodiscard]] std::span<const PrimePowerUnit> units_for(const Natural& e) const;
  /// Largest number of units sharing one value.
  [[nodiscard]] std::size_t max_bucket() const;

 private:
  std::vector<PrimePowerUnit> units_;
};

/// Scans the divisors d of n for primes ℓ = d + 1 and extends each by powers
/// of ℓ while the unit value still divides n. `divs` must be divisors(f).
UnitIndex build_unit_index(const Factorization& f, std::span<const Natural> divs);

struct PreimageSet {
  Natural n;
  std::vector<Natural> solutions;  // strictly increasing
  std::uint64_t nodes_explored = 0;
  std::uint64_t paths_explored = 0;
  unsigned max_depth = 0;
};

struct InvertOptions {
  /// Odd n > 1 returns ∅ without searching (φ(m) is even for m >= 3).
  bool odd_shortcut = true;
  /// Abort with BudgetExceeded once more nodes than this are visited;
  /// zero means unlimited.
  std::uint64_t node_cap = 0;
};

/// Complete, sorted Ψ(n) for n = f.value().
///
/// nodes_explored counts visited search nodes including the root;
/// paths_explored counts root paths that end either in a complete
/// representation or in a node with no children.
PreimageSet invert(const Factorization& f, const InvertOptions& options = {});

/// invert(factorize(n)). Propagates BudgetExceeded from factoring.
PreimageSet invert_value(const Natural& n, const InvertOptions& options = {},
                         const FactorConfig& factoring = {});

/// True iff Ψ(n) is nonempty; stops at the first complete representation.
bool is_totient(const Factorization& f);

/// Factorization of the first preimage found in search order, if any.
std::optional<Factorization> find_certificate(const Factorization& f);

/// True iff `m_fact` is a valid factorization (prime bases, strictly
/// ascending, positive exponents) whose totient is n. Malformed input yields
/// false.
bool verify_certificate(const Natural& n, std::span<const PrimePower> m_fact);

/// #Ψ*(n) = Σ_{d | n} #Ψ(d).
std::uint64_t psi_star_count(const Factorization& f);

/// {"n":..,"solutions":[..],"nodes_explored":..,"paths_explored":..} with
/// every integer written as a bare JSON decimal number.
std::string to_json(const PreimageSet& set);

/// Solutions separated by single spaces; empty string for ∅.
std::string format_solutions(const PreimageSet& set);

}  // namespace totient
