#pragma once

// Average-case measurements over all n <= x: preimage counts, the Ψ*
// divisor sum, divisor-count sums and the search-cost tail.

#include <cstdint>
#include <string>
#include <vector>

namespace totient::stats {

/// φ(m) for 0 <= m <= limit (φ(0) reported as 0), by linear sieve.
std::vector<std::uint32_t> phi_sieve(std::uint64_t limit);

/// τ(m) for 0 <= m <= limit (τ(0) reported as 0), by linear sieve.
std::vector<std::uint32_t> tau_sieve(std::uint64_t limit);

/// Σ_{n<=x} τ(n).
std::uint64_t tau_sum(std::uint64_t x);

/// Per-n inverter results for 1 <= n <= limit. Index 0 is unused.
struct PsiTable {
  std::vector<std::uint32_t> count;  // #Ψ(n)
  std::vector<std::uint64_t> nodes;  // nodes_explored of the full search
  std::vector<double> elapsed_ms;    // wall clock when n finished
};

/// Runs the full search (no odd shortcut) for every n <= limit.
PsiTable psi_table(std::uint64_t limit);

struct Ratio {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  [[nodiscard]] double value() const {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
};

/// (Σ_{d<=x} #Ψ(d)) / x. Requires x >= 10 (smaller x accepted, same rule).
Ratio totient_density(std::uint64_t x);
Ratio totient_density(const PsiTable& table, std::uint64_t x);

/// Σ_{n<=x} #Ψ*(n), evaluated as Σ_{d<=x} #Ψ(d)·⌊x/d⌋.
std::uint64_t psi_star_sum(std::uint64_t x);
std::uint64_t psi_star_sum(const PsiTable& table, std::uint64_t x);

/// Fraction of 1 <= n <= x whose nodes_explored exceeds (ln n)^exponent.
double runtime_profile(std::uint64_t x, double exponent);
double runtime_profile(const PsiTable& table, std::uint64_t x, double exponent);

struct SweepRow {
  std::uint64_t x = 0;
  std::uint64_t sum_psi = 0;
  std::uint64_t sum_psi_star = 0;
  std::uint64_t sum_tau = 0;
  std::uint32_t max_psi = 0;
  double slow_fraction = 0.0;
  double wall_ms = 0.0;
};

struct SweepReport {
  std::uint64_t limit = 0;
  double exponent = 4.0;
  std::vector<SweepRow> rows;
};

/// One row per power of ten up to limit, plus a final row at limit when it is
/// not itself a power of ten. slow_fraction uses `exponent` as B.
SweepReport sweep(std::uint64_t limit, double exponent = 4.0);

inline constexpr const char* kCsvHeader =
    "x,sum_psi,sum_psi_star,sum_tau,max_psi,slow_fraction,wall_ms";

/// Header row then one line per row; '\n' line endings.
std::string to_csv(const SweepReport& report);

}  // namespace totient::stats
