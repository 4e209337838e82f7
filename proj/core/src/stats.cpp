#include "totient/stats.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "totient/inverter.hpp"
#include "totient/numcore.hpp"

namespace totient::stats {

namespace {

using u64 = std::uint64_t;

std::vector<std::uint32_t> smallest_factor_sieve(u64 limit) {
  std::vector<std::uint32_t> spf(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  for (u64 i = 2; i <= limit; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      if (p > spf[i] || u64{p} * i > limit) break;
      spf[p * i] = p;
    }
  }
  return spf;
}

Factorization factor_with(const std::vector<std::uint32_t>& spf, u64 n) {
  std::vector<PrimePower> entries;
  while (n > 1) {
    const std::uint32_t p = spf[n];
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    entries.push_back({from_u64(p), e});
  }
  return Factorization::assume_valid(std::move(entries));
}

void check_limit(u64 limit) {
  if (limit >= std::uint32_t(-1)) throw std::length_error("sieve limit must be below 2^32");
}

std::string format_double(double v, int precision) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<std::uint32_t> phi_sieve(u64 limit) {
  check_limit(limit);
  std::vector<std::uint32_t> phi(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  if (limit >= 1) phi[1] = 1;
  for (u64 i = 2; i <= limit; ++i) {
    if (phi[i] == 0) {
      phi[i] = static_cast<std::uint32_t>(i - 1);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      const u64 ip = i * p;
      if (ip > limit) break;
      if (i % p == 0) {
        phi[ip] = phi[i] * p;
        break;
      }
      phi[ip] = phi[i] * (p - 1);
    }
  }
  return phi;
}

std::vector<std::uint32_t> tau_sieve(u64 limit) {
  check_limit(limit);
  std::vector<std::uint32_t> tau(limit + 1, 0);
  // Exponent of the smallest prime factor, needed to update τ in place.
  std::vector<std::uint32_t> low_exp(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  if (limit >= 1) tau[1] = 1;
  for (u64 i = 2; i <= limit; ++i) {
    if (tau[i] == 0) {
      tau[i] = 2;
      low_exp[i] = 1;
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      const u64 ip = i * p;
      if (ip > limit) break;
      if (i % p == 0) {
        low_exp[ip] = low_exp[i] + 1;
        tau[ip] = tau[i] / (low_exp[i] + 1) * (low_exp[i] + 2);
        break;
      }
      low_exp[ip] = 1;
      tau[ip] = tau[i] * 2;
    }
  }
  return tau;
}

u64 tau_sum(u64 x) {
  const auto tau = tau_sieve(x);
  u64 total = 0;
  for (u64 n = 1; n <= x; ++n) total += tau[n];
  return total;
}

PsiTable psi_table(u64 limit) {
  check_limit(limit);
  const auto spf = smallest_factor_sieve(limit);
  PsiTable table;
  table.count.assign(limit + 1, 0);
  table.nodes.assign(limit + 1, 0);
  table.elapsed_ms.assign(limit + 1, 0.0);
  const InvertOptions full{.odd_shortcut = false, .node_cap = 0};
  const auto start = std::chrono::steady_clock::now();
  for (u64 n = 1; n <= limit; ++n) {
    const PreimageSet set = invert(factor_with(spf, n), full);
    table.count[n] = static_cast<std::uint32_t>(set.solutions.size());
    table.nodes[n] = set.nodes_explored;
    table.elapsed_ms[n] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return table;
}

Ratio totient_density(const PsiTable& table, u64 x) {
  if (x == 0 || x >= table.count.size()) throw std::out_of_range("totient_density: x outside table");
  Ratio r{0, x};
  for (u64 d = 1; d <= x; ++d) r.numerator += table.count[d];
  return r;
}

Ratio totient_density(u64 x) { return totient_density(psi_table(x), x); }

u64 psi_star_sum(const PsiTable& table, u64 x) {
  if (x == 0 || x >= table.count.size()) throw std::out_of_range("psi_star_sum: x outside table");
  u64 total = 0;
  for (u64 d = 1; d <= x; ++d) total += u64{table.count[d]} * (x / d);
  return total;
}

u64 psi_star_sum(u64 x) { return psi_star_sum(psi_table(x), x); }

double runtime_profile(const PsiTable& table, u64 x, double exponent) {
  if (x == 0 || x >= table.count.size()) throw std::out_of_range("runtime_profile: x outside table");
  u64 slow = 0;
  for (u64 n = 1; n <= x; ++n) {
    const double threshold = std::pow(std::log(static_cast<double>(n)), exponent);
    if (static_cast<double>(table.nodes[n]) > threshold) ++slow;
  }
  return static_cast<double>(slow) / static_cast<double>(x);
}

double runtime_profile(u64 x, double exponent) {
  return runtime_profile(psi_table(x), x, exponent);
}

SweepReport sweep(u64 limit, double exponent) {
  if (limit == 0) throw std::invalid_argument("sweep: limit must be positive");
  SweepReport report;
  report.limit = limit;
  report.exponent = exponent;

  std::vector<u64> points;
  for (u64 p = 10; p <= limit; p *= 10) points.push_back(p);
  if (points.empty() || points.back() != limit) points.push_back(limit);

  const PsiTable table = psi_table(limit);
  const auto tau = tau_sieve(limit);
  u64 sum_psi = 0;
  u64 sum_tau = 0;
  std::uint32_t max_psi = 0;
  u64 slow = 0;
  std::size_t next = 0;
  for (u64 n = 1; n <= limit && next < points.size(); ++n) {
    sum_psi += table.count[n];
    sum_tau += tau[n];
    max_psi = std::max(max_psi, table.count[n]);
    if (static_cast<double>(table.nodes[n]) >
        std::pow(std::log(static_cast<double>(n)), exponent)) {
      ++slow;
    }
    if (n == points[next]) {
      SweepRow row;
      row.x = n;
      row.sum_psi = sum_psi;
      row.sum_psi_star = psi_star_sum(table, n);
      row.sum_tau = sum_tau;
      row.max_psi = max_psi;
      row.slow_fraction = static_cast<double>(slow) / static_cast<double>(n);
      row.wall_ms = table.elapsed_ms[n];
      report.rows.push_back(row);
      ++next;
    }
  }
  return report;
}

std::string to_csv(const SweepReport& report) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : report.rows) {
    out += std::to_string(r.x) + ',' + std::to_string(r.sum_psi) + ',' +
           std::to_string(r.sum_psi_star) + ',' + std::to_string(r.sum_tau) + ',' +
           std::to_string(r.max_psi) + ',' + format_double(r.slow_fraction, 6) + ',' +
           format_double(r.wall_ms, 3) + '\n';
  }
  return out;
}

}  // namespace totient::stats
