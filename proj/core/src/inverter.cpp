#include "totient/inverter.hpp"

#include <algorithm>
#include <tuple>

namespace totient {

namespace {

using u64 = std::uint64_t;

// Below this n every preimage (m <= 2n^2) and every intermediate value fits
// comfortably in 64 bits.
constexpr u64 kWordPathLimit = u64{1} << 31;

// --- integer operations shared by the 64-bit and multiprecision paths ------

bool divides(u64 d, u64 x) { return x % d == 0; }
bool divides(const Natural& d, const Natural& x) {
  return mpz_divisible_p(x.get_mpz_t(), d.get_mpz_t()) != 0;
}
u64 exact_quotient(u64 x, u64 d) { return x / d; }
Natural exact_quotient(const Natural& x, const Natural& d) {
  Natural q;
  mpz_divexact(q.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
  return q;
}
unsigned two_adic(u64 x) { return static_cast<unsigned>(__builtin_ctzll(x)); }
unsigned two_adic(const Natural& x) {
  return static_cast<unsigned>(mpz_scan1(x.get_mpz_t(), 0));
}
bool prime_test(u64 x) { return is_prime_u64(x); }
bool prime_test(const Natural& x) { return is_prime(x); }
Natural to_natural(u64 x) { return from_u64(x); }
const Natural& to_natural(const Natural& x) { return x; }

template <class Int>
struct Unit {
  Int ell;
  unsigned gamma;
  Int value;
  unsigned value_two_adic;
};

template <class Int>
std::vector<Unit<Int>> find_units(const Int& n, const std::vector<Int>& divs) {
  std::vector<Unit<Int>> units;
  for (const Int& d : divs) {
    Int ell = d + 1;
    if (!prime_test(ell)) continue;
    Int value = d;
    unsigned gamma = 0;
    for (;;) {
      units.push_back({ell, gamma, value, two_adic(value)});
      Int next = value * ell;
      if (next > n || !divides(next, n)) break;
      value = std::move(next);
      ++gamma;
    }
  }
  std::sort(units.begin(), units.end(), [](const Unit<Int>& a, const Unit<Int>& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.ell != b.ell) return a.ell < b.ell;
    return a.gamma < b.gamma;
  });
  return units;
}

enum class Mode { kAll, kFirst };

constexpr std::size_t kBucketThreshold = 64;

template <class Int>
class Search {
 public:
  Search(const std::vector<Unit<Int>>& units, Mode mode, u64 node_cap)
      : mode_(mode), node_cap_(node_cap) {
    // by_two_adic_[t] keeps, in value order, the units a cofactor with t
    // factors of two can still take. Short lists are scanned whole.
    unsigned top = 0;
    if (units.size() > kBucketThreshold) {
      for (const auto& u : units) top = std::max(top, u.value_two_adic);
    }
    by_two_adic_.resize(top + 1);
    for (unsigned t = 0; t <= top; ++t) {
      for (const auto& u : units) {
        if (u.value_two_adic <= t || top == 0) by_two_adic_[t].push_back(&u);
      }
    }
  }

  void run(const Int& n) {
    path_.clear();
    visit(n, Int(0), two_adic(n));
  }

  std::vector<Int> solutions;
  std::vector<std::vector<const Unit<Int>*>> certificates;
  u64 nodes = 0;
  u64 paths = 0;
  unsigned max_depth = 0;

 private:
  void visit(const Int& remaining, const Int& last_ell, unsigned remaining_two_adic) {
    ++nodes;
    if (node_cap_ != 0 && nodes > node_cap_) {
      throw BudgetExceeded("inversion node cap of " + std::to_string(node_cap_) + " exceeded");
    }
    max_depth = std::max(max_depth, static_cast<unsigned>(path_.size()));
    const bool complete = remaining == 1;
    if (complete) {
      emit();
      if (mode_ == Mode::kFirst) {
        ++paths;
        return;
      }
    }
    bool had_child = false;
    const auto& candidates =
        by_two_adic_[std::min<std::size_t>(remaining_two_adic, by_two_adic_.size() - 1)];
    for (const Unit<Int>* u : candidates) {
      if (u->value > remaining) break;
      if (u->ell <= last_ell || u->value_two_adic > remaining_two_adic) continue;
      if (!divides(u->value, remaining)) continue;
      had_child = true;
      path_.push_back(u);
      visit(exact_quotient(remaining, u->value), u->ell,
            remaining_two_adic - u->value_two_adic);
      path_.pop_back();
      if (done()) return;
    }
    if (complete || !had_child) ++paths;
  }

  void emit() {
    Int m = 1;
    for (const Unit<Int>* u : path_) {
      for (unsigned i = 0; i <= u->gamma; ++i) m *= u->ell;
    }
    solutions.push_back(std::move(m));
    if (mode_ == Mode::kFirst) certificates.push_back(path_);
  }

  bool done() const { return mode_ == Mode::kFirst && !solutions.empty(); }

  std::vector<std::vector<const Unit<Int>*>> by_two_adic_;
  Mode mode_;
  u64 node_cap_;
  std::vector<const Unit<Int>*> path_;
};

std::vector<Natural> natural_divisors(const Factorization& f) { return divisors(f); }

template <class Int>
std::vector<Int> divisors_as(const Factorization& f) {
  if constexpr (std::is_same_v<Int, u64>) {
    return divisors_u64(f);
  } else {
    return natural_divisors(f);
  }
}

template <class Int>
Int value_as(const Factorization& f) {
  if constexpr (std::is_same_v<Int, u64>) {
    return to_u64(f.value());
  } else {
    return f.value();
  }
}

template <class Int>
PreimageSet invert_impl(const Factorization& f, const InvertOptions& options) {
  const Int n = value_as<Int>(f);
  const auto units = find_units(n, divisors_as<Int>(f));
  Search<Int> search(units, Mode::kAll, options.node_cap);
  search.run(n);

  std::sort(search.solutions.begin(), search.solutions.end());
  PreimageSet out;
  out.n = to_natural(n);
  out.solutions.reserve(search.solutions.size());
  for (const Int& m : search.solutions) out.solutions.push_back(to_natural(m));
  out.nodes_explored = search.nodes;
  out.paths_explored = search.paths;
  out.max_depth = search.max_depth;
  return out;
}

template <class Int>
std::optional<Factorization> certificate_impl(const Factorization& f) {
  const Int n = value_as<Int>(f);
  const auto units = find_units(n, divisors_as<Int>(f));
  Search<Int> search(units, Mode::kFirst, 0);
  search.run(n);
  if (search.solutions.empty()) return std::nullopt;
  std::vector<PrimePower> entries;
  for (const Unit<Int>* u : search.certificates.front()) {
    entries.push_back({to_natural(u->ell), u->gamma + 1});
  }
  return Factorization::assume_valid(std::move(entries));
}

bool odd_above_one(const Natural& n) { return n > 1 && mpz_odd_p(n.get_mpz_t()); }

bool use_word_path(const Natural& n) { return n < kWordPathLimit; }

void append_json_number(std::string& out, const Natural& v) { out += to_decimal(v); }

}  // namespace

// ---------------------------------------------------------------------------

PrimePowerUnit PrimePowerUnit::make(const Natural& ell, unsigned gamma) {
  Natural v;
  mpz_pow_ui(v.get_mpz_t(), ell.get_mpz_t(), gamma);
  v *= ell - 1;
  return {ell, gamma, std::move(v)};
}

Natural PrimePowerUnit::solution_factor() const {
  Natural v;
  mpz_pow_ui(v.get_mpz_t(), ell.get_mpz_t(), gamma + 1);
  return v;
}

UnitIndex::UnitIndex(std::vector<PrimePowerUnit> units) : units_(std::move(units)) {
  std::sort(units_.begin(), units_.end(), [](const PrimePowerUnit& a, const PrimePowerUnit& b) {
    return std::tie(a.value, a.ell, a.gamma) < std::tie(b.value, b.ell, b.gamma);
  });
}

std::span<const PrimePowerUnit> UnitIndex::units_for(const Natural& e) const {
  auto lo = std::lower_bound(units_.begin(), units_.end(), e,
                             [](const PrimePowerUnit& u, const Natural& v) { return u.value < v; });
  auto hi = lo;
  while (hi != units_.end() && hi->value == e) ++hi;
  return {lo, hi};
}

std::size_t UnitIndex::max_bucket() const {
  std::size_t best = 0;
  for (std::size_t i = 0; i < units_.size();) {
    std::size_t j = i;
    while (j < units_.size() && units_[j].value == units_[i].value) ++j;
    best = std::max(best, j - i);
    i = j;
  }
  return best;
}

UnitIndex build_unit_index(const Factorization& f, std::span<const Natural> divs) {
  const Natural n = f.value();
  const std::vector<Natural> dv(divs.begin(), divs.end());
  std::vector<PrimePowerUnit> units;
  for (const auto& u : find_units(n, dv)) {
    units.push_back({u.ell, u.gamma, u.value});
  }
  return UnitIndex(std::move(units));
}

PreimageSet invert(const Factorization& f, const InvertOptions& options) {
  const Natural n = f.value();
  if (options.odd_shortcut && odd_above_one(n)) {
    PreimageSet empty;
    empty.n = n;
    return empty;
  }
  return use_word_path(n) ? invert_impl<u64>(f, options) : invert_impl<Natural>(f, options);
}

PreimageSet invert_value(const Natural& n, const InvertOptions& options,
                         const FactorConfig& factoring) {
  return invert(factorize(n, factoring), options);
}

std::optional<Factorization> find_certificate(const Factorization& f) {
  const Natural n = f.value();
  if (odd_above_one(n)) return std::nullopt;
  return use_word_path(n) ? certificate_impl<u64>(f) : certificate_impl<Natural>(f);
}

bool is_totient(const Factorization& f) { return find_certificate(f).has_value(); }

bool verify_certificate(const Natural& n, std::span<const PrimePower> m_fact) {
  if (!is_valid_factorization(m_fact)) return false;
  return euler_phi(m_fact) == n;
}

std::uint64_t psi_star_count(const Factorization& f) {
  const auto entries = f.entries();
  std::vector<unsigned> exps(entries.size(), 0);
  std::uint64_t total = 0;
  for (;;) {
    std::vector<PrimePower> d;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (exps[i] > 0) d.push_back({entries[i].prime, exps[i]});
    }
    total += invert(Factorization::assume_valid(std::move(d))).solutions.size();
    std::size_t i = 0;
    while (i < entries.size() && exps[i] == entries[i].exponent) exps[i++] = 0;
    if (i == entries.size()) break;
    ++exps[i];
  }
  return total;
}

std::string to_json(const PreimageSet& set) {
  std::string out = "{\"n\":";
  append_json_number(out, set.n);
  out += ",\"solutions\":[";
  for (std::size_t i = 0; i < set.solutions.size(); ++i) {
    if (i) out += ',';
    append_json_number(out, set.solutions[i]);
  }
  out += "],\"nodes_explored\":" + std::to_string(set.nodes_explored);
  out += ",\"paths_explored\":" + std::to_string(set.paths_explored) + "}";
  return out;
}

std::string format_solutions(const PreimageSet& set) {
  std::string out;
  for (const auto& m : set.solutions) {
    if (!out.empty()) out += ' ';
    out += to_decimal(m);
  }
  return out;
}

}  // namespace totient
