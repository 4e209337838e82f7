#include "totient/reduction.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <sstream>

#include "totient/inverter.hpp"

namespace totient::reduction {

namespace {

using u64 = std::uint64_t;

std::vector<u64> primes_above(u64 start, std::size_t count) {
  std::vector<u64> out;
  for (u64 c = start + 1; out.size() < count; ++c) {
    if (is_prime_u64(c)) out.push_back(c);
  }
  return out;
}

Natural pow2(u64 e) {
  Natural r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

Natural pow2_mod(const Natural& e, const Natural& m) {
  Natural r;
  const Natural two = 2;
  mpz_powm(r.get_mpz_t(), two.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

Natural mod_nonneg(const Natural& x, const Natural& m) {
  Natural r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

u64 inverse_mod(u64 a, u64 m) {
  Natural r;
  const Natural na = from_u64(a);
  const Natural nm = from_u64(m);
  if (mpz_invert(r.get_mpz_t(), na.get_mpz_t(), nm.get_mpz_t()) == 0) {
    throw std::logic_error("inverse_mod: not invertible");
  }
  return to_u64(r);
}

std::size_t bit_length(const Natural& n) { return mpz_sizeinbase(n.get_mpz_t(), 2); }

Natural product_of(const std::vector<Natural>& values, u64 mask) {
  Natural p = 1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (mask >> i & 1) p *= values[i];
  }
  return p;
}

u64 subset_sum(std::span<const u64> xs, u64 mask) {
  u64 s = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (mask >> i & 1) s += xs[i];
  }
  return s;
}

void require_small(std::size_t count) {
  if (count > 40) throw std::invalid_argument("instance too large for subset enumeration");
}

// Flags t in [0, bound) for which a + M·t has no prime factor below 2^16.
std::vector<bool> sieve_progression(const Natural& a, const Natural& modulus, u64 bound) {
  std::vector<bool> alive(bound, true);
  for (u64 q = 2; q < (u64{1} << 16); ++q) {
    if (!is_prime_u64(q)) continue;
    const u64 m_mod = mpz_fdiv_ui(modulus.get_mpz_t(), q);
    const u64 a_mod = mpz_fdiv_ui(a.get_mpz_t(), q);
    if (m_mod == 0) continue;  // a + M·t ≡ a (mod q), never 0 since gcd(a, M) = 1
    // a + M·t ≡ 0  ⇔  t ≡ −a·M^{-1} (mod q)
    u64 start = (q - a_mod) % q * inverse_mod(m_mod, q) % q;
    if (start == 0 && a == q) start = q;
    for (u64 t = start; t < bound; t += q) alive[t] = false;
  }
  return alive;
}

std::string mask_string(u64 mask, std::size_t count) {
  std::string s = "{";
  bool first = true;
  for (std::size_t i = 0; i < count; ++i) {
    if (!(mask >> i & 1)) continue;
    if (!first) s += ',';
    s += std::to_string(i + 1);
    first = false;
  }
  return s + "}";
}

}  // namespace

// ---------------------------------------------------------------------------

PartitionInstance::PartitionInstance(std::vector<u64> xs) : xs_(std::move(xs)) {
  if (xs_.size() < 2 || xs_.size() % 2 != 0) {
    throw std::invalid_argument("partition instance needs an even number (>= 2) of values");
  }
  for (u64 x : xs_) total_ += x;
  if (total_ % 2 != 0) throw std::invalid_argument("partition instance total must be even");
}

PartitionInstance parse_instance(std::string_view text) {
  std::vector<u64> xs;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Natural v;
    try {
      v = parse_natural(line);
    } catch (const ParseError&) {
      throw ParseError("instance line " + std::to_string(line_no) + ": malformed integer '" +
                       line + "'");
    }
    if (!fits_u64(v)) throw ParseError("instance line " + std::to_string(line_no) + ": too large");
    xs.push_back(to_u64(v));
  }
  return PartitionInstance(std::move(xs));
}

PartitionInstance normalize(const PartitionInstance& inst) {
  if (inst.k() % 2 == 1) return inst;
  std::vector<u64> xs(inst.xs().begin(), inst.xs().end());
  xs.push_back(0);
  xs.push_back(0);
  return PartitionInstance(std::move(xs));
}

std::optional<u64> balanced_subset(const PartitionInstance& inst) {
  const auto xs = inst.xs();
  require_small(xs.size());
  const u64 full = (u64{1} << xs.size()) - 1;
  for (u64 mask = 0; mask <= full; ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != inst.k()) continue;
    if (subset_sum(xs, mask) == inst.half()) return mask;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

CongruenceSystem build_system(const PartitionInstance& inst, const SystemLimits& limits) {
  const std::size_t k = inst.k();
  if (k % 2 == 0) throw std::invalid_argument("build_system: k must be odd; normalize first");

  CongruenceSystem sys;
  sys.k = k;
  sys.r_primes = primes_above(k, k - 1);

  const Natural bound = 2 * (Natural(1) + from_u64(inst.total()));
  const u64 u_start = sys.r_primes.empty() ? k : sys.r_primes.back();
  Natural u_product = 1;
  for (u64 c = u_start + 1; u_product <= bound; ++c) {
    if (!is_prime_u64(c)) continue;
    sys.u_primes.push_back(c);
    u_product *= from_u64(c);
  }
  const u64 v_count = sys.u_primes.back();
  sys.v_primes = primes_above(sys.u_primes.back(), v_count);

  for (std::size_t j = 1; j < k; ++j) {
    const u64 r = sys.r_primes[j - 1];
    u64 g = 0;
    while ((1 + j * g) % (2 * r) != r) ++g;
    sys.g.push_back(g);
  }

  const u64 half = inst.half();
  for (u64 u : sys.u_primes) {
    std::vector<u64> row;
    for (u64 c = 0; c < u; ++c) {
      if (c != half % u) row.push_back(c);
    }
    sys.theta.push_back(std::move(row));
    std::vector<u64> drow;
    for (u64 v : sys.v_primes) drow.push_back(inverse_mod(k % (u * v), u * v));
    sys.delta.push_back(std::move(drow));
  }

  std::size_t bits = 0;
  auto add_component = [&](std::string label, Natural modulus) {
    bits += bit_length(modulus);
    if (bits > limits.max_modulus_bits) {
      throw SystemTooLarge("modulus exceeds " + std::to_string(limits.max_modulus_bits) +
                           " bits at component " + label);
    }
    sys.components.push_back({std::move(label), std::move(modulus)});
  };
  add_component("8", Natural(8));
  add_component("3", Natural(3));
  add_component("5", Natural(5));
  for (std::size_t j = 0; j + 1 < k; ++j) {
    add_component("R" + std::to_string(j + 1), Natural((pow2(sys.r_primes[j]) + 1) / 3));
  }
  for (std::size_t i = 0; i < sys.u_primes.size(); ++i) {
    const u64 u = sys.u_primes[i];
    for (std::size_t j = 0; j < sys.v_primes.size(); ++j) {
      const u64 v = sys.v_primes[j];
      Natural t = pow2(u * v) - 1;
      t /= (pow2(u) - 1) * (pow2(v) - 1);
      add_component("T" + std::to_string(i + 1) + "," + std::to_string(j + 1), std::move(t));
    }
  }

  const auto xs = inst.xs();
  for (std::size_t idx = 0; idx < xs.size(); ++idx) {
    std::vector<Residue> parts;
    parts.reserve(sys.components.size());
    std::size_t c = 0;
    parts.push_back({Natural(1), sys.components[c++].modulus});
    parts.push_back({Natural(2), sys.components[c++].modulus});
    parts.push_back({Natural(4), sys.components[c++].modulus});
    for (std::size_t j = 0; j + 1 < k; ++j) {
      const Natural& m = sys.components[c++].modulus;
      parts.push_back({pow2_mod(from_u64(sys.g[j]), m), m});
    }
    for (std::size_t i = 0; i < sys.u_primes.size(); ++i) {
      const u64 u = sys.u_primes[i];
      for (std::size_t j = 0; j < sys.v_primes.size(); ++j) {
        const Natural& m = sys.components[c++].modulus;
        if (j + 1 > u - 1) {
          parts.push_back({Natural(1), m});
          continue;
        }
        // a ≡ −2^(V·x − δ(V·θ + 1)) (mod T), exponent taken mod U·V
        const u64 v = sys.v_primes[j];
        const Natural uv = from_u64(u * v);
        const Natural delta = from_u64(sys.delta[i][j]);
        const Natural theta = from_u64(sys.theta[i][j]);
        const Natural v_n = from_u64(v);
        const Natural e = mod_nonneg(v_n * from_u64(xs[idx]) - delta * (v_n * theta + 1), uv);
        parts.push_back({mod_nonneg(Natural(-pow2_mod(e, m)), m), m});
      }
    }
    const Residue combined = crt_combine(parts);
    sys.residues.push_back(combined.value);
    if (idx == 0) sys.modulus = combined.modulus;
  }
  return sys;
}

bool components_pairwise_coprime(const CongruenceSystem& sys) {
  Natural g;
  for (std::size_t i = 0; i < sys.components.size(); ++i) {
    for (std::size_t j = i + 1; j < sys.components.size(); ++j) {
      mpz_gcd(g.get_mpz_t(), sys.components[i].modulus.get_mpz_t(),
              sys.components[j].modulus.get_mpz_t());
      if (g != 1) return false;
    }
  }
  return true;
}

std::string dump_system(const CongruenceSystem& sys) {
  std::ostringstream out;
  auto list = [&](const char* key, const std::vector<u64>& values) {
    out << key;
    for (u64 v : values) out << ' ' << v;
    out << '\n';
  };
  out << "k " << sys.k << '\n';
  out << "u_count " << sys.u_primes.size() << '\n';
  out << "modulus_bits " << bit_length(sys.modulus) << '\n';
  list("r_primes", sys.r_primes);
  list("u_primes", sys.u_primes);
  list("v_primes", sys.v_primes);
  list("g", sys.g);
  for (std::size_t i = 0; i < sys.theta.size(); ++i) {
    out << "theta " << (i + 1) << " :";
    for (u64 v : sys.theta[i]) out << ' ' << v;
    out << '\n';
  }
  for (std::size_t i = 0; i < sys.delta.size(); ++i) {
    out << "delta " << (i + 1) << " :";
    for (u64 v : sys.delta[i]) out << ' ' << v;
    out << '\n';
  }
  out << "components " << sys.components.size() << '\n';
  for (const auto& c : sys.components) {
    out << "component " << c.label << ' ' << to_decimal(c.modulus) << '\n';
  }
  out << "M " << to_decimal(sys.modulus) << '\n';
  for (std::size_t i = 0; i < sys.residues.size(); ++i) {
    out << "residue " << (i + 1) << ' ' << to_decimal(sys.residues[i]) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

ConditionReport verify_conditions(const CongruenceSystem& sys, const PartitionInstance& inst,
                                  std::size_t samples, u64 seed) {
  const auto xs = inst.xs();
  const std::size_t count = xs.size();
  require_small(count);
  if (sys.residues.size() != count) {
    throw std::invalid_argument("verify_conditions: system was built for another instance");
  }
  ConditionReport report;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<u64> pick(0, (u64{1} << 32) - 1);
  const u64 full = (u64{1} << count) - 1;
  Natural g;

  auto fail = [&](std::string what) {
    if (report.passed) {
      report.passed = false;
      report.counterexample = std::move(what);
    }
  };

  for (std::size_t s = 0; s < samples && report.passed; ++s) {
    std::vector<Natural> lifts;
    std::vector<u64> shifts;
    for (std::size_t i = 0; i < count; ++i) {
      shifts.push_back(pick(rng));
      lifts.push_back(sys.residues[i] + from_u64(shifts.back()) * sys.modulus);
    }
    auto where = [&] {
      std::string w = " (lift shifts";
      for (u64 c : shifts) w += ' ' + std::to_string(c);
      return w + ")";
    };

    for (u64 mask = 0; mask <= full; ++mask) {
      const std::size_t size = static_cast<std::size_t>(std::popcount(mask));
      if (size > sys.k) continue;
      const Natural value = 2 * product_of(lifts, mask) + 1;
      mpz_gcd(g.get_mpz_t(), value.get_mpz_t(), sys.modulus.get_mpz_t());
      const bool coprime = g == 1;
      const bool expected = size == sys.k && subset_sum(xs, mask) == inst.half();
      ++report.subsets_checked;
      if (coprime != expected) {
        fail("condition0: subset " + mask_string(mask, count) + " gives gcd " +
             (coprime ? "1" : "> 1") + where());
      }
    }

    const Natural all = product_of(lifts, full);
    const Natural four_all = 4 * all;
    for (std::size_t i = 0; i < count; ++i) {
      const Natural d = lifts[i] - 1;
      if (mpz_divisible_p(four_all.get_mpz_t(), d.get_mpz_t())) {
        fail("condition1: N_" + std::to_string(i + 1) + " - 1 divides 4*prod" + where());
      }
    }
    for (const Natural& v : {Natural(2 * all + 1), Natural(four_all + 1)}) {
      mpz_gcd(g.get_mpz_t(), v.get_mpz_t(), sys.modulus.get_mpz_t());
      if (g == 1) fail("condition2: full product gives gcd 1" + where());
    }
    ++report.lifts_checked;
  }
  return report;
}

// ---------------------------------------------------------------------------

std::vector<u64> primes_in_progression(const Natural& a, const Natural& modulus, u64 bound,
                                       u64 seed) {
  const auto alive = sieve_progression(a, modulus, bound);
  const unsigned rounds = search_rounds(mpz_sizeinbase(modulus.get_mpz_t(), 2));
  std::vector<u64> out;
  for (u64 t = 0; t < bound; ++t) {
    if (alive[t] && is_prime(a + from_u64(t) * modulus, rounds, seed)) out.push_back(t);
  }
  return out;
}

PrimeLifts find_prime_lifts(const CongruenceSystem& sys, std::span<const std::size_t> exclude,
                            u64 search_bound, u64 seed) {
  PrimeLifts lifts;
  lifts.shifts.assign(sys.residues.size(), std::nullopt);
  const unsigned rounds = search_rounds(bit_length(sys.modulus));
  for (std::size_t i = 0; i < sys.residues.size(); ++i) {
    if (std::find(exclude.begin(), exclude.end(), i) != exclude.end()) continue;
    const auto alive = sieve_progression(sys.residues[i], sys.modulus, search_bound);
    for (u64 t = 0; t < search_bound; ++t) {
      if (alive[t] && is_prime(sys.residues[i] + from_u64(t) * sys.modulus, rounds, seed)) {
        lifts.shifts[i] = t;
        break;
      }
    }
    if (!lifts.shifts[i]) lifts.exhausted.push_back(i);
  }
  return lifts;
}

CandidateBatch assemble_candidates(const CongruenceSystem& sys, const PartitionInstance& inst,
                                   const PrimeLifts& lifts, const SearchBounds& bounds,
                                   u64 seed) {
  const std::size_t count = sys.residues.size();
  const std::size_t k = sys.k;
  require_small(count);
  if (inst.xs().size() != count) {
    throw std::invalid_argument("assemble_candidates: system was built for another instance");
  }

  std::vector<Natural> lifted(count);
  for (std::size_t i = 1; i < count; ++i) {
    if (!lifts.shifts[i]) {
      throw std::invalid_argument("assemble_candidates: missing prime lift for index " +
                                  std::to_string(i + 1));
    }
    lifted[i] = sys.residues[i] + from_u64(*lifts.shifts[i]) * sys.modulus;
  }

  const auto xs_first = primes_in_progression(sys.residues[0], sys.modulus, bounds.x, seed);
  CandidateBatch batch;
  const std::size_t last_ell = std::min(k + 2, count);
  const u64 full = (u64{1} << count) - 1;
  for (std::size_t ell = 2; ell <= last_ell; ++ell) {
    const std::size_t partner = ell - 1;
    const auto ys = primes_in_progression(sys.residues[partner], sys.modulus, bounds.y, seed);
    for (u64 x : xs_first) {
      for (u64 y : ys) {
        Candidate c;
        c.ell = ell;
        c.x = x;
        c.y = y;
        c.primes = lifted;
        c.primes[0] = sys.residues[0] + from_u64(x) * sys.modulus;
        c.primes[partner] = sys.residues[partner] + from_u64(y) * sys.modulus;

        for (u64 mask = 0; mask <= full; ++mask) {
          if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
          if (!(mask & 1) || (mask >> partner & 1)) continue;
          c.splits.push_back({mask, 2 * product_of(c.primes, mask) + 1,
                              2 * product_of(c.primes, full & ~mask) + 1});
        }

        std::vector<PrimePower> entries{{Natural(2), 2}};
        c.n_value = 4;
        for (const Natural& p : c.primes) {
          entries.push_back({p, 1});
          c.n_value *= p;
        }
        c.n_factorization = Factorization::assume_valid(std::move(entries));
        batch.candidates.push_back(std::move(c));
      }
    }
  }
  return batch;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kYes:
      return "yes";
    case Verdict::kNo:
      return "no";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Decision decide(const PartitionInstance& input, const SearchBounds& bounds, u64 seed,
                const SystemLimits& limits) {
  const PartitionInstance inst = normalize(input);
  const CongruenceSystem sys = build_system(inst, limits);
  Decision decision;

  const std::size_t first[] = {0};
  const PrimeLifts lifts = find_prime_lifts(sys, first, bounds.lift, seed);
  if (!lifts.complete()) {
    decision.reason = "no prime lift below " + std::to_string(bounds.lift) + " for index " +
                      std::to_string(lifts.exhausted.front() + 1);
    return decision;
  }

  const CandidateBatch batch = assemble_candidates(sys, inst, lifts, bounds, seed);
  for (const Candidate& c : batch.candidates) {
    ++decision.candidates_checked;
    if (auto cert = find_certificate(c.n_factorization)) {
      decision.verdict = Verdict::kYes;
      decision.certificate = std::move(cert);
      decision.n_value = c.n_value;
      decision.reason = "candidate ell=" + std::to_string(c.ell) + " x=" + std::to_string(c.x) +
                        " y=" + std::to_string(c.y) + " is a totient";
      return decision;
    }
  }

  if (batch.candidates.empty()) {
    decision.reason = "no candidates within the (x, y) bounds";
  } else if (balanced_subset(inst)) {
    decision.reason = "all candidates are nontotients but a balanced subset exists; bounds too small";
  } else {
    decision.verdict = Verdict::kNo;
    decision.reason = "all " + std::to_string(batch.candidates.size()) +
                      " candidates are nontotients and no balanced subset exists";
  }
  return decision;
}

}  // namespace totient::reduction
