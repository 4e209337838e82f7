#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "totient/factordemo.hpp"
#include "totient/inverter.hpp"
#include "totient/numcore.hpp"
#include "totient/reduction.hpp"
#include "totient/stats.hpp"

namespace totient::cli {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Natural positive(const std::string& text, const char* name) {
  Natural n = parse_natural(text);
  if (n < 1) throw std::invalid_argument(std::string(name) + " must be at least 1");
  return n;
}

Factorization factorization_of(const std::string& n_text, const std::string& factors) {
  const Natural n = positive(n_text, "N");
  if (factors.empty()) return factorize(n);
  Factorization f(parse_factorization(factors));
  if (f.value() != n) {
    throw std::invalid_argument("--factors multiplies to " + to_decimal(f.value()) + ", not " +
                                to_decimal(n));
  }
  return f;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read file '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write file '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw IoError("cannot write file '" + path + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Totient preimages, statistics, and the reductions built on them.", "totient"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "totient 0.1.0");

  int code = kExitOk;

  // invert
  std::string inv_n;
  std::string inv_factors;
  bool inv_json = false;
  bool inv_full = false;
  auto* invert_cmd = app.add_subcommand("invert", "List every m with phi(m) = N");
  invert_cmd->add_option("N", inv_n, "Target value")->required();
  invert_cmd->add_option("--factors", inv_factors, "Factorization of N, e.g. \"2^2 * 3^3 * 5\"");
  invert_cmd->add_flag("--json", inv_json, "Emit {n, solutions, nodes_explored, paths_explored}");
  invert_cmd->add_flag("--no-odd-shortcut", inv_full, "Search odd N > 1 instead of answering {}");

  // is-totient
  std::string tot_n;
  auto* totient_cmd = app.add_subcommand("is-totient", "Exit 0 if N is a totient, 1 if not");
  totient_cmd->add_option("N", tot_n, "Value to test")->required();

  // certify
  std::string cert_n;
  std::string cert_factors;
  auto* certify_cmd =
      app.add_subcommand("certify", "Check that the given factorization of m has phi(m) = N");
  certify_cmd->add_option("N", cert_n, "Claimed totient value")->required();
  certify_cmd->add_option("--preimage-factors", cert_factors, "Factorization of m")->required();

  // stats
  std::uint64_t st_limit = 0;
  std::string st_out;
  double st_exponent = 4.0;
  auto* stats_cmd = app.add_subcommand("stats", "Write a per-decade CSV sweep up to --limit");
  stats_cmd->add_option("--limit", st_limit, "Largest n in the sweep")->required()->check(
      CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 31));
  stats_cmd->add_option("--out", st_out, "CSV output path")->required();
  stats_cmd->add_option("--exponent", st_exponent, "B in the (ln n)^B slow threshold")
      ->capture_default_str();

  // reduce
  std::string red_input;
  reduction::SearchBounds red_bounds;
  std::uint64_t red_seed = kDefaultSeed;
  std::size_t red_samples = 50;
  std::size_t red_bits = reduction::SystemLimits{}.max_modulus_bits;
  auto* reduce_cmd = app.add_subcommand("reduce", "Partition to totient reduction");
  reduce_cmd->require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", red_input, "Instance file, one integer per line")->required();
    sub->add_option("--seed", red_seed, "Random seed")->capture_default_str();
    sub->add_option("--max-bits", red_bits, "Cap on log2 of the modulus")->capture_default_str();
  };
  auto* build_cmd = reduce_cmd->add_subcommand("build", "Dump the congruence system");
  add_common(build_cmd);
  auto* verify_cmd = reduce_cmd->add_subcommand("verify", "Check the conditions on random lifts");
  add_common(verify_cmd);
  verify_cmd->add_option("--samples", red_samples, "Number of random lifts")->capture_default_str();
  auto* decide_cmd = reduce_cmd->add_subcommand("decide", "Answer the instance via the inverter");
  add_common(decide_cmd);
  std::optional<std::uint64_t> red_bound;
  decide_cmd->add_option("--bound", red_bound, "Shift bound for lifts and for x, y (default 10000)");

  // factor-demo
  std::string fd_n;
  unsigned fd_bits = 0;
  std::uint64_t fd_seed = kDefaultSeed;
  factordemo::OracleBudget fd_budget;
  std::string fd_k_range;
  auto* factor_cmd = app.add_subcommand("factor-demo", "Factor n = pq by inverting phi");
  auto* n_opt = factor_cmd->add_option("--n", fd_n, "Product of two distinct odd primes");
  auto* bits_opt = factor_cmd->add_option("--bits", fd_bits, "Draw p, q with this many bits")
                       ->check(CLI::Range(3u, 512u));
  n_opt->excludes(bits_opt);
  factor_cmd->add_option("--seed", fd_seed, "Random seed")->capture_default_str();
  factor_cmd->add_option("--max-samples", fd_budget.max_samples, "Number of (k1, k2) draws")
      ->capture_default_str();
  factor_cmd->add_option("--node-cap", fd_budget.node_cap, "Per-inversion node cap (0: none)")
      ->capture_default_str();
  factor_cmd->add_option("--k-range", fd_k_range, "Upper end of the k range (default n^3)");
  factor_cmd->add_flag("--tau-filter", fd_budget.tau_filter,
                       "Skip pairs with tau(2k+1) > (ln n)^3");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e, out, err);
    return status == 0 ? kExitOk : kExitError;
  }

  try {
    if (*invert_cmd) {
      const Factorization f = factorization_of(inv_n, inv_factors);
      const PreimageSet set = invert(f, InvertOptions{.odd_shortcut = !inv_full});
      out << (inv_json ? to_json(set) : format_solutions(set)) << '\n';
    } else if (*totient_cmd) {
      const bool yes = is_totient(factorization_of(tot_n, ""));
      out << (yes ? "totient" : "nontotient") << '\n';
      code = yes ? kExitOk : kExitNegative;
    } else if (*certify_cmd) {
      const Natural n = positive(cert_n, "N");
      const auto entries = parse_factorization(cert_factors);
      const bool ok = verify_certificate(n, entries);
      out << (ok ? "valid" : "invalid") << '\n';
      code = ok ? kExitOk : kExitNegative;
    } else if (*stats_cmd) {
      const auto report = stats::sweep(st_limit, st_exponent);
      write_file(st_out, stats::to_csv(report));
      out << "wrote " << report.rows.size() << " rows to " << st_out << '\n';
    } else if (*reduce_cmd) {
      const auto inst = reduction::normalize(reduction::parse_instance(read_file(red_input)));
      const reduction::SystemLimits limits{.max_modulus_bits = red_bits};
      if (*build_cmd) {
        out << reduction::dump_system(reduction::build_system(inst, limits));
      } else if (*verify_cmd) {
        const auto sys = reduction::build_system(inst, limits);
        const auto rep = reduction::verify_conditions(sys, inst, red_samples, red_seed);
        out << (rep.passed ? "pass" : "fail") << " lifts=" << rep.lifts_checked
            << " subsets=" << rep.subsets_checked << " coprime_components="
            << (reduction::components_pairwise_coprime(sys) ? "yes" : "no") << '\n';
        if (!rep.passed) out << "counterexample " << rep.counterexample << '\n';
        code = rep.passed ? kExitOk : kExitNegative;
      } else if (*decide_cmd) {
        if (red_bound) red_bounds = {*red_bound, *red_bound, *red_bound};
        const auto d = reduction::decide(inst, red_bounds, red_seed, limits);
        out << reduction::to_string(d.verdict) << '\n';
        out << "candidates " << d.candidates_checked << '\n';
        if (d.certificate) {
          out << "n " << to_decimal(d.n_value) << '\n';
          out << "certificate " << format_factorization(*d.certificate) << '\n';
        }
        out << "reason " << d.reason << '\n';
        code = d.verdict == reduction::Verdict::kYes  ? kExitOk
               : d.verdict == reduction::Verdict::kNo ? kExitNegative
                                                      : kExitError;
      }
    } else if (*factor_cmd) {
      if (n_opt->count() == 0 && bits_opt->count() == 0) {
        throw std::invalid_argument("factor-demo needs --n or --bits");
      }
      if (!fd_k_range.empty()) fd_budget.k_range = positive(fd_k_range, "--k-range");
      const Natural n = n_opt->count() ? positive(fd_n, "--n")
                                       : factordemo::SemiprimeInstance::random(fd_bits, fd_seed).n;
      const auto rep = factordemo::factor_via_inversion(n, fd_budget, fd_seed);
      out << "n " << to_decimal(n) << '\n';
      out << "samples " << rep.samples_used << '\n';
      if (rep.success) {
        out << "k1 " << to_decimal(rep.k1) << '\n';
        out << "k2 " << to_decimal(rep.k2) << '\n';
        out << "m " << to_decimal(rep.m) << '\n';
        out << "p " << to_decimal(rep.p) << '\n';
        out << "q " << to_decimal(rep.q) << '\n';
      } else {
        out << "failure capped=" << rep.capped << '\n';
        code = kExitError;
      }
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const BudgetExceeded& e) {
    err << "error: budget exceeded: " << e.what() << '\n';
    return kExitError;
  } catch (const reduction::SystemTooLarge& e) {
    err << "error: system too large: " << e.what() << '\n';
    return kExitError;
  } catch (const std::invalid_argument& e) {
    err << "error: invalid input: " << e.what() << '\n';
    return kExitError;
  }
  return code;
}

}  // namespace totient::cli
