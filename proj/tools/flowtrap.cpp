// flowtrap command line front end.
//
// Subcommands:
//   solve       run the grid-trapping solver on a builtin objective
//   chain-bench race low-adaptivity baselines against a chain instance
//   grid-bench  failure-rate surface for round-limited grid search
//   verify      run the full self-check battery
//
// Exit codes: 0 success, 2 invalid config, 3 resource limit exceeded,
// 4 oracle or solver contract violation, 5 verification failure.

#include <CLI11.hpp>

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flowtrap/baselines.hpp"
#include "flowtrap/chain.hpp"
#include "flowtrap/diagnostics.hpp"
#include "flowtrap/errors.hpp"
#include "flowtrap/geometry.hpp"
#include "flowtrap/gridpath.hpp"
#include "flowtrap/oracle.hpp"
#include "flowtrap/rng.hpp"
#include "flowtrap/trap.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw flowtrap::ConfigError("cannot open output file: " + path);
  }
  out << text;
  if (!out) {
    throw flowtrap::ConfigError("failed writing output file: " + path);
  }
}

// 95% Wilson score interval for `failures` out of `trials`.
std::pair<double, double> wilson_interval(int failures, int trials) {
  if (trials <= 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(failures) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a * 0x9e3779b97f4a7c15ULL + b + 0x7f4a7c15ULL;
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  return x;
}

// The solver's unconstrained mode requires f >= 0 everywhere. The chain
// value is bounded below by amplitude * (g(0) - 12 r), so lifting by
// amplitude * (12 r + 2.07) > amplitude * (12 r - g(0)) makes the whole
// landscape nonnegative without touching gradients or progress structure.
class ShiftedChain final : public flowtrap::Objective {
 public:
  explicit ShiftedChain(flowtrap::ChainOracle oracle)
      : oracle_(std::move(oracle)),
        shift_(oracle_.amplitude() *
               (12.0 * oracle_.partition().r() + 2.07)) {}

  int dim() const override { return oracle_.dim(); }
  flowtrap::Domain domain() const override { return oracle_.domain(); }
  double lipschitz() const override { return oracle_.lipschitz(); }
  double value(std::span<const double> x) const override {
    return oracle_.value(x) + shift_;
  }
  bool gradient(std::span<const double> x,
                std::span<double> out) const override {
    return oracle_.gradient(x, out);
  }
  std::string name() const override { return oracle_.name(); }

  double shift() const { return shift_; }

 private:
  flowtrap::ChainOracle oracle_;
  double shift_;
};

// ---------------------------------------------------------------------------
// solve

struct SolveOptions {
  std::string func = "quadratic";
  std::string mode = "cube";
  int d = 2;
  int k = 1;
  int d0 = 1;
  double eps = 0.1;
  double lipschitz = 1.0;
  bool lipschitz_set = false;
  bool mode_set = false;
  std::vector<double> x0;
  std::vector<double> center;
  std::uint64_t seed = 1;
  int trials = 1;
  int boundary_samples = 0;
  std::string out;
};

int run_one_solve(const SolveOptions& opt, std::uint64_t seed,
                  const std::string& out_prefix) {
  flowtrap::Rng rng(seed);

  flowtrap::SolveConfig cfg;
  cfg.eps = opt.eps;
  cfg.d = opt.d;
  cfg.k = opt.k;
  cfg.net_cap = flowtrap::net_cap_from_env();
  cfg.boundary_samples = opt.boundary_samples;
  cfg.instrument_seed = mix_seed(seed, 0xb0a2d);

  std::unique_ptr<flowtrap::Objective> objective;
  if (opt.func == "chain") {
    if (opt.mode_set && opt.mode == "cube") {
      throw flowtrap::ConfigError(
          "the chain objective lives on all of R^d; use --mode "
          "unconstrained");
    }
    cfg.mode = flowtrap::SolveMode::unconstrained;
    auto partition = flowtrap::sample_partition(opt.d, opt.d0, seed);
    objective =
        std::make_unique<ShiftedChain>(flowtrap::ChainOracle(partition));
    cfg.lipschitz = opt.lipschitz_set ? opt.lipschitz : objective->lipschitz();
  } else {
    cfg.mode = opt.mode == "cube" ? flowtrap::SolveMode::cube
                                  : flowtrap::SolveMode::unconstrained;
    cfg.lipschitz = opt.lipschitz;
    const auto domain = cfg.mode == flowtrap::SolveMode::cube
                            ? flowtrap::Domain::unit_cube
                            : flowtrap::Domain::all_space;
    std::vector<double> center = opt.center;
    if (center.empty()) {
      center.resize(opt.d);
      for (double& c : center) {
        c = cfg.mode == flowtrap::SolveMode::cube
                ? flowtrap::uniform_real(rng, 0.25, 0.75)
                : flowtrap::uniform_real(rng, -0.5, 0.5);
      }
    } else if (static_cast<int>(center.size()) != opt.d) {
      throw flowtrap::ConfigError("--center must have exactly d values");
    }
    objective =
        flowtrap::make_builtin(opt.func, std::move(center), opt.lipschitz,
                               domain);
  }

  cfg.x0 = opt.x0;
  if (cfg.x0.empty()) {
    cfg.x0.resize(opt.d);
    for (double& c : cfg.x0) {
      c = cfg.mode == flowtrap::SolveMode::cube
              ? flowtrap::uniform_real(rng, 0.05, 0.95)
              : flowtrap::uniform_real(rng, -1.0, 1.0);
    }
  } else if (static_cast<int>(cfg.x0.size()) != opt.d) {
    throw flowtrap::ConfigError("--x0 must have exactly d values");
  }

  flowtrap::BatchSession session(*objective);
  const auto start = Clock::now();
  const flowtrap::SolveResult result = flowtrap::solve(cfg, session);
  const double wall = elapsed_ms(start);

  std::printf(
      "solve func=%s mode=%s d=%d k=%d eps=%g L=%g seed=%" PRIu64 "\n",
      opt.func.c_str(),
      cfg.mode == flowtrap::SolveMode::cube ? "cube" : "unconstrained",
      opt.d, opt.k, opt.eps, cfg.lipschitz, seed);
  std::printf(
      "  rounds=%d/%d queries=%" PRIu64 " f=%.6g grad_norm=%.6g (%s) "
      "verified=%s wall_ms=%.1f\n",
      result.rounds_algorithm, result.rounds_total, result.ledger.total(),
      result.f_x, result.grad_norm, result.grad_is_fd ? "fd" : "analytic",
      result.verified ? "yes" : "no", wall);

  if (!out_prefix.empty()) {
    const std::string trace_path = out_prefix + ".trace.csv";
    const std::string summary_path = out_prefix + ".summary.json";
    const std::string ledger_path = out_prefix + ".ledger.csv";
    write_text_file(trace_path, flowtrap::trace_to_csv(cfg, result));
    write_text_file(summary_path,
                    flowtrap::summary_to_json(cfg, result, opt.func, seed));
    write_text_file(ledger_path, result.ledger.to_csv());
    std::printf("  wrote %s %s %s\n", trace_path.c_str(),
                summary_path.c_str(), ledger_path.c_str());
  }

  if (!result.verified) {
    throw flowtrap::VerifyError(
        "output gradient norm " + format_g17(result.grad_norm) +
        " exceeds eps " + format_g17(opt.eps));
  }
  return 0;
}

int cmd_solve(const SolveOptions& opt) {
  if (opt.trials < 1) {
    throw flowtrap::ConfigError("--trials must be at least 1");
  }
  for (int i = 0; i < opt.trials; ++i) {
    const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(i);
    std::string prefix = opt.out;
    if (!prefix.empty() && opt.trials > 1) {
      prefix += "-t" + std::to_string(i);
    }
    run_one_solve(opt, seed, prefix);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// chain-bench

struct ChainBenchOptions {
  int d = 48;
  int d0 = 4;
  int rounds = 20;
  std::uint64_t q = 64;
  int trials = 20;
  std::uint64_t seed = 1;
  std::string baseline = "both";
  double scale = 1.0;
  bool scaled = false;
  double eps = 0.05;
  double delta = 200.0;
  int p = 1;
  double lipschitz_p = 1.0;
  double l_p = 1.0;
  std::string out;
};

flowtrap::ChainOracle build_bench_oracle(const ChainBenchOptions& opt,
                                         std::uint64_t seed) {
  if (opt.scaled) {
    return flowtrap::make_scaled_oracle(opt.eps, opt.delta, opt.lipschitz_p,
                                        opt.p, opt.l_p, opt.d, seed);
  }
  return flowtrap::ChainOracle(flowtrap::sample_partition(opt.d, opt.d0, seed));
}

int cmd_chain_bench(const ChainBenchOptions& opt) {
  if (opt.rounds < 0) throw flowtrap::ConfigError("--rounds must be >= 0");
  if (opt.trials < 1) throw flowtrap::ConfigError("--trials must be >= 1");
  if (opt.q < 1) throw flowtrap::ConfigError("--q must be >= 1");

  std::vector<std::string> baselines;
  if (opt.baseline == "both") {
    baselines = {"parallel-random-search", "batched-fd-gradient-descent"};
  } else {
    baselines = {opt.baseline};
  }

  std::string csv = "# flowtrap.chainbench.v1\n";
  csv += "baseline,seed,round,progress_index,queries\n";

  const auto start = Clock::now();
  for (const auto& name : baselines) {
    int max_final = 0;
    int lagging_violations = 0;
    int lagging_checks = 0;
    for (int trial = 0; trial < opt.trials; ++trial) {
      const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(trial);
      const auto oracle = build_bench_oracle(opt, seed);
      const std::uint64_t run_seed = mix_seed(seed, 1);
      flowtrap::BaselineResult run;
      if (name == "parallel-random-search") {
        run = flowtrap::random_search_baseline(oracle, opt.rounds, opt.q,
                                               opt.scale, run_seed);
      } else if (name == "batched-fd-gradient-descent") {
        run = flowtrap::fd_descent_baseline(oracle, opt.rounds, opt.q);
      } else {
        throw flowtrap::ConfigError("unknown baseline: " + name);
      }
      std::uint64_t cum = 0;
      for (int t = 0; t < static_cast<int>(run.progress.size()); ++t) {
        if (t > 0) cum = run.ledger.rounds()[t - 1].cumulative;
        char row[160];
        std::snprintf(row, sizeof(row),
                      "%s,%" PRIu64 ",%d,%d,%" PRIu64 "\n", name.c_str(),
                      seed, t, run.progress[t], cum);
        csv += row;
        ++lagging_checks;
        if (run.progress[t] > 2 * t) ++lagging_violations;
      }
      max_final = std::max(max_final, run.progress.back());
    }
    std::printf(
        "%s: trials=%d rounds=%d q=%" PRIu64 " max_final_index=%d "
        "index>2t at %d/%d round checkpoints\n",
        name.c_str(), opt.trials, opt.rounds, opt.q, max_final,
        lagging_violations, lagging_checks);
  }
  std::printf("chain-bench wall_ms=%.1f\n", elapsed_ms(start));

  if (!opt.out.empty()) {
    write_text_file(opt.out, csv);
    std::printf("wrote %s\n", opt.out.c_str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// grid-bench

struct GridBenchOptions {
  int n = 8;
  int d = 2;
  std::vector<int> ks = {1, 2, 4, 8};
  std::vector<std::uint64_t> qs = {1, 2, 4};
  std::string strategy = "frontier";
  int trials = 50;
  std::uint64_t seed = 1;
  std::string out;
  std::string surface_out;
};

int cmd_grid_bench(const GridBenchOptions& opt) {
  if (opt.trials < 1) throw flowtrap::ConfigError("--trials must be >= 1");
  if (opt.ks.empty() || opt.qs.empty()) {
    throw flowtrap::ConfigError("--k and --q need at least one value");
  }
  const flowtrap::Strategy strategy = flowtrap::parse_strategy(opt.strategy);

  std::string runs_csv = flowtrap::grid_experiment_csv_header();
  std::string surface_csv =
      "# flowtrap.gridsurface.v1\n"
      "n,d,strategy,trials,k,q,failures,failure_rate,ci_lo,ci_hi\n";

  std::printf("grid-bench n=%d d=%d strategy=%s trials=%d\n", opt.n, opt.d,
              opt.strategy.c_str(), opt.trials);
  std::printf("%6s %10s %9s %13s %23s %14s\n", "k", "q", "failures",
              "failure_rate", "95% CI", "theory_q");

  const auto start = Clock::now();
  for (int k : opt.ks) {
    for (std::uint64_t q : opt.qs) {
      int failures = 0;
      for (int trial = 0; trial < opt.trials; ++trial) {
        const std::uint64_t path_seed =
            opt.seed + static_cast<std::uint64_t>(trial);
        flowtrap::PathOracle oracle(
            flowtrap::random_monotone_path(opt.n, opt.d, path_seed));
        const std::uint64_t search_seed =
            mix_seed(path_seed, mix_seed(static_cast<std::uint64_t>(k), q));
        const auto result =
            flowtrap::round_limited_search(oracle, k, q, strategy,
                                           search_seed);
        if (!result.found) ++failures;
        runs_csv += flowtrap::grid_experiment_csv_row(opt.n, opt.d, k, q,
                                                      path_seed, result);
      }
      const double rate = static_cast<double>(failures) / opt.trials;
      const auto [lo, hi] = wilson_interval(failures, opt.trials);
      std::string theory = "-";
      if (opt.d >= 2) {
        theory = format_g17(flowtrap::theorem_query_scale(opt.n, opt.d, k));
        if (theory.size() > 12) theory.resize(12);
      }
      std::printf("%6d %10" PRIu64 " %9d %13.4f %11.4f,%10.4f %14s\n", k, q,
                  failures, rate, lo, hi, theory.c_str());
      char row[256];
      std::snprintf(row, sizeof(row),
                    "%d,%d,%s,%d,%d,%" PRIu64 ",%d,%s,%s,%s\n", opt.n, opt.d,
                    opt.strategy.c_str(), opt.trials, k, q, failures,
                    format_g17(rate).c_str(), format_g17(lo).c_str(),
                    format_g17(hi).c_str());
      surface_csv += row;
    }
  }
  std::printf("grid-bench wall_ms=%.1f\n", elapsed_ms(start));

  if (!opt.out.empty()) {
    write_text_file(opt.out, runs_csv);
    std::printf("wrote %s\n", opt.out.c_str());
  }
  if (!opt.surface_out.empty()) {
    write_text_file(opt.surface_out, surface_csv);
    std::printf("wrote %s\n", opt.surface_out.c_str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  bool fast = false;
  std::uint64_t seed = 20260814;
};

int cmd_verify(const VerifyOptions& opt) {
  flowtrap::DiagnosticsOptions options;
  options.seed = opt.seed;
  if (opt.fast) {
    options.threshold_grid = 64;
    options.bound_samples = 500;
    options.contraction_samples = 100;
    options.gradient_samples = 40;
    options.value_gap_samples = 2000;
    options.floor_samples = 100;
    options.fd_samples = 5;
  }
  const auto reports = flowtrap::run_all_checks(options);
  std::fputs(flowtrap::format_report(reports).c_str(), stdout);
  if (!flowtrap::all_passed(reports)) {
    throw flowtrap::VerifyError("one or more diagnostic suites failed");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flowtrap: parallel stationary-point search toolkit"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  auto* solve_cmd =
      app.add_subcommand("solve", "run the grid-trapping solver");
  solve_cmd->add_option("--func", solve_opt.func, "objective")
      ->check(CLI::IsMember({"quadratic", "cosine", "chain"}))
      ->capture_default_str();
  auto* mode_opt =
      solve_cmd->add_option("--mode", solve_opt.mode, "search domain")
          ->check(CLI::IsMember({"cube", "unconstrained"}))
          ->capture_default_str();
  solve_cmd->add_option("--d", solve_opt.d, "dimension")
      ->capture_default_str();
  solve_cmd->add_option("--k", solve_opt.k, "trap iterations (rounds)")
      ->capture_default_str();
  solve_cmd->add_option("--d0", solve_opt.d0, "chain block size")
      ->capture_default_str();
  solve_cmd->add_option("--eps", solve_opt.eps, "target gradient norm")
      ->capture_default_str();
  auto* lip_opt =
      solve_cmd
          ->add_option("--lipschitz", solve_opt.lipschitz,
                       "gradient Lipschitz constant (chain: defaults to the "
                       "oracle's own)")
          ->capture_default_str();
  solve_cmd->add_option("--x0", solve_opt.x0,
                        "start point (comma separated; default seeded)")
      ->delimiter(',');
  solve_cmd->add_option("--center", solve_opt.center,
                        "builtin objective center (comma separated)")
      ->delimiter(',');
  solve_cmd->add_option("--seed", solve_opt.seed, "random seed")
      ->capture_default_str();
  solve_cmd->add_option("--trials", solve_opt.trials,
                        "independent runs with seeds seed..seed+trials-1")
      ->capture_default_str();
  solve_cmd->add_option("--boundary-samples", solve_opt.boundary_samples,
                        "per-round boundary unreachability probes")
      ->capture_default_str();
  solve_cmd->add_option("--out", solve_opt.out,
                        "output prefix for .trace.csv/.summary.json/"
                        ".ledger.csv");

  ChainBenchOptions chain_opt;
  auto* chain_cmd = app.add_subcommand(
      "chain-bench", "per-round progress of low-adaptivity baselines");
  chain_cmd->add_option("--d", chain_opt.d, "ambient dimension")
      ->capture_default_str();
  chain_cmd->add_option("--d0", chain_opt.d0, "chain block size")
      ->capture_default_str();
  chain_cmd->add_option("--rounds", chain_opt.rounds, "rounds per trial")
      ->capture_default_str();
  chain_cmd->add_option("--q", chain_opt.q, "queries per round")
      ->capture_default_str();
  chain_cmd->add_option("--trials", chain_opt.trials, "independent seeds")
      ->capture_default_str();
  chain_cmd->add_option("--seed", chain_opt.seed, "base seed")
      ->capture_default_str();
  chain_cmd
      ->add_option("--baseline", chain_opt.baseline, "baseline to run")
      ->check(CLI::IsMember({"parallel-random-search",
                             "batched-fd-gradient-descent", "both"}))
      ->capture_default_str();
  chain_cmd
      ->add_option("--scale", chain_opt.scale,
                   "random-search proposal step length in units of sigma")
      ->capture_default_str();
  chain_cmd->add_flag("--scaled", chain_opt.scaled,
                      "build the instance from the accuracy targets below "
                      "(enforces the dimension gate)");
  chain_cmd->add_option("--eps", chain_opt.eps, "scaled: target accuracy")
      ->capture_default_str();
  chain_cmd->add_option("--delta", chain_opt.delta, "scaled: initial gap")
      ->capture_default_str();
  chain_cmd->add_option("--p", chain_opt.p, "scaled: smoothness order")
      ->capture_default_str();
  chain_cmd
      ->add_option("--lipschitz-p", chain_opt.lipschitz_p,
                   "scaled: order-p Lipschitz constant")
      ->capture_default_str();
  chain_cmd->add_option("--l-p", chain_opt.l_p, "scaled: chain constant")
      ->capture_default_str();
  chain_cmd->add_option("--out", chain_opt.out, "CSV output path");

  GridBenchOptions grid_opt;
  auto* grid_cmd = app.add_subcommand(
      "grid-bench", "failure-rate surface for round-limited grid search");
  grid_cmd->add_option("--n", grid_opt.n, "grid side length")
      ->capture_default_str();
  grid_cmd->add_option("--d", grid_opt.d, "grid dimension")
      ->capture_default_str();
  grid_cmd->add_option("--k", grid_opt.ks, "round budgets (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  grid_cmd
      ->add_option("--q", grid_opt.qs,
                   "queries-per-round budgets (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  grid_cmd->add_option("--strategy", grid_opt.strategy, "search strategy")
      ->check(CLI::IsMember({"frontier", "random-probe", "exhaustive"}))
      ->capture_default_str();
  grid_cmd->add_option("--trials", grid_opt.trials, "paths per cell")
      ->capture_default_str();
  grid_cmd->add_option("--seed", grid_opt.seed, "base path seed")
      ->capture_default_str();
  grid_cmd->add_option("--out", grid_opt.out, "per-run CSV output path");
  grid_cmd->add_option("--surface-out", grid_opt.surface_out,
                       "failure-rate surface CSV output path");

  VerifyOptions verify_opt;
  auto* verify_cmd =
      app.add_subcommand("verify", "run the full self-check battery");
  verify_cmd->add_flag("--fast", verify_opt.fast,
                       "smaller sample sizes (smoke mode)");
  verify_cmd->add_option("--seed", verify_opt.seed, "sampling seed")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  solve_opt.lipschitz_set = lip_opt->count() > 0;
  solve_opt.mode_set = mode_opt->count() > 0;

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_opt);
    if (chain_cmd->parsed()) return cmd_chain_bench(chain_opt);
    if (grid_cmd->parsed()) return cmd_grid_bench(grid_opt);
    if (verify_cmd->parsed()) return cmd_verify(verify_opt);
  } catch (const flowtrap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const flowtrap::ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const flowtrap::ContractError& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 4;
  } catch (const flowtrap::VerifyError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
