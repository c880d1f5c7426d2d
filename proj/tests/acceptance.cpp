// End-to-end acceptance suite: twelve checks covering solver correctness,
// query scaling, schedule and trap invariants, hard-instance bounds,
// baseline progress tracking, grid-path structure, and reproducibility of
// the command line tool. Prints one PASS/FAIL line per check and exits
// nonzero when any fail.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
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

#ifndef FLOWTRAP_CLI_PATH
#error "FLOWTRAP_CLI_PATH must point at the command line binary"
#endif

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return std::string(buf);
}

// Least squares slope of ys against xs.
double lsq_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a * 0x9e3779b97f4a7c15ULL + b + 0x7f4a7c15ULL;
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  return x;
}

// ---------------------------------------------------------------------------
// Checks 1, 4, 5 share one instrumented solver sweep: cube mode, d = 2,
// k in {1,2,3,4}, eps = 1e-2, L = 1, quadratic and cosine objectives with
// 20 seeded (center, start) pairs each, 1000 boundary probes per round.

struct CorrectnessSweep {
  int total_runs = 0;
  int verified_runs = 0;
  long long eps0_violations = 0;
  long long epsk_violations = 0;
  long long diameter_violations = 0;
  long long shrink_violations = 0;
  long long boundary_rounds = 0;
  long long boundary_checked = 0;
  long long boundary_unreachable = 0;
  long long boundary_bad_rounds = 0;
  double seconds = 0.0;
  std::string first_failure;
};

CorrectnessSweep run_correctness_sweep() {
  CorrectnessSweep sweep;
  const auto start = Clock::now();
  const double eps = 1e-2;
  const double slack = 1.0 + 1e-12;
  const char* objectives[] = {"quadratic", "cosine"};
  for (const char* name : objectives) {
    flowtrap::Rng rng(name[0] == 'q' ? 101 : 202);
    for (int pair = 0; pair < 20; ++pair) {
      std::vector<double> center(2), x0(2);
      for (double& c : center) c = flowtrap::uniform_real(rng, 0.2, 0.8);
      for (double& c : x0) c = flowtrap::uniform_real(rng, 0.02, 0.98);
      for (int k = 1; k <= 4; ++k) {
        const auto objective = flowtrap::make_builtin(
            name, center, 1.0, flowtrap::Domain::unit_cube);
        flowtrap::SolveConfig cfg;
        cfg.eps = eps;
        cfg.lipschitz = 1.0;
        cfg.d = 2;
        cfg.k = k;
        cfg.x0 = x0;
        cfg.mode = flowtrap::SolveMode::cube;
        cfg.boundary_samples = 1000;
        cfg.instrument_seed = mix_seed(static_cast<std::uint64_t>(pair), k);
        flowtrap::BatchSession session(*objective);
        const auto result = flowtrap::solve(cfg, session);

        ++sweep.total_runs;
        if (result.verified && result.grad_norm <= eps &&
            !result.grad_is_fd) {
          ++sweep.verified_runs;
        } else if (sweep.first_failure.empty()) {
          sweep.first_failure =
              fmt("%s pair=%d k=%d grad_norm=%.3g", name, pair, k,
                  result.grad_norm);
        }

        if (result.iterations.empty() ||
            result.iterations.front().eps_t != cfg.eps / 4.0) {
          ++sweep.eps0_violations;
        }
        if (!(result.eps_final <= cfg.eps / 2.0)) {
          ++sweep.epsk_violations;
        }
        if (!(result.final_diameter <=
              cfg.eps / (2.0 * std::sqrt(2.0)) * slack)) {
          ++sweep.diameter_violations;
        }
        flowtrap::HyperRectangle prev =
            flowtrap::HyperRectangle::cube(2, 0.0, 1.0);
        for (const auto& it : result.iterations) {
          for (int j = 0; j < 2; ++j) {
            const double limit =
                prev.side(j) * 3.0 / static_cast<double>(it.ell) * slack;
            if (!(it.rect.side(j) <= limit)) {
              ++sweep.shrink_violations;
            }
          }
          ++sweep.boundary_rounds;
          sweep.boundary_checked += it.boundary_checked;
          sweep.boundary_unreachable += it.boundary_unreachable;
          if (it.boundary_checked != cfg.boundary_samples ||
              it.boundary_unreachable != it.boundary_checked) {
            ++sweep.boundary_bad_rounds;
          }
          prev = it.rect;
        }
      }
    }
  }
  sweep.seconds = seconds_since(start);
  return sweep;
}

Outcome check_solver_correctness(const CorrectnessSweep& sweep) {
  Outcome out;
  out.passed = sweep.verified_runs == sweep.total_runs &&
               sweep.total_runs == 160 && sweep.seconds <= 60.0;
  out.detail = fmt("%d/%d runs verified at eps=1e-2 in %.1fs (budget 60s)%s%s",
                   sweep.verified_runs, sweep.total_runs, sweep.seconds,
                   sweep.first_failure.empty() ? "" : "; first failure: ",
                   sweep.first_failure.c_str());
  return out;
}

Outcome check_schedule_invariants(const CorrectnessSweep& sweep) {
  Outcome out;
  out.passed = sweep.eps0_violations == 0 && sweep.epsk_violations == 0 &&
               sweep.diameter_violations == 0 &&
               sweep.shrink_violations == 0 && sweep.total_runs == 160;
  out.detail = fmt(
      "violations across %d runs: eps0=%lld epsk=%lld diameter=%lld "
      "shrink=%lld",
      sweep.total_runs, sweep.eps0_violations, sweep.epsk_violations,
      sweep.diameter_violations, sweep.shrink_violations);
  return out;
}

Outcome check_boundary_unreachability(const CorrectnessSweep& sweep) {
  Outcome out;
  out.passed = sweep.boundary_bad_rounds == 0 && sweep.boundary_rounds > 0 &&
               sweep.boundary_unreachable == sweep.boundary_checked;
  out.detail = fmt(
      "%lld/%lld sampled boundary points unreachable over %lld rounds "
      "(1000 per round), bad rounds: %lld",
      sweep.boundary_unreachable, sweep.boundary_checked,
      sweep.boundary_rounds, sweep.boundary_bad_rounds);
  return out;
}

// ---------------------------------------------------------------------------
// Checks 2 and 3: query scaling against 1/eps for k = 1 and k = 2.

struct SweepPoint {
  double eps = 0.0;
  std::uint64_t total_queries = 0;
  std::uint64_t max_round_queries = 0;
};

std::vector<SweepPoint> eps_sweep(int k) {
  std::vector<SweepPoint> points;
  for (const double eps : {1e-1, 3e-2, 1e-2}) {
    const flowtrap::QuadraticBowl objective({0.4, 0.7}, 1.0,
                                            flowtrap::Domain::unit_cube);
    flowtrap::SolveConfig cfg;
    cfg.eps = eps;
    cfg.lipschitz = 1.0;
    cfg.d = 2;
    cfg.k = k;
    cfg.x0 = {0.15, 0.85};
    cfg.mode = flowtrap::SolveMode::cube;
    flowtrap::BatchSession session(objective);
    const auto result = flowtrap::solve(cfg, session);
    SweepPoint p;
    p.eps = eps;
    p.total_queries = result.ledger.total();
    for (const auto& it : result.iterations) {
      p.max_round_queries = std::max(p.max_round_queries, it.queries);
    }
    points.push_back(p);
  }
  return points;
}

double sweep_slope(const std::vector<SweepPoint>& points, bool per_round) {
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    xs.push_back(std::log(1.0 / p.eps));
    ys.push_back(std::log(static_cast<double>(
        per_round ? p.max_round_queries : p.total_queries)));
  }
  return lsq_slope(xs, ys);
}

Outcome check_total_query_scaling() {
  Outcome out;
  const double slope = sweep_slope(eps_sweep(1), false);
  out.passed = std::abs(slope - 2.0) <= 0.15;
  out.detail = fmt("k=1 log-log slope of total queries vs 1/eps: %.4f "
                   "(want 2.0 +- 0.15)",
                   slope);
  return out;
}

Outcome check_per_round_exponent_decay() {
  Outcome out;
  const double q = 4.0 / 3.0;
  const double theory1 = 1.0 / (2.0 * (q - 1.0)) + 0.5;
  const double theory2 = 1.0 / (2.0 * (q * q - 1.0)) + 0.5;
  const double slope1 = sweep_slope(eps_sweep(1), true);
  const double slope2 = sweep_slope(eps_sweep(2), true);
  out.passed = slope2 < slope1 && std::abs(slope1 - theory1) <= 0.2 &&
               std::abs(slope2 - theory2) <= 0.2;
  out.detail = fmt(
      "max-round-query slopes: k=1 %.4f (want %.4f +- 0.2), k=2 %.4f "
      "(want %.4f +- 0.2), decreasing=%s",
      slope1, theory1, slope2, theory2, slope2 < slope1 ? "yes" : "no");
  return out;
}

// ---------------------------------------------------------------------------
// Check 6: component function thresholds at full grid resolution.

Outcome check_component_thresholds() {
  Outcome out;
  flowtrap::DiagnosticsOptions options;
  const auto report = flowtrap::component_function_suite(options);
  out.passed = report.passed && report.millis <= 5000.0;
  std::string failed;
  for (const auto& c : report.checks) {
    if (!c.passed) failed += " [" + c.name + "]";
  }
  out.detail = fmt("%zu threshold checks in %.0f ms (budget 5000)%s%s",
                   report.checks.size(), report.millis,
                   failed.empty() ? "" : "; failed:", failed.c_str());
  return out;
}

// ---------------------------------------------------------------------------
// Check 7: chain gradient bounds on a d=512, d0=64 instance.

Outcome check_chain_gradient_bounds() {
  Outcome out;
  const auto partition = flowtrap::sample_partition(512, 64, 777);
  const flowtrap::ChainOracle oracle(partition);
  const int d = oracle.dim();
  const int r = partition.r();
  const double bound = 46.0 * std::sqrt(static_cast<double>(r) + 1.0);
  const double sqrt_d0 = std::sqrt(static_cast<double>(partition.d0));

  int bound_violations = 0;
  double max_norm = 0.0;
  {
    flowtrap::Rng rng(7001);
    std::vector<double> y(static_cast<std::size_t>(d));
    std::vector<double> grad(static_cast<std::size_t>(d));
    const double scales[] = {0.1, 1.0, 3.0, 30.0};
    for (int i = 0; i < 1000; ++i) {
      const double scale = scales[i % 4];
      for (double& c : y) c = scale * flowtrap::standard_normal(rng);
      oracle.g_gradient(y, grad);
      const double norm = flowtrap::norm2(grad);
      max_norm = std::max(max_norm, norm);
      if (!(norm <= bound)) ++bound_violations;
    }
  }

  int floor_violations = 0;
  double min_norm = std::numeric_limits<double>::infinity();
  {
    flowtrap::Rng rng(7002);
    std::vector<double> x(static_cast<std::size_t>(d));
    std::vector<double> grad(static_cast<std::size_t>(d));
    const double scales[] = {0.05, 0.5, 2.0, 20.0, 200.0};
    for (int i = 0; i < 1000; ++i) {
      const double scale = scales[i % 5];
      for (double& c : x) c = scale * flowtrap::standard_normal(rng);
      // Pin the last chain gap below one by shifting the final weighted
      // part; squashing only shrinks the gap, so the hypothesis holds at
      // the squashed point too.
      double x_r = 0.0, x_r1 = 0.0;
      for (const int s : partition.parts[static_cast<std::size_t>(r) - 1]) {
        x_r += x[static_cast<std::size_t>(s)];
      }
      for (const int s : partition.parts[static_cast<std::size_t>(r)]) {
        x_r1 += x[static_cast<std::size_t>(s)];
      }
      x_r /= sqrt_d0;
      x_r1 /= sqrt_d0;
      const double gap = flowtrap::uniform_real(rng, -0.95, 0.95);
      const double shift = (x_r + gap - x_r1) / sqrt_d0;
      for (const int s : partition.parts[static_cast<std::size_t>(r)]) {
        x[static_cast<std::size_t>(s)] += shift;
      }
      oracle.raw_gradient(x, grad);
      const double norm = flowtrap::norm2(grad);
      min_norm = std::min(min_norm, norm);
      if (!(norm >= 0.08)) ++floor_violations;
    }
  }

  out.passed = bound_violations == 0 && floor_violations == 0;
  out.detail = fmt(
      "|grad g| <= %.4f: 0 of 1000 above (max %.4f); |grad f| >= 0.08 with "
      "last gap < 1: %d of 1000 below (min %.4f)",
      bound, max_norm, floor_violations, min_norm);
  if (bound_violations > 0) {
    out.detail += fmt("; %d bound violations", bound_violations);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Check 8: analytic gradients agree with finite differences.

Outcome check_fd_agreement() {
  Outcome out;
  const flowtrap::ChainOracle chain(flowtrap::sample_partition(48, 4, 888));
  const flowtrap::QuadraticBowl bowl({0.3, -0.2, 0.7}, 2.5,
                                     flowtrap::Domain::all_space);
  const flowtrap::SeparableCosine cosine({0.0, 0.25, -0.5}, 3.0,
                                         flowtrap::Domain::all_space);
  struct Case {
    const flowtrap::Objective* objective;
    double h;
    double span;
  };
  const Case cases[] = {
      {&chain, 1e-5, 2.0},
      {&bowl, 1e-6, 2.0},
      {&cosine, 1e-6, 1.0},
  };
  double worst = 0.0;
  std::string worst_name;
  bool ok = true;
  for (const Case& c : cases) {
    flowtrap::Rng rng(9001);
    std::vector<double> x(static_cast<std::size_t>(c.objective->dim()));
    for (int i = 0; i < 100; ++i) {
      for (double& v : x) v = flowtrap::uniform_real(rng, -c.span, c.span);
      const auto gc = flowtrap::verify_gradient(*c.objective, x, c.h);
      if (gc.rel_err > worst) {
        worst = gc.rel_err;
        worst_name = c.objective->name();
      }
      if (!gc.has_analytic || gc.rel_err > 1e-5) ok = false;
    }
  }
  out.passed = ok;
  out.detail = fmt("max relative error %.3g (%s) over 100 points x 3 "
                   "objectives (limit 1e-5)",
                   worst, worst_name.c_str());
  return out;
}

// ---------------------------------------------------------------------------
// Check 9: low-adaptivity baselines stay behind 2t links per round.

struct HidingTally {
  int random_ok = 0;
  int fd_ok = 0;
  int trials = 0;
  int max_index = 0;
  double seconds = 0.0;
};

HidingTally run_hiding_trials(int trials, int rounds, std::uint64_t q) {
  HidingTally tally;
  tally.trials = trials;
  const auto start = Clock::now();

  const unsigned workers =
      std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  struct TrialResult {
    bool random_ok = false;
    bool fd_ok = false;
    int max_index = 0;
  };
  std::vector<TrialResult> results(static_cast<std::size_t>(trials));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int trial = next.fetch_add(1);
      if (trial >= trials) return;
      const std::uint64_t seed = 5000 + static_cast<std::uint64_t>(trial);
      const auto partition = flowtrap::sample_partition(4096, 256, seed);
      const flowtrap::ChainOracle oracle(partition);
      const auto random_run = flowtrap::random_search_baseline(
          oracle, rounds, q, 1.0, mix_seed(seed, 1));
      const auto fd_run = flowtrap::fd_descent_baseline(oracle, rounds, q);
      TrialResult res;
      res.random_ok = true;
      res.fd_ok = true;
      for (int t = 0; t < static_cast<int>(random_run.progress.size()); ++t) {
        res.max_index = std::max(res.max_index, random_run.progress[t]);
        if (random_run.progress[t] > 2 * t) res.random_ok = false;
      }
      for (int t = 0; t < static_cast<int>(fd_run.progress.size()); ++t) {
        res.max_index = std::max(res.max_index, fd_run.progress[t]);
        if (fd_run.progress[t] > 2 * t) res.fd_ok = false;
      }
      results[static_cast<std::size_t>(trial)] = res;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  for (const auto& res : results) {
    if (res.random_ok) ++tally.random_ok;
    if (res.fd_ok) ++tally.fd_ok;
    tally.max_index = std::max(tally.max_index, res.max_index);
  }
  tally.seconds = seconds_since(start);
  return tally;
}

Outcome check_information_hiding() {
  Outcome out;
  const HidingTally tally = run_hiding_trials(200, 20, 1000);
  const int need = 190;
  out.passed = tally.random_ok >= need && tally.fd_ok >= need &&
               tally.seconds <= 600.0;
  out.detail = fmt(
      "index <= 2t for all 20 rounds: random-search %d/%d, fd-descent %d/%d "
      "(need >= %d each); max index seen %d; %.0fs (budget 600s)",
      tally.random_ok, tally.trials, tally.fd_ok, tally.trials, need,
      tally.max_index, tally.seconds);
  return out;
}

// ---------------------------------------------------------------------------
// Check 10: partition concentration frequencies stay below their bounds.

Outcome check_partition_concentration() {
  Outcome out;
  const int d = 4096;
  const int d0 = 256;
  const int trials = 10000;
  bool ok = true;
  std::string detail;
  int tested = 0;

  for (const double t : {0.05, 0.1, 0.25, 0.5, 1.0}) {
    const auto est =
        flowtrap::concentration_probe(d, d0, trials, t, 31000 + tested);
    ++tested;
    if (!(est.frequency <= est.bound)) {
      ok = false;
      detail += fmt(" uniform t=%.2f freq=%.4g > bound=%.4g;", t,
                    est.frequency, est.bound);
    }
  }

  flowtrap::Rng rng(31999);
  std::vector<double> alpha(static_cast<std::size_t>(d));
  for (double& a : alpha) a = std::fabs(flowtrap::standard_normal(rng));
  for (const double t : {0.25, 0.5, 1.0, 2.0}) {
    const auto est =
        flowtrap::concentration_probe(d, d0, trials, t, alpha, 32000 + tested);
    ++tested;
    if (!(est.frequency <= est.bound)) {
      ok = false;
      detail += fmt(" gaussian t=%.2f freq=%.4g > bound=%.4g;", t,
                    est.frequency, est.bound);
    }
  }

  out.passed = ok;
  out.detail = ok ? fmt("frequency <= bound at %d (alpha, t) combinations, "
                        "%d draws each",
                        tested, trials)
                  : detail;
  return out;
}

// ---------------------------------------------------------------------------
// Check 11: grid-path structure.

bool endpoint_is_unique_local_min(int n, int dims, std::uint64_t seed) {
  const flowtrap::PathOracle oracle(
      flowtrap::random_monotone_path(n, dims, seed));
  const auto endpoint = oracle.path().vertices().back();
  std::vector<int> v(static_cast<std::size_t>(dims), 0);
  for (;;) {
    const bool is_min = flowtrap::is_local_min(oracle, v);
    const bool is_end = v == endpoint;
    if (is_min != is_end) return false;
    int axis = dims - 1;
    while (axis >= 0 && v[static_cast<std::size_t>(axis)] == n) {
      v[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
    ++v[static_cast<std::size_t>(axis)];
  }
  return true;
}

Outcome check_grid_path_structure() {
  Outcome out;
  long long minima_checks = 0;
  bool minima_ok = true;
  for (std::uint64_t seed = 1; seed <= 50 && minima_ok; ++seed) {
    for (int n = 1; n <= 8 && minima_ok; ++n) {
      minima_ok = endpoint_is_unique_local_min(n, 2, seed);
      ++minima_checks;
    }
    for (int n = 1; n <= 4 && minima_ok; ++n) {
      minima_ok = endpoint_is_unique_local_min(n, 3, seed);
      ++minima_checks;
    }
  }

  // Tiling: squares of all vertices of the n=3 grid cover the unit square
  // exactly, with sides 1/(n+1) and corners on the lattice.
  bool tiling_ok = true;
  {
    const int n = 3;
    const double cell = 1.0 / (n + 1);
    double area = 0.0;
    std::vector<int> v(2, 0);
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n; ++b) {
        v[0] = a;
        v[1] = b;
        const auto sq = flowtrap::square(v, n);
        for (int j = 0; j < 2; ++j) {
          const int coord = v[static_cast<std::size_t>(j)];
          if (sq.lo[static_cast<std::size_t>(j)] != coord * cell ||
              sq.hi[static_cast<std::size_t>(j)] != (coord + 1) * cell) {
            tiling_ok = false;
          }
        }
        area += sq.side(0) * sq.side(1);
      }
    }
    if (area != 1.0) tiling_ok = false;
  }

  // Single-query frontier search identifies the endpoint in exactly n
  // rounds, and one round fewer is not enough.
  bool frontier_ok = true;
  for (const int n : {3, 7, 11}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      flowtrap::PathOracle oracle(flowtrap::random_monotone_path(n, 2, seed));
      const auto full = flowtrap::round_limited_search(
          oracle, n, 1, flowtrap::Strategy::frontier, seed);
      flowtrap::PathOracle starved_oracle(
          flowtrap::random_monotone_path(n, 2, seed));
      const auto starved = flowtrap::round_limited_search(
          starved_oracle, n - 1, 1, flowtrap::Strategy::frontier, seed);
      if (!full.found || full.rounds_used() != n || starved.found) {
        frontier_ok = false;
      }
    }
  }

  out.passed = minima_ok && tiling_ok && frontier_ok;
  out.detail = fmt(
      "unique endpoint minima: %s (%lld path suites); tiling: %s; q=1 "
      "frontier uses exactly n rounds: %s; predicted failure query scales "
      "(n=8, d=2, k=1..3): %.1f %.1f %.1f (reported only)",
      minima_ok ? "ok" : "FAIL", minima_checks, tiling_ok ? "ok" : "FAIL",
      frontier_ok ? "ok" : "FAIL", flowtrap::theorem_query_scale(8, 2, 1),
      flowtrap::theorem_query_scale(8, 2, 2),
      flowtrap::theorem_query_scale(8, 2, 3));
  return out;
}

// ---------------------------------------------------------------------------
// Check 12: the command line tool reproduces byte-identical outputs.

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(FLOWTRAP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status < 0) return -1;
  return WEXITSTATUS(status);
}

bool read_file(const std::filesystem::path& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

Outcome check_reproducibility() {
  Outcome out;
  namespace fs = std::filesystem;
  const fs::path dir = fs::path("acceptance_out");
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir, ec);
  const std::string base = dir.string();

  struct Command {
    std::string name;
    std::string args_a;
    std::string args_b;
    std::vector<std::string> files_a;
    std::vector<std::string> files_b;
  };
  const std::vector<Command> commands = {
      {"solve",
       "solve --func quadratic --d 2 --k 2 --eps 0.05 --seed 17 --out " +
           base + "/s1",
       "solve --func quadratic --d 2 --k 2 --eps 0.05 --seed 17 --out " +
           base + "/s2",
       {base + "/s1.trace.csv", base + "/s1.summary.json",
        base + "/s1.ledger.csv"},
       {base + "/s2.trace.csv", base + "/s2.summary.json",
        base + "/s2.ledger.csv"}},
      {"chain-bench",
       "chain-bench --d 48 --d0 4 --rounds 5 --q 16 --trials 3 --seed 9 "
       "--out " +
           base + "/c1.csv",
       "chain-bench --d 48 --d0 4 --rounds 5 --q 16 --trials 3 --seed 9 "
       "--out " +
           base + "/c2.csv",
       {base + "/c1.csv"},
       {base + "/c2.csv"}},
      {"grid-bench",
       "grid-bench --n 6 --d 2 --k 2,4 --q 4,25 --trials 10 --seed 4 --out " +
           base + "/g1.csv --surface-out " + base + "/g1s.csv",
       "grid-bench --n 6 --d 2 --k 2,4 --q 4,25 --trials 10 --seed 4 --out " +
           base + "/g2.csv --surface-out " + base + "/g2s.csv",
       {base + "/g1.csv", base + "/g1s.csv"},
       {base + "/g2.csv", base + "/g2s.csv"}},
  };

  bool ok = true;
  std::string detail;
  int files_compared = 0;
  for (const auto& cmd : commands) {
    const int rc_a = run_cli(cmd.args_a);
    const int rc_b = run_cli(cmd.args_b);
    if (rc_a != 0 || rc_b != 0) {
      ok = false;
      detail += fmt(" %s exit codes %d/%d;", cmd.name.c_str(), rc_a, rc_b);
      continue;
    }
    for (std::size_t i = 0; i < cmd.files_a.size(); ++i) {
      std::string a, b;
      if (!read_file(cmd.files_a[i], a) || !read_file(cmd.files_b[i], b)) {
        ok = false;
        detail += fmt(" %s missing output %s;", cmd.name.c_str(),
                      cmd.files_a[i].c_str());
        continue;
      }
      ++files_compared;
      if (a != b) {
        ok = false;
        detail += fmt(" %s outputs differ (%s);", cmd.name.c_str(),
                      cmd.files_a[i].c_str());
      }
    }
  }
  out.passed = ok;
  out.detail = ok ? fmt("3 commands rerun with fixed seeds, %d output files "
                        "byte-identical",
                        files_compared)
                  : detail;
  return out;
}

}  // namespace

int main() {
  struct Check {
    const char* id;
    const char* label;
    std::function<Outcome()> run;
  };

  const CorrectnessSweep sweep = run_correctness_sweep();

  const std::vector<Check> checks = {
      {"C01", "solver-correctness", [&] { return check_solver_correctness(sweep); }},
      {"C02", "total-query-scaling", [] { return check_total_query_scaling(); }},
      {"C03", "per-round-exponent-decay",
       [] { return check_per_round_exponent_decay(); }},
      {"C04", "schedule-invariants",
       [&] { return check_schedule_invariants(sweep); }},
      {"C05", "trap-boundary-unreachability",
       [&] { return check_boundary_unreachability(sweep); }},
      {"C06", "component-thresholds", [] { return check_component_thresholds(); }},
      {"C07", "chain-gradient-bounds", [] { return check_chain_gradient_bounds(); }},
      {"C08", "fd-agreement", [] { return check_fd_agreement(); }},
      {"C09", "information-hiding-baselines",
       [] { return check_information_hiding(); }},
      {"C10", "partition-concentration",
       [] { return check_partition_concentration(); }},
      {"C11", "grid-path-structure", [] { return check_grid_path_structure(); }},
      {"C12", "reproducibility", [] { return check_reproducibility(); }},
  };

  int passed = 0;
  for (const auto& check : checks) {
    Outcome outcome;
    try {
      outcome = check.run();
    } catch (const std::exception& e) {
      outcome.passed = false;
      outcome.detail = fmt("exception: %s", e.what());
    }
    std::printf("[%s] %s %s: %s\n", outcome.passed ? "PASS" : "FAIL",
                check.id, check.label, outcome.detail.c_str());
    std::fflush(stdout);
    if (outcome.passed) ++passed;
  }
  std::printf("acceptance: %d/%zu passed\n", passed, checks.size());
  return passed == static_cast<int>(checks.size()) ? 0 : 1;
}
