#include "flowtrap/diagnostics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flowtrap/chain.hpp"
#include "flowtrap/errors.hpp"
#include "flowtrap/geometry.hpp"
#include "flowtrap/gridpath.hpp"
#include "flowtrap/oracle.hpp"
#include "flowtrap/rng.hpp"
#include "flowtrap/trap.hpp"

namespace flowtrap {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

CheckResult check(std::string name, bool passed, std::string detail = "") {
  return CheckResult{std::move(name), passed, std::move(detail)};
}

SuiteReport finish(std::string suite, std::vector<CheckResult> checks,
                   Clock::time_point start) {
  SuiteReport report;
  report.suite = std::move(suite);
  report.checks = std::move(checks);
  report.passed = std::all_of(report.checks.begin(), report.checks.end(),
                              [](const CheckResult& c) { return c.passed; });
  report.millis = std::chrono::duration<double, std::milli>(Clock::now() -
                                                            start)
                      .count();
  return report;
}

// Shared small chain instance: d = 48 coordinates in parts of 4 gives
// r = 10 links, big enough to exercise every term yet cheap to sample.
ChainOracle test_chain(std::uint64_t seed) {
  return ChainOracle(sample_partition(48, 4, seed));
}

constexpr double kPsiSup = std::numbers::e;
// sqrt(54/e), the supremum of psi', attained at 2x-1 = sqrt(2/3).
constexpr double kPsiPrimeSup = 4.4570718889488293025;
// sqrt(2*pi*e) and sqrt(e).
constexpr double kPhiSup = 4.1327313541224929385;
constexpr double kPhiPrimeSup = 1.6487212707001281468;

}  // namespace

SuiteReport component_function_suite(const DiagnosticsOptions& options,
                                     const ScalarFn& psi_fn,
                                     const ScalarFn& psi_prime_fn,
                                     const ScalarFn& phi_fn,
                                     const ScalarFn& phi_prime_fn) {
  const auto start = Clock::now();
  std::vector<CheckResult> checks;
  const int grid = std::max(3, options.threshold_grid);

  {
    // psi and psi' vanish identically at and left of the threshold 1/2.
    bool ok = true;
    std::string detail;
    for (int i = 0; i < grid && ok; ++i) {
      const double x = -4.0 + 4.5 * i / (grid - 1);  // ends exactly at 0.5
      if (psi_fn(x) != 0.0 || psi_prime_fn(x) != 0.0) {
        ok = false;
        detail = "x = " + fmt(x) + ", psi = " + fmt(psi_fn(x)) +
                 ", psi' = " + fmt(psi_prime_fn(x));
      }
    }
    checks.push_back(check("step vanishes left of 1/2", ok, detail));
  }

  {
    // psi(x) * phi'(y) > 1 for x in [1, 5] and |y| < 1: the pull of an
    // armed link beats the unit scale.
    bool ok = true;
    std::string detail;
    const int side = std::min(grid, 181);
    for (int i = 0; i < side && ok; ++i) {
      const double x = 1.0 + 4.0 * i / (side - 1);
      for (int j = 0; j < side && ok; ++j) {
        const double y = -1.0 + 2.0 * (j + 0.5) / side;  // open interval
        const double product = psi_fn(x) * phi_prime_fn(y);
        if (!(product > 1.0)) {
          ok = false;
          detail = "x = " + fmt(x) + ", y = " + fmt(y) +
                   ", psi*phi' = " + fmt(product);
        }
      }
    }
    checks.push_back(check("armed link pull exceeds one", ok, detail));
  }

  {
    // 0 <= psi < e and 0 <= psi' <= sqrt(54/e) on a wide sample.
    bool ok = true;
    std::string detail;
    Rng rng(options.seed);
    for (int i = 0; i < options.bound_samples && ok; ++i) {
      const double x = uniform_real(rng, -100.0, 100.0);
      const double p = psi_fn(x);
      const double dp = psi_prime_fn(x);
      if (!(p >= 0.0 && p < kPsiSup && dp >= 0.0 && dp <= kPsiPrimeSup)) {
        ok = false;
        detail = "x = " + fmt(x) + ", psi = " + fmt(p) + ", psi' = " + fmt(dp);
      }
    }
    checks.push_back(check("step bounds", ok, detail));
  }

  {
    // 0 < phi < sqrt(2 pi e) and 0 < phi' <= sqrt(e). Sampled on [-8, 8]:
    // in double precision the strict bounds saturate further out, where
    // the tail falls below the resolution of erfc around 2.
    bool ok = true;
    std::string detail;
    Rng rng(options.seed + 1);
    for (int i = 0; i < options.bound_samples && ok; ++i) {
      const double x = (i == 0) ? 0.0 : uniform_real(rng, -8.0, 8.0);
      const double c = phi_fn(x);
      const double dc = phi_prime_fn(x);
      if (!(c > 0.0 && c < kPhiSup && dc > 0.0 && dc <= kPhiPrimeSup)) {
        ok = false;
        detail = "x = " + fmt(x) + ", phi = " + fmt(c) + ", phi' = " + fmt(dc);
      }
    }
    checks.push_back(check("cdf bounds", ok, detail));
  }

  return finish("component-functions", std::move(checks), start);
}

SuiteReport component_function_suite(const DiagnosticsOptions& options) {
  return component_function_suite(
      options, [](double x) { return psi(x); },
      [](double x) { return psi_prime(x); }, [](double x) { return phi(x); },
      [](double x) { return phi_prime(x); });
}

SuiteReport squash_contraction_suite(const DiagnosticsOptions& options) {
  const auto start = Clock::now();
  std::vector<CheckResult> checks;
  const ChainOracle oracle = test_chain(options.seed);
  const double radius = oracle.squash_radius();
  const int d = oracle.dim();

  {
    const std::vector<double> zero(static_cast<std::size_t>(d), 0.0);
    const std::vector<double> image = oracle.rho(zero);
    const bool ok = norm2(image) == 0.0;
    checks.push_back(check("squash fixes the origin", ok, fmt(norm2(image))));
  }

  {
    bool ok = true;
    std::string detail;
    Rng rng(options.seed + 2);
    const double scales[] = {1e-3, 0.3, 1.0, 10.0, 1e3};
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int i = 0; i < options.contraction_samples && ok; ++i) {
      const double scale = scales[i % 5];
      for (double& c : x) {
        c = scale * standard_normal(rng);
      }
      const double nx = norm2(x);
      if (nx == 0.0) {
        continue;
      }
      const double ny = norm2(oracle.rho(x));
      if (!(ny < nx && ny < radius)) {
        ok = false;
        detail = "|x| = " + fmt(nx) + ", |rho(x)| = " + fmt(ny) +
                 ", R = " + fmt(radius);
      }
    }
    checks.push_back(check("squash strictly contracts", ok, detail));
  }

  return finish("squash-contraction", std::move(checks), start);
}

SuiteReport chain_bound_suite(const DiagnosticsOptions& options) {
  const auto start = Clock::now();
  std::vector<CheckResult> checks;
  const ChainOracle oracle = test_chain(options.seed + 3);
  const int d = oracle.dim();
  const int r = oracle.partition().r();
  const double grad_bound = 46.0 * std::sqrt(static_cast<double>(r) + 1.0);

  {
    bool ok = true;
    std::string detail;
    Rng rng(options.seed + 4);
    std::vector<double> y(static_cast<std::size_t>(d));
    std::vector<double> grad(static_cast<std::size_t>(d));
    const double scales[] = {0.1, 1.0, 3.0, 30.0};
    for (int i = 0; i < options.gradient_samples && ok; ++i) {
      const double scale = scales[i % 4];
      for (double& c : y) {
        c = scale * standard_normal(rng);
      }
      oracle.g_gradient(y, grad);
      const double norm = norm2(grad);
      if (!(norm <= grad_bound)) {
        ok = false;
        detail = "|grad g| = " + fmt(norm) + " > " + fmt(grad_bound);
      }
    }
    checks.push_back(check("chain gradient bound 46 sqrt(r+1)", ok, detail));
  }

  {
    bool ok = true;
    std::string detail;
    Rng rng(options.seed + 5);
    std::vector<double> y(static_cast<std::size_t>(d), 0.0);
    const double g0 = oracle.g_value(y);
    const double floor = g0 - 12.0 * r;
    double worst = g0;
    const double spans[] = {0.5, 2.0, 8.0, 32.0};
    for (long long i = 0; i < options.value_gap_samples && ok; ++i) {
      const double span = spans[i % 4];
      for (double& c : y) {
        c = uniform_real(rng, -span, span);
      }
      const double g = oracle.g_value(y);
      worst = std::min(worst, g);
      if (!(g >= floor)) {
        ok = false;
        detail = "g = " + fmt(g) + " < g(0) - 12r = " + fmt(floor);
      }
    }
    if (ok) {
      detail = "min sampled g = " + fmt(worst) + ", floor = " + fmt(floor);
    }
    checks.push_back(check("chain value gap 12r", ok, detail));
  }

  return finish("chain-bounds", std::move(checks), start);
}

SuiteReport large_gradient_suite(const DiagnosticsOptions& options) {
  const auto start = Clock::now();
  std::vector<CheckResult> checks;
  const ChainOracle oracle = test_chain(options.seed + 6);
  const int d = oracle.dim();
  const ChainPartition& partition = oracle.partition();
  const int r = partition.r();
  const double sqrt_d0 = std::sqrt(static_cast<double>(partition.d0));

  bool ok = true;
  std::string detail;
  double worst = std::numeric_limits<double>::infinity();
  Rng rng(options.seed + 7);
  std::vector<double> x(static_cast<std::size_t>(d));
  std::vector<double> grad(static_cast<std::size_t>(d));
  const double scales[] = {0.05, 0.5, 2.0, 20.0, 200.0};
  for (int i = 0; i < options.floor_samples && ok; ++i) {
    const double scale = scales[i % 5];
    for (double& c : x) {
      c = scale * standard_normal(rng);
    }
    // Pin the last chain gap below one by shifting the coordinates of the
    // final weighted part; squashing only shrinks the gap further, so the
    // hypothesis |X^{r+1} - X^r| < 1 holds at rho(x) as well.
    double x_r = 0.0;
    double x_r1 = 0.0;
    for (const int s : partition.parts[static_cast<std::size_t>(r) - 1]) {
      x_r += x[s];
    }
    for (const int s : partition.parts[static_cast<std::size_t>(r)]) {
      x_r1 += x[s];
    }
    x_r /= sqrt_d0;
    x_r1 /= sqrt_d0;
    const double gap = uniform_real(rng, -0.95, 0.95);
    const double shift = (x_r + gap - x_r1) / sqrt_d0;
    for (const int s : partition.parts[static_cast<std::size_t>(r)]) {
      x[s] += shift;
    }
    oracle.raw_gradient(x, grad);
    const double norm = norm2(grad);
    worst = std::min(worst, norm);
    if (!(norm >= 0.08)) {
      ok = false;
      detail = "|grad f| = " + fmt(norm) + " with last gap " + fmt(gap);
    }
  }
  if (ok) {
    detail = "min |grad f| = " + fmt(worst);
  }
  checks.push_back(check("gradient floor 0.08 before the last unhook", ok,
                         detail));
  return finish("large-gradient", std::move(checks), start);
}

SuiteReport fd_agreement_suite(const DiagnosticsOptions& options) {
  const auto start = Clock::now();
  std::vector<CheckResult> checks;

  const ChainOracle chain = test_chain(options.seed + 8);
  const QuadraticBowl bowl({0.3, -0.2, 0.7}, 2.5, Domain::all_space);
  const SeparableCosine cosine({0.0, 0.25, -0.5}, 3.0, Domain::all_space);

  struct Case {
    const Objective* objective;
    double h;
    double span;
  };
  const Case cases[] = {
      {&chain, 1e-5, 2.0},
      {&bowl, 1e-6, 2.0},
      {&cosine, 1e-6, 1.0},
  };
  for (const Case& c : cases) {
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    Rng rng(options.seed + 9);
    std::vector<double> x(static_cast<std::size_t>(c.objective->dim()));
    for (int i = 0; i < options.fd_samples && ok; ++i) {
      for (double& v : x) {
        v = uniform_real(rng, -c.span, c.span);
      }
      const GradientCheck gc = verify_gradient(*c.objective, x, c.h);
      worst = std::max(worst, gc.rel_err);
      if (!gc.has_analytic || gc.rel_err > 1e-5) {
        ok = false;
        detail = "rel err = " + fmt(gc.rel_err);
      }
    }
    if (ok) {
      detail = "max rel err = " + fmt(worst);
    }
    checks.push_back(
        check("fd agreement: " + c.objective->name(), ok, detail));
  }

  return finish("fd-agreement", std::move(checks), start);
}

SuiteReport net_suite(const DiagnosticsOptions& options) {
  const auto start = Clock::now();
  std::vector<CheckResult> checks;
  Rng rng(options.seed + 10);

  bool counts_ok = true;
  bool cover_ok = true;
  bool ends_ok = true;
  bool face_ok = true;
  std::string counts_detail;
  std::string cover_detail;
  std::string ends_detail;
  std::string face_detail;

  for (int trial = 0; trial < 24; ++trial) {
    const int d = 1 + static_cast<int>(bounded_rand(rng, 4));
    std::vector<double> lo(static_cast<std::size_t>(d));
    std::vector<double> hi(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      lo[j] = uniform_real(rng, -2.0, 2.0);
      const bool degenerate = d > 1 && bounded_rand(rng, 5) == 0;
      hi[j] = degenerate ? lo[j] : lo[j] + uniform_real(rng, 0.1, 3.0);
    }
    const HyperRectangle rect(lo, hi);
    const double delta = uniform_real(rng, 0.05, 0.6);
    const Net net = nice_net(rect, delta, 1u << 22);

    const int m = rect.effective_dim();
    for (int j = 0; j < d; ++j) {
      std::uint64_t expected = 1;
      if (rect.side(j) > 0.0) {
        expected = static_cast<std::uint64_t>(std::ceil(
                       std::sqrt(static_cast<double>(m)) * rect.side(j) /
                       (2.0 * delta))) +
                   1;
      }
      if (net.axis_counts[j] != expected) {
        counts_ok = false;
        counts_detail = "axis " + std::to_string(j) + ": " +
                        std::to_string(net.axis_counts[j]) + " vs " +
                        std::to_string(expected);
      }
    }

    // Nearest net point by per-axis rounding must be within delta.
    std::vector<double> y(static_cast<std::size_t>(d));
    for (int probe = 0; probe < 40; ++probe) {
      double dist2 = 0.0;
      for (int j = 0; j < d; ++j) {
        y[j] = uniform_real(rng, rect.lo[j], rect.hi[j]);
        const std::uint64_t count = net.axis_counts[j];
        double nearest = rect.lo[j];
        if (count > 1) {
          const double step = rect.side(j) / static_cast<double>(count - 1);
          double idx = std::round((y[j] - rect.lo[j]) / step);
          idx = std::clamp(idx, 0.0, static_cast<double>(count - 1));
          nearest = rect.lo[j] + idx * step;
        }
        dist2 += (y[j] - nearest) * (y[j] - nearest);
      }
      if (!(std::sqrt(dist2) <= delta * (1.0 + 1e-9))) {
        cover_ok = false;
        cover_detail = "probe at distance " + fmt(std::sqrt(dist2)) +
                       " > delta = " + fmt(delta);
      }
    }

    // First and last net points are the exact lo and hi corners.
    if (net.size() > 0) {
      const std::span<const double> first = net.point(0);
      const std::span<const double> last = net.point(net.size() - 1);
      for (int j = 0; j < d; ++j) {
        if (first[j] != rect.lo[j] || last[j] != rect.hi[j]) {
          ends_ok = false;
          ends_detail = "axis " + std::to_string(j) + " endpoints inexact";
        }
      }
    }

    // Restricting to a face keeps exactly the points with that coordinate.
    const int axis = static_cast<int>(bounded_rand(rng, static_cast<std::uint64_t>(d)));
    const Net face = net_face_restriction(net, axis, rect.lo[axis]);
    std::uint64_t expected_face = 1;
    for (int j = 0; j < d; ++j) {
      expected_face *= (j == axis) ? 1 : net.axis_counts[j];
    }
    if (face.size() != expected_face) {
      face_ok = false;
      face_detail = "face size " + std::to_string(face.size()) + " vs " +
                    std::to_string(expected_face);
    }
    for (std::uint64_t i = 0; i < face.size(); ++i) {
      if (face.point(i)[axis] != rect.lo[axis]) {
        face_ok = false;
        face_detail = "face point off its face";
      }
    }
  }

  checks.push_back(check("axis count formula", counts_ok, counts_detail));
  checks.push_back(check("covering radius", cover_ok, cover_detail));
  checks.push_back(check("exact endpoints", ends_ok, ends_detail));
  checks.push_back(check("face restriction", face_ok, face_detail));
  return finish("nice-nets", std::move(checks), start);
}

SuiteReport path_suite(const DiagnosticsOptions& options) {
  const auto start = Clock::now();
  std::vector<CheckResult> checks;

  {
    // Values fall by exactly one per path step.
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed = 1; seed <= 5 && ok; ++seed) {
      const PathOracle oracle(random_monotone_path(9, 3, seed));
      const auto vertices = oracle.path().vertices();
      for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (oracle.value(vertices[i]) != -static_cast<long long>(i)) {
          ok = false;
          detail = "position " + std::to_string(i);
        }
      }
    }
    checks.push_back(check("on-path descent by one", ok, detail));
  }

  {
    // The endpoint is a local minimum and the only one (brute force).
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed = 1; seed <= 8 && ok; ++seed) {
      const int n = 2 + static_cast<int>(seed % 5);
      const PathOracle oracle(random_monotone_path(n, 2, seed));
      const std::vector<int> endpoint = oracle.path().vertices().back();
      int minima = 0;
      std::vector<int> v(2, 0);
      for (v[0] = 0; v[0] <= n; ++v[0]) {
        for (v[1] = 0; v[1] <= n; ++v[1]) {
          if (is_local_min(oracle, v)) {
            ++minima;
            if (v != endpoint) {
              ok = false;
              detail = "spurious local minimum";
            }
          }
        }
      }
      if (minima != 1) {
        ok = false;
        detail = "found " + std::to_string(minima) + " local minima";
      }
    }
    checks.push_back(check("unique local minimum at the endpoint", ok,
                           detail));
  }

  {
    // square(v) boxes tile the unit cube: disjoint except for shared
    // faces, and every point lands in the box of its own cell.
    bool ok = true;
    std::string detail;
    const int n = 3;
    const double cells = n + 1.0;
    std::vector<int> v(2);
    std::vector<int> w(2);
    double volume = 0.0;
    for (v[0] = 0; v[0] <= n && ok; ++v[0]) {
      for (v[1] = 0; v[1] <= n && ok; ++v[1]) {
        const HyperRectangle box = square(v, n);
        volume += box.side(0) * box.side(1);
        for (w[0] = 0; w[0] <= n && ok; ++w[0]) {
          for (w[1] = 0; w[1] <= n && ok; ++w[1]) {
            if (v == w) {
              continue;
            }
            const HyperRectangle other = square(w, n);
            bool separated = false;
            for (int s = 0; s < 2; ++s) {
              if (other.lo[s] >= box.hi[s] || box.lo[s] >= other.hi[s]) {
                separated = true;
              }
            }
            if (!separated) {
              ok = false;
              detail = "overlapping boxes";
            }
          }
        }
      }
    }
    if (ok && std::abs(volume - 1.0) > 1e-12) {
      ok = false;
      detail = "volumes sum to " + fmt(volume);
    }
    Rng rng(options.seed + 11);
    for (int i = 0; i < 200 && ok; ++i) {
      std::vector<double> q = {uniform01(rng), uniform01(rng)};
      for (int s = 0; s < 2; ++s) {
        v[s] = std::min(n, static_cast<int>(q[s] * cells));
      }
      if (!square(v, n).contains(q)) {
        ok = false;
        detail = "cell map misses its own box";
      }
    }
    checks.push_back(check("square tiling", ok, detail));
  }

  {
    // Following the frontier with one query per round advances one path
    // step per round on two axes: a hit moves, a miss eliminates.
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed = 3; seed <= 5 && ok; ++seed) {
      const int n = 7;
      PathOracle oracle(random_monotone_path(n, 2, seed));
      const SearchResult result =
          round_limited_search(oracle, n, 1, Strategy::frontier, seed);
      if (!result.found || result.rounds_used() != n) {
        ok = false;
        detail = "found = " + std::to_string(result.found) + ", rounds = " +
                 std::to_string(result.rounds_used());
      }
    }
    checks.push_back(check("frontier uses exactly n rounds at q = 1", ok,
                           detail));
  }

  return finish("path-functions", std::move(checks), start);
}

SuiteReport schedule_suite(const DiagnosticsOptions& options) {
  const auto start = Clock::now();
  std::vector<CheckResult> checks;

  {
    bool ok = true;
    std::string detail;
    for (const int d : {2, 3, 5, 17}) {
      for (int k = 1; k <= 6; ++k) {
        double sum = 0.0;
        for (int t = 0; t < k; ++t) {
          sum += barrier_exponent(d, k, t);
        }
        if (std::abs(sum - 1.0) > 1e-12) {
          ok = false;
          detail = "d = " + std::to_string(d) + ", k = " + std::to_string(k) +
                   ", sum = " + fmt(sum);
        }
      }
    }
    checks.push_back(check("exponents spend the whole budget", ok, detail));
  }

  {
    bool ok = true;
    std::string detail;
    for (const int d : {2, 3, 7}) {
      for (int k = 1; k <= 4; ++k) {
        const double base = schedule_base_cube(d, k, 1e-2, 1.0);
        std::uint64_t prev = 0;
        for (int t = 0; t < k; ++t) {
          const std::uint64_t ell =
              barrier_count(base, barrier_exponent(d, k, t));
          if (ell < 3 || ell < prev) {
            ok = false;
            detail = "d = " + std::to_string(d) + ", k = " +
                     std::to_string(k) + ", t = " + std::to_string(t);
          }
          prev = ell;
        }
      }
    }
    checks.push_back(check("barrier counts grow from 3", ok, detail));
  }

  {
    // Iterated thresholds stay below 3 eps / 8 for every d >= 2.
    bool ok = true;
    std::string detail;
    const double eps = 0.4;
    for (const int d : {2, 3, 7, 33}) {
      double eps_t = eps / 4.0;
      for (int t = 0; t < 40; ++t) {
        eps_t = next_descent_threshold(eps_t, t, d, eps);
      }
      if (!(eps_t <= 0.375 * eps * (1.0 + 1e-12))) {
        ok = false;
        detail = "d = " + std::to_string(d) + ", eps_40 = " + fmt(eps_t);
      }
    }
    checks.push_back(check("thresholds capped at 3 eps / 8", ok, detail));
  }

  {
    // Compression keeps the iterate, stays inside, and cuts to <= 3 cells.
    bool ok = true;
    std::string detail;
    Rng rng(options.seed + 12);
    for (int trial = 0; trial < 200 && ok; ++trial) {
      const int d = 1 + static_cast<int>(bounded_rand(rng, 3));
      std::vector<double> lo(static_cast<std::size_t>(d));
      std::vector<double> hi(static_cast<std::size_t>(d));
      std::vector<double> x(static_cast<std::size_t>(d));
      for (int j = 0; j < d; ++j) {
        lo[j] = uniform_real(rng, -2.0, 2.0);
        hi[j] = lo[j] + uniform_real(rng, 0.2, 3.0);
        x[j] = uniform_real(rng, lo[j], hi[j]);
      }
      const HyperRectangle rect(lo, hi);
      const std::uint64_t ell = 3 + bounded_rand(rng, 7);
      const HyperRectangle small = shrink_around(rect, x, ell);
      if (!rect.contains(small) || !small.contains(x)) {
        ok = false;
        detail = "window escaped or dropped the iterate";
      }
      for (int j = 0; j < d; ++j) {
        const double w = rect.side(j) / static_cast<double>(ell);
        if (small.side(j) > 3.0 * w * (1.0 + 1e-12)) {
          ok = false;
          detail = "axis " + std::to_string(j) + " window too wide";
        }
      }
    }
    checks.push_back(check("three-cell compression", ok, detail));
  }

  return finish("barrier-schedule", std::move(checks), start);
}

std::vector<SuiteReport> run_all_checks(const DiagnosticsOptions& options) {
  std::vector<SuiteReport> reports;
  reports.push_back(component_function_suite(options));
  reports.push_back(squash_contraction_suite(options));
  reports.push_back(chain_bound_suite(options));
  reports.push_back(large_gradient_suite(options));
  reports.push_back(fd_agreement_suite(options));
  reports.push_back(net_suite(options));
  reports.push_back(path_suite(options));
  reports.push_back(schedule_suite(options));
  return reports;
}

bool all_passed(const std::vector<SuiteReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const SuiteReport& r) { return r.passed; });
}

std::string format_report(const std::vector<SuiteReport>& reports) {
  std::string out;
  for (const SuiteReport& report : reports) {
    char line[160];
    std::snprintf(line, sizeof(line), "[%s] %-20s %2zu checks  %8.1f ms\n",
                  report.passed ? "PASS" : "FAIL", report.suite.c_str(),
                  report.checks.size(), report.millis);
    out += line;
    for (const CheckResult& c : report.checks) {
      if (!c.passed) {
        out += "  FAIL " + c.name;
        if (!c.detail.empty()) {
          out += ": " + c.detail;
        }
        out += "\n";
      }
    }
  }
  return out;
}

}  // namespace flowtrap
