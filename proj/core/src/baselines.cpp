#include "flowtrap/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "flowtrap/errors.hpp"
#include "flowtrap/geometry.hpp"
#include "flowtrap/rng.hpp"

namespace flowtrap {

namespace {

// How many points of each batch get the (dimension-cost) gradient audit.
constexpr std::uint64_t kFloorAuditsPerRound = 4;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

void validate(int rounds, std::uint64_t queries_per_round) {
  if (rounds < 0) {
    throw ConfigError("baseline rounds must be >= 0");
  }
  if (queries_per_round < 1) {
    throw ConfigError("baseline queries per round must be >= 1");
  }
}

}  // namespace

void check_gradient_floor(const ChainOracle& oracle, std::span<const double> x,
                          int progress_index) {
  if (progress_index > oracle.partition().r()) {
    return;
  }
  std::vector<double> grad(static_cast<std::size_t>(oracle.dim()));
  oracle.gradient(x, grad);
  const double norm = norm2(grad);
  const double floor = 0.08 * oracle.amplitude() / oracle.sigma();
  if (!(norm >= floor)) {
    throw ContractError("gradient floor violated: |grad f| = " + fmt(norm) +
                        " < " + fmt(floor) +
                        " at a point with progress index " +
                        std::to_string(progress_index));
  }
}

BaselineResult random_search_baseline(const ChainOracle& oracle, int rounds,
                                      std::uint64_t queries_per_round,
                                      double step_scale, std::uint64_t seed) {
  validate(rounds, queries_per_round);
  if (!(step_scale > 0.0)) {
    throw ConfigError("random search step scale must be positive");
  }
  BatchSession session(oracle);
  Rng rng(seed);
  const int d = oracle.dim();
  const std::uint64_t q = queries_per_round;
  const double step_len = step_scale * oracle.sigma();

  std::vector<double> incumbent(static_cast<std::size_t>(d), 0.0);
  double incumbent_value = std::numeric_limits<double>::infinity();
  std::vector<double> flat(static_cast<std::size_t>(d) * q);
  BaselineResult out;
  out.progress.assign(1, 0);
  int best_index = 0;
  // Simultaneous-perturbation directions: independent random signs on each
  // coordinate, so every proposal moves exactly step_len in Euclidean norm
  // (a Rademacher vector has norm sqrt(d)) at 64 coordinates per RNG draw.
  const double coord_step = step_len / std::sqrt(static_cast<double>(d));
  for (int t = 1; t <= rounds; ++t) {
    for (std::uint64_t i = 0; i < q; ++i) {
      double* row = flat.data() + i * d;
      std::uint64_t bits = 0;
      for (int j = 0; j < d; ++j) {
        if (j % 64 == 0) bits = rng();
        const double sign = (bits >> (j % 64)) & 1u ? 1.0 : -1.0;
        row[j] = incumbent[j] + sign * coord_step;
      }
    }
    const auto values = session.batch_query(flat, q);
    std::uint64_t arg_best = 0;
    for (std::uint64_t i = 0; i < q; ++i) {
      std::span<const double> x(flat.data() + i * d,
                                static_cast<std::size_t>(d));
      const int index = oracle.progress(x).index;
      best_index = std::max(best_index, index);
      if (i < kFloorAuditsPerRound) {
        check_gradient_floor(oracle, x, index);
      }
      if (values[i] < values[arg_best]) {
        arg_best = i;
      }
    }
    if (values[arg_best] < incumbent_value) {
      incumbent_value = values[arg_best];
      incumbent.assign(flat.data() + arg_best * d,
                       flat.data() + (arg_best + 1) * d);
    }
    out.progress.push_back(best_index);
  }
  out.ledger = session.ledger();
  return out;
}

BaselineResult fd_descent_baseline(const ChainOracle& oracle, int rounds,
                                   std::uint64_t queries_per_round) {
  validate(rounds, queries_per_round);
  if (queries_per_round < 2) {
    throw ConfigError(
        "fd descent needs at least 2 queries per round (iterate + probe)");
  }
  BatchSession session(oracle);
  const int d = oracle.dim();
  const double h = 1e-4 * oracle.sigma();
  const double step = 1.0 / std::max(1.0, oracle.lipschitz());

  std::vector<double> x(static_cast<std::size_t>(d), 0.0);
  BaselineResult out;
  out.progress.assign(1, 0);
  int best_index = 0;
  int window_start = 0;
  for (int t = 1; t <= rounds; ++t) {
    const int m =
        static_cast<int>(std::min<std::uint64_t>(queries_per_round - 1,
                                                 static_cast<std::uint64_t>(d)));
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(m + 1) * d);
    flat.insert(flat.end(), x.begin(), x.end());
    std::vector<int> coords(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      coords[static_cast<std::size_t>(j)] = (window_start + j) % d;
      std::vector<double> probe = x;
      probe[static_cast<std::size_t>(coords[static_cast<std::size_t>(j)])] += h;
      flat.insert(flat.end(), probe.begin(), probe.end());
    }
    window_start = (window_start + m) % d;
    const auto values =
        session.batch_query(flat, static_cast<std::uint64_t>(m) + 1);
    for (int j = 0; j <= m; ++j) {
      std::span<const double> pt(
          flat.data() + static_cast<std::size_t>(j) * d,
          static_cast<std::size_t>(d));
      const int index = oracle.progress(pt).index;
      best_index = std::max(best_index, index);
      if (static_cast<std::uint64_t>(j) < kFloorAuditsPerRound) {
        check_gradient_floor(oracle, pt, index);
      }
    }
    for (int j = 0; j < m; ++j) {
      const double g =
          (values[static_cast<std::size_t>(j) + 1] - values[0]) / h;
      x[static_cast<std::size_t>(coords[static_cast<std::size_t>(j)])] -=
          step * g;
    }
    out.progress.push_back(best_index);
  }
  out.ledger = session.ledger();
  return out;
}

}  // namespace flowtrap
