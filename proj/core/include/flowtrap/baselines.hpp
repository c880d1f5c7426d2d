#pragma once

// Deliberately simple low-adaptivity baselines raced against the chain
// oracle. Both report how deep into the chain their queries reached after
// every round, via the running max progress index over all queried points.

#include <cstdint>
#include <span>
#include <vector>

#include "flowtrap/chain.hpp"
#include "flowtrap/oracle.hpp"

namespace flowtrap {

struct BaselineResult {
  // One entry per round plus a leading entry for "before any query"
  // (always 0): progress[t] is the max progress index over every point
  // queried in rounds 1..t.
  std::vector<int> progress;
  QueryLedger ledger;
};

// Audits a queried point against the hard instance's gradient floor: any
// point with progress index <= r must have |grad f| >= 0.08 * amplitude /
// sigma. Throws ContractError on violation; a violation means the instance
// is broken, not the caller.
void check_gradient_floor(const ChainOracle& oracle, std::span<const double> x,
                          int progress_index);

// Incumbent-centered random search from the origin: every round proposes
// queries_per_round points one characteristic length (step_scale * sigma)
// from the incumbent along simultaneous-perturbation directions (uniform
// random signs per coordinate), then keeps the best point seen so far. The
// first few points of each batch get the gradient floor audit.
BaselineResult random_search_baseline(const ChainOracle& oracle, int rounds,
                                      std::uint64_t queries_per_round,
                                      double step_scale, std::uint64_t seed);

// Block-coordinate finite-difference descent from the origin: each round
// spends one query on the iterate and queries_per_round - 1 forward probes
// on a cycling coordinate window, then steps along the estimated partial
// gradient with the conservative 1/L step size. Deterministic; the first
// few points of each batch get the gradient floor audit.
BaselineResult fd_descent_baseline(const ChainOracle& oracle, int rounds,
                                   std::uint64_t queries_per_round);

}  // namespace flowtrap
