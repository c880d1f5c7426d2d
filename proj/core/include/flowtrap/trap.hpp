#pragma once

// Round-budgeted stationary-point search by grid trapping. Each of the k
// rounds lays ell_t barriers per axis across the current search rectangle,
// queries a net on every barrier slice in one parallel batch, moves the
// iterate to the best sufficiently-descending net point (or keeps it), and
// shrinks the rectangle to a 3-cell window around the new iterate. The
// schedules are chosen so the final rectangle has sides at most
// eps/(2 sqrt(d) L) while every boundary it ever had stays
// eps_t-unreachable from the iterate; a gradient-Lipschitz bound then
// turns the trapped region into an eps-stationary (or eps-KKT) output.

#include <cstdint>
#include <string>
#include <vector>

#include "flowtrap/geometry.hpp"
#include "flowtrap/oracle.hpp"

namespace flowtrap {

enum class SolveMode {
  unconstrained,  // minimize over R^d; requires f >= 0 everywhere
  cube,           // minimize over [0,1]^d; output is an eps-KKT corner
};

// Hard cap on net sizes (points per net and per round), read from the
// FLOWTRAP_NET_CAP environment variable; 1e8 when unset.
std::uint64_t net_cap_from_env();

struct SolveConfig {
  double eps = 0.0;
  double lipschitz = 0.0;
  int d = 0;
  int k = 0;
  Point x0;
  SolveMode mode = SolveMode::cube;
  std::uint64_t net_cap = 100000000;

  // When positive, after every iteration this many random points of the
  // new rectangle's boundary (minus the cube boundary in cube mode) are
  // checked for eps_t-unreachability with direct objective evaluations
  // that bypass the query ledger.
  int boundary_samples = 0;
  std::uint64_t instrument_seed = 0;
};

struct IterationRecord {
  int t = 0;
  std::uint64_t ell = 0;
  double delta = 0.0;
  double eps_t = 0.0;  // threshold used when selecting this round
  std::uint64_t queries = 0;
  std::uint64_t cum_queries = 0;
  double diam = 0.0;  // max side of the compressed rectangle
  double f_best = 0.0;
  Point x;  // iterate after this round
  HyperRectangle rect;  // rectangle after this round
  bool moved = false;
  // Distance from the new iterate to the nearest face not inherited from
  // the previous rectangle (the barrier margin).
  double new_face_distance = 0.0;
  // Boundary instrumentation; checked = 0 when disabled or when the whole
  // boundary lies on the cube boundary.
  int boundary_checked = 0;
  int boundary_unreachable = 0;
};

struct SolveResult {
  Point x;
  double f_x = 0.0;
  // Gradient norm at the output measured for verification: analytic when
  // the objective provides one, finite differences otherwise. In cube
  // mode this is the projected (KKT) norm.
  double grad_norm = -1.0;
  bool grad_is_fd = false;
  bool verified = false;

  std::vector<IterationRecord> iterations;
  QueryLedger ledger;
  std::uint64_t verification_queries = 0;

  // Round counting, both conventions: barrier rounds alone (the round
  // budget k, plus one extraction round in cube mode), and every ledger
  // round including the initial f(x0) evaluation.
  int rounds_algorithm = 0;
  int rounds_total = 0;

  HyperRectangle final_rect;
  double final_diameter = 0.0;
  double eps_final = 0.0;  // eps_k

  // Cube-mode extraction: measured projected gradient norm per corner of
  // the final rectangle, the accepted corner, and the step used.
  std::vector<double> corner_grad_norms;
  int corner_index = -1;
  double fd_step = 0.0;
};

// Per-round barrier-count exponent E_t: with q = 2d/(d+1),
//   E_t = ((d-1)/(d+1)) * q^t / (q^k - 1).
// The geometric sum telescopes so that E_0 + ... + E_{k-1} = 1 exactly:
// the k rounds jointly spend the whole barrier budget.
double barrier_exponent(int d, int k, int t);

// Barrier budget base B: ell_t = ceil(B^{E_t}). Cube domain:
//   B = 3^k * 2 sqrt(d) L / eps.
// Unconstrained, with initial value f0 = f(x0) and eps0 = eps/4 (the
// initial rectangle is the inf-ball of radius 2 f0/eps0, side 4 f0/eps0):
//   B = 3^k * 8 f0 sqrt(d) L / (eps0 * eps).
// Chosen so the final diameter bound eps/(2 sqrt(d) L) comes out exactly:
// the per-axis shrink factor of round t is 3/ell_t, and the ell_t multiply
// to at least B, leaving side_k <= side_0 * 3^k / B.
double schedule_base_cube(int d, int k, double eps, double lipschitz);
double schedule_base_unconstrained(int d, int k, double eps, double lipschitz,
                                   double f_x0);

// max(3, ceil(base^exponent)); throws ResourceLimitError on overflow.
std::uint64_t barrier_count(double base, double exponent);

// Net spacing for round t:
//   delta_t = sqrt(eps * r_min * (3/4)^(t d) / (40 * 3^k * ell * d sqrt(d) L)).
double net_spacing(int d, int k, double eps, double lipschitz, double r_min,
                   std::uint64_t ell, int t);

// eps_{t+1} = eps_t + eps (3/4)^(t d) / (16 d). Starting from eps/4 this
// stays below eps/2 forever.
double next_descent_threshold(double eps_t, int t, int d, double eps);

// Runs the full k-round search through `session`. Rounds recorded in the
// session ledger: one initial f(x0) round, k barrier rounds, and in cube
// mode one corner-extraction round. Throws ConfigError for invalid
// configurations, ResourceLimitError when a net exceeds cfg.net_cap, and
// ContractError when the objective breaks its side of the deal (negative
// values in unconstrained mode, or no final corner within eps).
SolveResult solve(const SolveConfig& cfg, BatchSession& session);

// Trace CSV ("# flowtrap.trace.v1"): one row per iteration with
// t,ell,delta,eps_t,queries,cum_queries,diam,f_best and the d iterate
// coordinates.
std::string trace_to_csv(const SolveConfig& cfg, const SolveResult& result);

// JSON document ("flowtrap.summary.v1") with the config echo, output
// point, verification gradient norm, both round conventions, query
// totals, and the final rectangle.
std::string summary_to_json(const SolveConfig& cfg, const SolveResult& result,
                            const std::string& objective_name,
                            std::uint64_t seed);

}  // namespace flowtrap
