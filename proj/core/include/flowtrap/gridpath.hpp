#pragma once

// Monotone path functions on grid graphs and the round-budgeted local
// minimum search they are hard for. A hidden coordinate-increasing path of
// n steps gets value -|v|_1 on the path and +|v|_1 off it, which plants a
// unique local minimum at the path's far end; finding it with few batched
// query rounds is the combinatorial core that lower-bounds parallel
// stationary-point search, and square(v) plus the (2d+1) budget factor is
// the accounting that carries query counts across that reduction.

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "flowtrap/geometry.hpp"
#include "flowtrap/oracle.hpp"

namespace flowtrap {

// Vertex set {0..n}^d with edges between vertices at L1 distance 1.
struct GridGraph {
  int n = 0;
  int d = 0;

  bool contains(std::span<const int> v) const;
  // (n+1)^d; throws ResourceLimitError if it overflows 64 bits.
  std::uint64_t vertex_count() const;
};

// Path v^0 = 0, v^1, ..., v^n where step i increments axis steps[i-1] by
// one. All vertices stay in {0..n}^d because a coordinate can reach n only
// on the final step.
struct MonotonePath {
  int n = 0;
  int d = 0;
  std::uint64_t seed = 0;
  std::vector<int> steps;  // n axis indices

  std::vector<std::vector<int>> vertices() const;
};

// Uniform i.i.d. axis choice per step among axes still below their cap;
// deterministic under seed. d = 1 yields the unique path 0,1,...,n.
MonotonePath random_monotone_path(int n, int d, std::uint64_t seed);

// JSON round trip (fields n, d, seed, steps).
std::string path_to_json(const MonotonePath& path);
MonotonePath path_from_json(const std::string& text);

// Value oracle for the path function
//   P(v) = -|v|_1 if v is on the path, +|v|_1 otherwise,
// with a query ledger for round accounting. value() is pure and does not
// touch the ledger; batch_query() records one round per call.
class PathOracle {
 public:
  explicit PathOracle(MonotonePath path);

  const MonotonePath& path() const { return path_; }
  GridGraph grid() const { return GridGraph{path_.n, path_.d}; }

  // Exact path function; throws ConfigError for out-of-grid vertices.
  long long value(std::span<const int> v) const;
  bool on_path(std::span<const int> v) const;
  // Path position of v (0..n) or -1 when off the path.
  int position(std::span<const int> v) const;

  // Evaluates `count` vertices packed row-major as one parallel round.
  std::vector<long long> batch_query(std::span<const int> flat_vertices,
                                     std::uint64_t count);

  const QueryLedger& ledger() const { return ledger_; }

 private:
  MonotonePath path_;
  std::vector<std::vector<int>> path_vertices_;
  // Hash from vertex to path position.
  struct VertexHash {
    std::size_t operator()(const std::vector<int>& v) const;
  };
  std::unordered_map<std::vector<int>, int, VertexHash> position_;
  QueryLedger ledger_;
};

// Free-function spelling of the oracle value.
long long path_value(const PathOracle& oracle, std::span<const int> v);

// P(v) <= P(u) for every grid neighbor u of v. The path endpoint is the
// unique vertex satisfying this. Pure; bypasses the ledger.
bool is_local_min(const PathOracle& oracle, std::span<const int> v);

// Path-query budget earned by a smooth-side algorithm that used
// `queries_smooth` queries in dimension d: (2d+1) * queries_smooth.
std::uint64_t reduction_budget(std::uint64_t queries_smooth, int d);

// Axis-aligned box assigned to vertex v in the embedding of the grid into
// [0,1]^d: the product of [v_s/(n+1), (v_s+1)/(n+1)]. The boxes tile the
// cube as v ranges over the grid.
HyperRectangle square(std::span<const int> v, int n);

enum class Strategy {
  frontier,      // follow the path; query untested successors in axis order
  random_probe,  // i.i.d. uniform vertices each round
  exhaustive,    // lexicographic sweep of the whole grid
};

Strategy parse_strategy(const std::string& name);
std::string strategy_name(Strategy strategy);

struct SearchResult {
  bool found = false;
  QueryLedger ledger;

  int rounds_used() const { return ledger.round_count(); }
  std::uint64_t queries_used() const { return ledger.total(); }
};

// Runs `strategy` for at most `rounds` rounds of at most `queries_per_round`
// queries each, stopping early once the path endpoint (the unique local
// minimum) has been identified, by querying it or by eliminating every
// other successor of the deepest known path vertex. Requires a fresh oracle
// (empty ledger) so the returned ledger is exactly this run's audit trail.
SearchResult round_limited_search(PathOracle& oracle, int rounds,
                                  std::uint64_t queries_per_round,
                                  Strategy strategy, std::uint64_t seed);

// Queries-per-round scale at which k-round searches start failing:
//   n^((d^(k+1) - d^k) / (d^k - 1)) / (20 d k).
// Reported next to measured failure rates, never asserted.
double theorem_query_scale(int n, int d, int k);

// CSV schema "# flowtrap.gridbench.v1" for search experiments.
std::string grid_experiment_csv_header();
std::string grid_experiment_csv_row(int n, int d, int k, std::uint64_t q,
                                    std::uint64_t seed,
                                    const SearchResult& result);

}  // namespace flowtrap
