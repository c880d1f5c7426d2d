#include "flowtrap/gridpath.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include <json.hpp>

#include "flowtrap/errors.hpp"
#include "flowtrap/rng.hpp"

namespace flowtrap {

bool GridGraph::contains(std::span<const int> v) const {
  if (static_cast<int>(v.size()) != d) {
    return false;
  }
  for (const int c : v) {
    if (c < 0 || c > n) {
      return false;
    }
  }
  return true;
}

std::uint64_t GridGraph::vertex_count() const {
  if (n < 1 || d < 1) {
    throw ConfigError("grid needs n >= 1 and d >= 1");
  }
  unsigned __int128 total = 1;
  for (int j = 0; j < d; ++j) {
    total *= static_cast<unsigned>(n + 1);
    if (total > static_cast<unsigned __int128>(UINT64_MAX)) {
      throw ResourceLimitError("grid vertex count overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(total);
}

namespace {

void validate_path(const MonotonePath& path) {
  if (path.n < 1 || path.d < 1) {
    throw ConfigError("monotone path needs n >= 1 and d >= 1");
  }
  if (static_cast<int>(path.steps.size()) != path.n) {
    throw ConfigError("monotone path needs exactly n steps, got " +
                      std::to_string(path.steps.size()));
  }
  std::vector<int> counts(static_cast<std::size_t>(path.d), 0);
  for (const int axis : path.steps) {
    if (axis < 0 || axis >= path.d) {
      throw ConfigError("monotone path step axis " + std::to_string(axis) +
                        " out of range");
    }
    if (++counts[axis] > path.n) {
      throw ConfigError("monotone path leaves the grid on axis " +
                        std::to_string(axis));
    }
  }
}

}  // namespace

std::vector<std::vector<int>> MonotonePath::vertices() const {
  validate_path(*this);
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  std::vector<int> v(static_cast<std::size_t>(d), 0);
  out.push_back(v);
  for (const int axis : steps) {
    ++v[axis];
    out.push_back(v);
  }
  return out;
}

MonotonePath random_monotone_path(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1) {
    throw ConfigError("random_monotone_path needs n >= 1 and d >= 1");
  }
  Rng rng(seed);
  MonotonePath path;
  path.n = n;
  path.d = d;
  path.seed = seed;
  path.steps.reserve(static_cast<std::size_t>(n));
  std::vector<int> v(static_cast<std::size_t>(d), 0);
  std::vector<int> live;
  for (int step = 0; step < n; ++step) {
    live.clear();
    for (int j = 0; j < d; ++j) {
      if (v[j] < n) {
        live.push_back(j);
      }
    }
    const int axis = live[bounded_rand(rng, live.size())];
    path.steps.push_back(axis);
    ++v[axis];
  }
  return path;
}

std::string path_to_json(const MonotonePath& path) {
  validate_path(path);
  nlohmann::json doc;
  doc["n"] = path.n;
  doc["d"] = path.d;
  doc["seed"] = path.seed;
  doc["steps"] = path.steps;
  return doc.dump();
}

MonotonePath path_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    MonotonePath path;
    path.n = doc.at("n").get<int>();
    path.d = doc.at("d").get<int>();
    path.seed = doc.at("seed").get<std::uint64_t>();
    path.steps = doc.at("steps").get<std::vector<int>>();
    validate_path(path);
    return path;
  } catch (const nlohmann::json::exception& err) {
    throw ConfigError(std::string("bad monotone path JSON: ") + err.what());
  }
}

std::size_t PathOracle::VertexHash::operator()(
    const std::vector<int>& v) const {
  // FNV-1a over the coordinate words.
  std::uint64_t h = 14695981039346656037ULL;
  for (const int c : v) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c));
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

PathOracle::PathOracle(MonotonePath path) : path_(std::move(path)) {
  validate_path(path_);
  path_vertices_ = path_.vertices();
  position_.reserve(path_vertices_.size());
  for (std::size_t i = 0; i < path_vertices_.size(); ++i) {
    position_.emplace(path_vertices_[i], static_cast<int>(i));
  }
}

int PathOracle::position(std::span<const int> v) const {
  const std::vector<int> key(v.begin(), v.end());
  const auto it = position_.find(key);
  return it == position_.end() ? -1 : it->second;
}

bool PathOracle::on_path(std::span<const int> v) const {
  return position(v) >= 0;
}

long long PathOracle::value(std::span<const int> v) const {
  if (!grid().contains(v)) {
    throw ConfigError("path oracle queried outside the grid");
  }
  long long norm1 = 0;
  for (const int c : v) {
    norm1 += c;
  }
  return on_path(v) ? -norm1 : norm1;
}

std::vector<long long> PathOracle::batch_query(
    std::span<const int> flat_vertices, std::uint64_t count) {
  if (count == 0) {
    throw ConfigError("path oracle rejects empty batches");
  }
  const auto d = static_cast<std::uint64_t>(path_.d);
  if (flat_vertices.size() != count * d) {
    throw ConfigError("path batch size does not match vertex count");
  }
  std::vector<long long> values;
  values.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    values.push_back(value(flat_vertices.subspan(i * d, d)));
  }
  ledger_.record_round(count);
  return values;
}

long long path_value(const PathOracle& oracle, std::span<const int> v) {
  return oracle.value(v);
}

bool is_local_min(const PathOracle& oracle, std::span<const int> v) {
  const long long here = oracle.value(v);
  const GridGraph grid = oracle.grid();
  std::vector<int> u(v.begin(), v.end());
  for (int j = 0; j < grid.d; ++j) {
    for (const int delta : {-1, 1}) {
      u[j] = v[j] + delta;
      if (u[j] >= 0 && u[j] <= grid.n && oracle.value(u) < here) {
        return false;
      }
      u[j] = v[j];
    }
  }
  return true;
}

std::uint64_t reduction_budget(std::uint64_t queries_smooth, int d) {
  if (d < 1) {
    throw ConfigError("reduction_budget needs d >= 1");
  }
  const auto factor = static_cast<std::uint64_t>(2 * d + 1);
  if (queries_smooth > UINT64_MAX / factor) {
    throw ResourceLimitError("reduction budget overflows 64 bits");
  }
  return factor * queries_smooth;
}

HyperRectangle square(std::span<const int> v, int n) {
  if (n < 1) {
    throw ConfigError("square needs n >= 1");
  }
  const double cells = static_cast<double>(n) + 1.0;
  std::vector<double> lo(v.size());
  std::vector<double> hi(v.size());
  for (std::size_t s = 0; s < v.size(); ++s) {
    if (v[s] < 0 || v[s] > n) {
      throw ConfigError("square vertex is outside the grid");
    }
    lo[s] = static_cast<double>(v[s]) / cells;
    hi[s] = (static_cast<double>(v[s]) + 1.0) / cells;
  }
  return HyperRectangle(std::move(lo), std::move(hi));
}

Strategy parse_strategy(const std::string& name) {
  if (name == "frontier") {
    return Strategy::frontier;
  }
  if (name == "random_probe" || name == "random-probe") {
    return Strategy::random_probe;
  }
  if (name == "exhaustive") {
    return Strategy::exhaustive;
  }
  throw ConfigError("unknown search strategy \"" + name + "\"");
}

std::string strategy_name(Strategy strategy) {
  switch (strategy) {
    case Strategy::frontier:
      return "frontier";
    case Strategy::random_probe:
      return "random_probe";
    case Strategy::exhaustive:
      return "exhaustive";
  }
  throw ConfigError("unknown search strategy value");
}

namespace {

// Frontier state: the deepest known path vertex and which of its
// successors are still live. A successor proven off-path dies; when one
// live successor remains it must be the next path vertex, so the frontier
// advances without spending a query.
struct FrontierState {
  std::vector<int> vertex;
  int depth = 0;
  std::vector<int> untested;  // axes, ascending

  void rebuild_untested(int n) {
    untested.clear();
    for (int j = 0; j < static_cast<int>(vertex.size()); ++j) {
      if (vertex[j] < n) {
        untested.push_back(j);
      }
    }
  }

  void advance(int axis, int n) {
    ++vertex[axis];
    ++depth;
    rebuild_untested(n);
  }

  // Chained elimination steps; returns true when the endpoint is reached.
  bool settle(int n) {
    while (depth < n && untested.size() == 1) {
      advance(untested[0], n);
    }
    return depth >= n;
  }
};

bool frontier_search(PathOracle& oracle, int rounds,
                     std::uint64_t queries_per_round) {
  const int n = oracle.path().n;
  const int d = oracle.path().d;
  FrontierState state;
  state.vertex.assign(static_cast<std::size_t>(d), 0);
  state.rebuild_untested(n);
  if (state.settle(n)) {
    return true;
  }
  std::vector<int> flat;
  std::vector<int> axes;
  for (int round = 0; round < rounds; ++round) {
    const std::uint64_t batch =
        std::min<std::uint64_t>(queries_per_round, state.untested.size());
    axes.assign(state.untested.begin(),
                state.untested.begin() + static_cast<std::size_t>(batch));
    flat.clear();
    for (const int axis : axes) {
      ++state.vertex[axis];
      flat.insert(flat.end(), state.vertex.begin(), state.vertex.end());
      --state.vertex[axis];
    }
    const std::vector<long long> values = oracle.batch_query(flat, batch);
    int hit_axis = -1;
    for (std::uint64_t i = 0; i < batch; ++i) {
      if (values[i] == -static_cast<long long>(state.depth + 1)) {
        hit_axis = axes[i];
        break;
      }
    }
    if (hit_axis >= 0) {
      state.advance(hit_axis, n);
    } else {
      for (const int axis : axes) {
        state.untested.erase(
            std::remove(state.untested.begin(), state.untested.end(), axis),
            state.untested.end());
      }
    }
    if (state.depth >= n || state.settle(n)) {
      return true;
    }
  }
  return false;
}

bool random_probe_search(PathOracle& oracle, int rounds,
                         std::uint64_t queries_per_round, std::uint64_t seed) {
  const int n = oracle.path().n;
  const int d = oracle.path().d;
  Rng rng(seed);
  std::vector<int> flat;
  for (int round = 0; round < rounds; ++round) {
    flat.clear();
    flat.reserve(queries_per_round * static_cast<std::uint64_t>(d));
    for (std::uint64_t i = 0; i < queries_per_round; ++i) {
      for (int j = 0; j < d; ++j) {
        flat.push_back(static_cast<int>(
            bounded_rand(rng, static_cast<std::uint64_t>(n) + 1)));
      }
    }
    const std::vector<long long> values =
        oracle.batch_query(flat, queries_per_round);
    for (const long long v : values) {
      if (v == -static_cast<long long>(n)) {
        return true;
      }
    }
  }
  return false;
}

bool exhaustive_search(PathOracle& oracle, int rounds,
                       std::uint64_t queries_per_round) {
  const int n = oracle.path().n;
  const int d = oracle.path().d;
  std::vector<int> v(static_cast<std::size_t>(d), 0);
  bool done = false;
  std::vector<int> flat;
  for (int round = 0; round < rounds && !done; ++round) {
    flat.clear();
    std::uint64_t batch = 0;
    while (batch < queries_per_round && !done) {
      flat.insert(flat.end(), v.begin(), v.end());
      ++batch;
      int j = d - 1;
      while (j >= 0 && v[j] == n) {
        v[j] = 0;
        --j;
      }
      if (j < 0) {
        done = true;
      } else {
        ++v[j];
      }
    }
    if (batch == 0) {
      break;
    }
    const std::vector<long long> values = oracle.batch_query(flat, batch);
    for (const long long value : values) {
      if (value == -static_cast<long long>(n)) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace

SearchResult round_limited_search(PathOracle& oracle, int rounds,
                                  std::uint64_t queries_per_round,
                                  Strategy strategy, std::uint64_t seed) {
  if (rounds < 1 || queries_per_round < 1) {
    throw ConfigError("round_limited_search needs k >= 1 and q >= 1");
  }
  if (oracle.ledger().round_count() != 0) {
    throw ConfigError(
        "round_limited_search needs a fresh oracle so the returned ledger "
        "is this run's audit trail");
  }
  SearchResult result;
  switch (strategy) {
    case Strategy::frontier:
      result.found = frontier_search(oracle, rounds, queries_per_round);
      break;
    case Strategy::random_probe:
      result.found =
          random_probe_search(oracle, rounds, queries_per_round, seed);
      break;
    case Strategy::exhaustive:
      result.found = exhaustive_search(oracle, rounds, queries_per_round);
      break;
  }
  result.ledger = oracle.ledger();
  return result;
}

double theorem_query_scale(int n, int d, int k) {
  if (n < 1 || d < 2 || k < 1) {
    throw ConfigError("theorem_query_scale needs n >= 1, d >= 2, k >= 1");
  }
  const double dk = std::pow(static_cast<double>(d), k);
  const double exponent = (dk * d - dk) / (dk - 1.0);
  return std::pow(static_cast<double>(n), exponent) / (20.0 * d * k);
}

std::string grid_experiment_csv_header() {
  return "# flowtrap.gridbench.v1\n"
         "n,d,k,q,seed,found,rounds_used,queries_used\n";
}

std::string grid_experiment_csv_row(int n, int d, int k, std::uint64_t q,
                                    std::uint64_t seed,
                                    const SearchResult& result) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d,%d,%d,%llu,%llu,%d,%d,%llu\n", n, d, k,
                static_cast<unsigned long long>(q),
                static_cast<unsigned long long>(seed), result.found ? 1 : 0,
                result.rounds_used(),
                static_cast<unsigned long long>(result.queries_used()));
  return buf;
}

}  // namespace flowtrap
