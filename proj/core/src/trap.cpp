#include "flowtrap/trap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "flowtrap/errors.hpp"
#include "flowtrap/rng.hpp"

namespace flowtrap {

namespace {

constexpr std::uint64_t kDefaultNetCap = 100000000;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}


}  // namespace

std::uint64_t net_cap_from_env() {
  const char* raw = std::getenv("FLOWTRAP_NET_CAP");
  if (raw == nullptr || *raw == '\0') {
    return kDefaultNetCap;
  }
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(v >= 1.0) || v > 1.8e19) {
    throw ConfigError(
        "FLOWTRAP_NET_CAP must be a number in [1, 1.8e19], got \"" +
        std::string(raw) + "\"");
  }
  return static_cast<std::uint64_t>(v);
}

double barrier_exponent(int d, int k, int t) {
  if (d < 2) {
    throw ConfigError("barrier_exponent: dimension must be at least 2");
  }
  if (k < 1 || t < 0 || t >= k) {
    throw ConfigError("barrier_exponent: need 0 <= t < k and k >= 1");
  }
  const double q = 2.0 * d / (d + 1.0);
  return (d - 1.0) / (d + 1.0) * std::pow(q, t) / (std::pow(q, k) - 1.0);
}

double schedule_base_cube(int d, int k, double eps, double lipschitz) {
  if (d < 2 || k < 1 || !(eps > 0.0) || !(lipschitz > 0.0)) {
    throw ConfigError("schedule base: need d >= 2, k >= 1, eps > 0, L > 0");
  }
  return std::pow(3.0, k) * 2.0 * std::sqrt(static_cast<double>(d)) *
         lipschitz / eps;
}

double schedule_base_unconstrained(int d, int k, double eps, double lipschitz,
                                   double f_x0) {
  if (d < 2 || k < 1 || !(eps > 0.0) || !(lipschitz > 0.0)) {
    throw ConfigError("schedule base: need d >= 2, k >= 1, eps > 0, L > 0");
  }
  if (!(f_x0 > 0.0)) {
    throw ConfigError("schedule base: initial value must be positive");
  }
  const double eps0 = eps / 4.0;
  return std::pow(3.0, k) * 8.0 * f_x0 * std::sqrt(static_cast<double>(d)) *
         lipschitz / (eps0 * eps);
}

std::uint64_t barrier_count(double base, double exponent) {
  if (!(base > 0.0) || !(exponent > 0.0)) {
    throw ConfigError("barrier_count: base and exponent must be positive");
  }
  const double raw = std::pow(base, exponent);
  if (!(raw < 9.0e18)) {
    throw ResourceLimitError("barrier count " + format_double(raw) +
                             " does not fit in 64 bits");
  }
  const auto count = static_cast<std::uint64_t>(std::ceil(raw));
  return std::max<std::uint64_t>(3, count);
}

double net_spacing(int d, int k, double eps, double lipschitz, double r_min,
                   std::uint64_t ell, int t) {
  if (d < 2 || k < 1 || !(eps > 0.0) || !(lipschitz > 0.0) || !(r_min > 0.0) ||
      ell < 2 || t < 0) {
    throw ConfigError("net_spacing: invalid schedule parameters");
  }
  const double shrink = std::pow(0.75, static_cast<double>(t) * d);
  const double sd = std::sqrt(static_cast<double>(d));
  const double denom = 40.0 * std::pow(3.0, k) *
                       static_cast<double>(ell) * d * sd * lipschitz;
  return std::sqrt(eps * r_min * shrink / denom);
}

double next_descent_threshold(double eps_t, int t, int d, double eps) {
  if (d < 2 || t < 0 || !(eps > 0.0)) {
    throw ConfigError("next_descent_threshold: invalid parameters");
  }
  return eps_t + eps * std::pow(0.75, static_cast<double>(t) * d) / (16.0 * d);
}

namespace {

struct BoundaryReport {
  int checked = 0;
  int unreachable = 0;
};

// Samples random points on the boundary of `rect`, faces weighted by their
// (d-1)-volume, and counts how many are eps-unreachable from x. Faces lying
// on the cube boundary are skipped in cube mode because the search region
// is allowed to touch the domain boundary there. Evaluations go straight to
// the objective: instrumentation must not perturb the query ledger.
BoundaryReport check_boundary(const Objective& objective,
                              const HyperRectangle& rect, bool skip_cube_faces,
                              std::span<const double> x, double f_x,
                              double eps, int samples, Rng& rng) {
  BoundaryReport report;
  const int d = rect.dim();
  std::vector<int> face_axis;
  std::vector<double> face_coord;
  std::vector<double> cumulative;
  double total_weight = 0.0;
  for (int j = 0; j < d; ++j) {
    double weight = 1.0;
    for (int i = 0; i < d; ++i) {
      if (i != j) {
        weight *= rect.side(i);
      }
    }
    for (const double coord : {rect.lo[j], rect.hi[j]}) {
      if (skip_cube_faces && (coord == 0.0 || coord == 1.0)) {
        continue;
      }
      face_axis.push_back(j);
      face_coord.push_back(coord);
      total_weight += weight;
      cumulative.push_back(total_weight);
    }
  }
  if (face_axis.empty() || !(total_weight > 0.0)) {
    return report;
  }
  Point y(static_cast<std::size_t>(d));
  for (int s = 0; s < samples; ++s) {
    const double pick = uniform01(rng) * total_weight;
    std::size_t f = 0;
    while (f + 1 < cumulative.size() && cumulative[f] <= pick) {
      ++f;
    }
    const int axis = face_axis[f];
    for (int i = 0; i < d; ++i) {
      y[i] = (i == axis) ? face_coord[f]
                         : uniform_real(rng, rect.lo[i], rect.hi[i]);
    }
    const double f_y = objective.value(y);
    ++report.checked;
    if (is_unreachable(f_x, f_y, x, y, eps)) {
      ++report.unreachable;
    }
  }
  return report;
}

// Finite-difference gradient through verification queries. Central
// differences where both probes stay in the domain, one-sided into the
// cube otherwise.
std::vector<double> fd_gradient(BatchSession& session,
                                std::span<const double> x, double h,
                                bool cube_domain) {
  const int d = static_cast<int>(x.size());
  std::vector<double> grad(static_cast<std::size_t>(d), 0.0);
  Point probe(x.begin(), x.end());
  double f_center = 0.0;
  bool have_center = false;
  for (int j = 0; j < d; ++j) {
    const bool central =
        !cube_domain || (x[j] - h >= 0.0 && x[j] + h <= 1.0);
    if (central) {
      probe[j] = x[j] + h;
      const double f_plus = session.verification_query(probe);
      probe[j] = x[j] - h;
      const double f_minus = session.verification_query(probe);
      grad[j] = (f_plus - f_minus) / (2.0 * h);
    } else {
      if (!have_center) {
        f_center = session.verification_query(x);
        have_center = true;
      }
      const double dir = (x[j] + h <= 1.0) ? 1.0 : -1.0;
      probe[j] = x[j] + dir * h;
      const double f_side = session.verification_query(probe);
      grad[j] = dir * (f_side - f_center) / h;
    }
    probe[j] = x[j];
  }
  return grad;
}

// Clamps gradient components pointing out of the cube at coordinates that
// sit exactly on the cube boundary; elsewhere the gradient is unchanged.
// The norm of the result is the KKT stationarity measure on [0,1]^d.
void project_cube_gradient(std::span<const double> x, std::span<double> grad) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] == 0.0) {
      grad[j] = std::min(0.0, grad[j]);
    } else if (x[j] == 1.0) {
      grad[j] = std::max(0.0, grad[j]);
    }
  }
}

void validate_config(const SolveConfig& cfg, const Objective& objective) {
  if (cfg.d < 2) {
    throw ConfigError("solve: dimension must be at least 2");
  }
  if (cfg.k < 1) {
    throw ConfigError("solve: round budget k must be at least 1");
  }
  if (!(cfg.eps > 0.0)) {
    throw ConfigError("solve: eps must be positive");
  }
  if (!(cfg.lipschitz > 0.0)) {
    throw ConfigError("solve: lipschitz must be positive");
  }
  if (cfg.net_cap < 1) {
    throw ConfigError("solve: net cap must be at least 1");
  }
  if (cfg.boundary_samples < 0) {
    throw ConfigError("solve: boundary_samples must be nonnegative");
  }
  if (static_cast<int>(cfg.x0.size()) != cfg.d) {
    throw ConfigError("solve: x0 has " + std::to_string(cfg.x0.size()) +
                      " coordinates, config says d = " +
                      std::to_string(cfg.d));
  }
  if (objective.dim() != cfg.d) {
    throw ConfigError("solve: objective dimension " +
                      std::to_string(objective.dim()) +
                      " differs from config d = " + std::to_string(cfg.d));
  }
  if (cfg.mode == SolveMode::unconstrained &&
      objective.domain() == Domain::unit_cube) {
    throw ConfigError(
        "solve: unconstrained mode needs an objective defined on all of "
        "R^d");
  }
  if (cfg.mode == SolveMode::cube) {
    for (const double c : cfg.x0) {
      if (!(c >= 0.0 && c <= 1.0)) {
        throw ConfigError("solve: cube mode requires x0 inside [0,1]^d");
      }
    }
  }
}

// Measures the projected gradient at every corner of the final rectangle
// with one batch of one-sided differences, accepts the corner with the
// smallest projected norm if it meets eps, and reports all estimates in a
// ContractError otherwise.
void extract_corner(const SolveConfig& cfg, BatchSession& session,
                    const HyperRectangle& rect, SolveResult& result) {
  const int d = cfg.d;
  if (d >= 32) {
    throw ResourceLimitError(
        "corner extraction enumerates 2^d corners; d = " + std::to_string(d) +
        " is out of reach");
  }
  const std::uint64_t corners = std::uint64_t{1} << d;
  const std::uint64_t batch = corners * static_cast<std::uint64_t>(d + 1);
  if (batch > cfg.net_cap) {
    throw ResourceLimitError("corner extraction batch of " +
                             std::to_string(batch) +
                             " points exceeds the net cap");
  }
  const double sd = std::sqrt(static_cast<double>(d));
  const double h =
      std::min(cfg.eps / (8.0 * cfg.lipschitz * sd), 1.0e-6 * sd);
  result.fd_step = h;

  // Batch layout per corner: the corner itself, then one probe per axis
  // stepped into the cube.
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(batch) * d);
  Point corner(static_cast<std::size_t>(d));
  for (std::uint64_t c = 0; c < corners; ++c) {
    for (int j = 0; j < d; ++j) {
      corner[j] = ((c >> j) & 1) ? rect.hi[j] : rect.lo[j];
    }
    flat.insert(flat.end(), corner.begin(), corner.end());
    for (int j = 0; j < d; ++j) {
      const double dir = (corner[j] + h <= 1.0) ? 1.0 : -1.0;
      const double kept = corner[j];
      corner[j] = kept + dir * h;
      flat.insert(flat.end(), corner.begin(), corner.end());
      corner[j] = kept;
    }
  }
  const std::vector<double> values = session.batch_query(flat, batch);

  result.corner_grad_norms.assign(corners, 0.0);
  std::vector<double> grad(static_cast<std::size_t>(d));
  int best = -1;
  double best_norm = std::numeric_limits<double>::infinity();
  for (std::uint64_t c = 0; c < corners; ++c) {
    const std::size_t base = static_cast<std::size_t>(c) * (d + 1);
    const double f_corner = values[base];
    for (int j = 0; j < d; ++j) {
      const double coord = ((c >> j) & 1) ? rect.hi[j] : rect.lo[j];
      const double dir = (coord + h <= 1.0) ? 1.0 : -1.0;
      grad[j] = dir * (values[base + 1 + j] - f_corner) / h;
    }
    const std::size_t row = static_cast<std::size_t>(c) * (d + 1) * d;
    project_cube_gradient(
        std::span<const double>(flat.data() + row, static_cast<std::size_t>(d)),
        grad);
    const double norm = norm2(grad);
    result.corner_grad_norms[c] = norm;
    if (norm < best_norm) {
      best_norm = norm;
      best = static_cast<int>(c);
    }
  }
  if (best < 0 || !(best_norm <= cfg.eps)) {
    std::string msg =
        "no corner of the final rectangle is eps-stationary (eps = " +
        format_double(cfg.eps) + "); projected norms:";
    for (const double n : result.corner_grad_norms) {
      msg += " " + format_double(n);
    }
    throw ContractError(msg);
  }
  const std::size_t row = static_cast<std::size_t>(best) * (d + 1) * d;
  result.x.assign(flat.begin() + row, flat.begin() + row + d);
  result.f_x = values[static_cast<std::size_t>(best) * (d + 1)];
  result.corner_index = best;
}

// Gradient check at the output point; fills grad_norm / grad_is_fd /
// verified. Projected norm in cube mode.
void verify_output(const SolveConfig& cfg, BatchSession& session,
                   SolveResult& result) {
  const Objective& objective = session.objective();
  const int d = cfg.d;
  std::vector<double> grad(static_cast<std::size_t>(d), 0.0);
  if (objective.gradient(result.x, grad)) {
    result.grad_is_fd = false;
  } else {
    const double sd = std::sqrt(static_cast<double>(d));
    double h = std::min(cfg.eps / (8.0 * cfg.lipschitz * sd), 1.0e-6 * sd);
    if (result.fd_step > 0.0) {
      h = result.fd_step;
    } else {
      result.fd_step = h;
    }
    grad = fd_gradient(session, result.x, h, cfg.mode == SolveMode::cube);
    result.grad_is_fd = true;
  }
  if (cfg.mode == SolveMode::cube) {
    project_cube_gradient(result.x, grad);
  }
  result.grad_norm = norm2(grad);
  result.verified = result.grad_norm <= cfg.eps;
}

}  // namespace

SolveResult solve(const SolveConfig& cfg, BatchSession& session) {
  const Objective& objective = session.objective();
  validate_config(cfg, objective);

  const int d = cfg.d;
  const int k = cfg.k;
  const double eps = cfg.eps;
  const double lipschitz = cfg.lipschitz;

  SolveResult result;
  Point x = cfg.x0;
  double f_x = session.single_query(x);

  HyperRectangle rect;
  double base = 0.0;
  if (cfg.mode == SolveMode::cube) {
    rect = HyperRectangle::cube(d, 0.0, 1.0);
    base = schedule_base_cube(d, k, eps, lipschitz);
  } else {
    if (f_x < 0.0) {
      throw ContractError(
          "unconstrained mode requires a nonnegative objective; f(x0) = " +
          format_double(f_x));
    }
    if (f_x == 0.0) {
      // f >= 0 with f(x0) = 0 makes x0 a global minimum, hence exactly
      // stationary; there is nothing left to search.
      result.x = x;
      result.f_x = f_x;
      result.final_rect = HyperRectangle(x, x);
      result.final_diameter = 0.0;
      result.eps_final = eps / 4.0;
      verify_output(cfg, session, result);
      result.ledger = session.ledger();
      result.verification_queries = session.verification_queries();
      result.rounds_algorithm = 0;
      result.rounds_total = result.ledger.round_count();
      return result;
    }
    const double eps0 = eps / 4.0;
    rect = HyperRectangle::inf_ball(x, 2.0 * f_x / eps0);
    base = schedule_base_unconstrained(d, k, eps, lipschitz, f_x);
  }

  Rng instrument_rng(cfg.instrument_seed);
  double eps_t = eps / 4.0;
  result.iterations.reserve(static_cast<std::size_t>(k));

  for (int t = 0; t < k; ++t) {
    const std::uint64_t ell = barrier_count(base, barrier_exponent(d, k, t));
    const double delta =
        net_spacing(d, k, eps, lipschitz, rect.min_side(), ell, t);

    // Each of the d * (ell - 1) slices nets at least one point, so the
    // query cap bounds the slice count too. Checked before materializing
    // the slices, which would otherwise exhaust memory when ell is huge.
    if (ell - 1 > cfg.net_cap / static_cast<std::uint64_t>(d)) {
      throw ResourceLimitError(
          "round " + std::to_string(t) + " would cut " + std::to_string(d) +
          " * " + std::to_string(ell - 1) + " barrier slices, above the cap of " +
          std::to_string(cfg.net_cap) + " net points");
    }
    const std::vector<Slice> slices = barrier_slices(rect, ell);
    std::uint64_t round_total = 0;
    for (const Slice& slice : slices) {
      const std::uint64_t size = nice_net_size(slice.rect, delta, cfg.net_cap);
      if (size > cfg.net_cap - round_total) {
        throw ResourceLimitError(
            "round " + std::to_string(t) + " needs more than " +
            std::to_string(cfg.net_cap) + " net points across its slices");
      }
      round_total += size;
    }

    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(round_total) * d);
    for (const Slice& slice : slices) {
      for_each_net_point(slice.rect, delta, cfg.net_cap,
                         [&flat](std::span<const double> p) {
                           flat.insert(flat.end(), p.begin(), p.end());
                         });
    }
    const std::vector<double> values = session.batch_query(flat, round_total);

    // Reachable set: net points a descent path of slope eps_t could still
    // reach from x. Move to the best one; first index wins ties so reruns
    // are bit-identical.
    std::int64_t best = -1;
    double best_f = std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < round_total; ++i) {
      const double f_z = values[i];
      if (cfg.mode == SolveMode::unconstrained && f_z < 0.0) {
        throw ContractError(
            "unconstrained mode requires a nonnegative objective; a net "
            "point returned " + format_double(f_z));
      }
      std::span<const double> z(flat.data() + i * d,
                                static_cast<std::size_t>(d));
      if (f_z <= f_x - eps_t * distance2(x, z)) {
        if (f_z < best_f) {
          best_f = f_z;
          best = static_cast<std::int64_t>(i);
        }
      }
    }
    const bool moved = best >= 0;
    if (moved) {
      const double* top = flat.data() + static_cast<std::uint64_t>(best) * d;
      x.assign(top, top + d);
      f_x = best_f;
    }

    const HyperRectangle next = shrink_around(rect, x, ell);
    double new_face_distance = std::numeric_limits<double>::infinity();
    for (int j = 0; j < d; ++j) {
      if (next.lo[j] != rect.lo[j]) {
        new_face_distance = std::min(new_face_distance, x[j] - next.lo[j]);
      }
      if (next.hi[j] != rect.hi[j]) {
        new_face_distance = std::min(new_face_distance, next.hi[j] - x[j]);
      }
    }

    const double eps_next = next_descent_threshold(eps_t, t, d, eps);

    IterationRecord rec;
    rec.t = t;
    rec.ell = ell;
    rec.delta = delta;
    rec.eps_t = eps_t;
    rec.queries = round_total;
    rec.cum_queries = session.ledger().total();
    rec.diam = next.max_side();
    rec.f_best = f_x;
    rec.x = x;
    rec.rect = next;
    rec.moved = moved;
    rec.new_face_distance = new_face_distance;
    if (cfg.boundary_samples > 0) {
      const BoundaryReport report = check_boundary(
          objective, next, cfg.mode == SolveMode::cube, x, f_x, eps_next,
          cfg.boundary_samples, instrument_rng);
      rec.boundary_checked = report.checked;
      rec.boundary_unreachable = report.unreachable;
    }
    result.iterations.push_back(std::move(rec));

    rect = next;
    eps_t = eps_next;
  }

  result.final_rect = rect;
  result.final_diameter = rect.max_side();
  result.eps_final = eps_t;

  if (cfg.mode == SolveMode::cube) {
    extract_corner(cfg, session, rect, result);
  } else {
    result.x = x;
    result.f_x = f_x;
  }
  verify_output(cfg, session, result);

  result.ledger = session.ledger();
  result.verification_queries = session.verification_queries();
  result.rounds_algorithm = k + (cfg.mode == SolveMode::cube ? 1 : 0);
  result.rounds_total = result.ledger.round_count();
  return result;
}

std::string trace_to_csv(const SolveConfig& cfg, const SolveResult& result) {
  std::string out = "# flowtrap.trace.v1\n";
  out += "t,ell,delta,eps_t,queries,cum_queries,diam,f_best";
  for (int j = 0; j < cfg.d; ++j) {
    out += ",x" + std::to_string(j);
  }
  out += "\n";
  char buf[128];
  for (const IterationRecord& rec : result.iterations) {
    std::snprintf(buf, sizeof(buf), "%d,%llu,%.17g,%.17g,%llu,%llu,%.17g,%.17g",
                  rec.t, static_cast<unsigned long long>(rec.ell), rec.delta,
                  rec.eps_t, static_cast<unsigned long long>(rec.queries),
                  static_cast<unsigned long long>(rec.cum_queries), rec.diam,
                  rec.f_best);
    out += buf;
    for (const double c : rec.x) {
      out += ",";
      out += format_double(c);
    }
    out += "\n";
  }
  return out;
}

std::string summary_to_json(const SolveConfig& cfg, const SolveResult& result,
                            const std::string& objective_name,
                            std::uint64_t seed) {
  nlohmann::json doc;
  doc["schema"] = "flowtrap.summary.v1";
  doc["config"] = {
      {"eps", cfg.eps},
      {"lipschitz", cfg.lipschitz},
      {"d", cfg.d},
      {"k", cfg.k},
      {"mode",
       cfg.mode == SolveMode::cube ? "cube" : "unconstrained"},
      {"net_cap", cfg.net_cap},
      {"x0", cfg.x0},
      {"objective", objective_name},
      {"seed", seed},
  };
  doc["output"] = {
      {"x", result.x},
      {"f_x", result.f_x},
      {"grad_norm", result.grad_norm},
      {"grad_is_fd", result.grad_is_fd},
      {"verified", result.verified},
  };
  doc["rounds"] = {
      {"algorithm", result.rounds_algorithm},
      {"total", result.rounds_total},
  };
  doc["queries"] = {
      {"total", result.ledger.total()},
      {"verification", result.verification_queries},
  };
  doc["final"] = {
      {"rect_lo", result.final_rect.lo},
      {"rect_hi", result.final_rect.hi},
      {"diameter", result.final_diameter},
      {"eps_final", result.eps_final},
  };
  doc["iterations"] = nlohmann::json::array();
  for (const IterationRecord& rec : result.iterations) {
    doc["iterations"].push_back({
        {"t", rec.t},
        {"ell", rec.ell},
        {"delta", rec.delta},
        {"eps_t", rec.eps_t},
        {"queries", rec.queries},
        {"diam", rec.diam},
        {"f_best", rec.f_best},
        {"moved", rec.moved},
        {"new_face_distance", rec.new_face_distance},
        {"boundary_checked", rec.boundary_checked},
        {"boundary_unreachable", rec.boundary_unreachable},
    });
  }
  if (cfg.mode == SolveMode::cube) {
    doc["extraction"] = {
        {"corner_index", result.corner_index},
        {"corner_grad_norms", result.corner_grad_norms},
        {"fd_step", result.fd_step},
    };
  }
  return doc.dump(2);
}

}  // namespace flowtrap
