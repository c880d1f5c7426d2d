#include "flowtrap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "flowtrap/errors.hpp"

namespace flowtrap {

namespace {

// Relative tie width for deciding that a coordinate sits exactly on a
// barrier: one part in 2^40.
constexpr double kBarrierTieRel = 1.0 / 1099511627776.0;

bool near_barrier(double x, double barrier) {
  if (x == barrier) return true;
  const double tol = kBarrierTieRel * std::max(std::fabs(x), std::fabs(barrier));
  return std::fabs(x - barrier) <= tol;
}

// Uniform axis coordinates with both endpoints exact.
std::vector<double> axis_coordinates(double lo, double hi, std::uint64_t count) {
  std::vector<double> c(count);
  if (count == 1) {
    c[0] = lo;
    return c;
  }
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::uint64_t i = 0; i < count; ++i) {
    c[i] = lo + static_cast<double>(i) * step;
  }
  c[0] = lo;
  c[count - 1] = hi;
  return c;
}

}  // namespace

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double distance2(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

HyperRectangle::HyperRectangle(std::vector<double> lo_in, std::vector<double> hi_in)
    : lo(std::move(lo_in)), hi(std::move(hi_in)) {
  if (lo.size() != hi.size()) {
    throw ConfigError("HyperRectangle: lo/hi dimension mismatch");
  }
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (!(lo[j] <= hi[j])) {
      std::ostringstream os;
      os << "HyperRectangle: empty on axis " << j << " (lo=" << lo[j]
         << ", hi=" << hi[j] << ")";
      throw ConfigError(os.str());
    }
  }
}

HyperRectangle HyperRectangle::cube(int dim, double lo, double hi) {
  return HyperRectangle(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

HyperRectangle HyperRectangle::inf_ball(std::span<const double> center, double radius) {
  std::vector<double> lo(center.size()), hi(center.size());
  for (std::size_t j = 0; j < center.size(); ++j) {
    lo[j] = center[j] - radius;
    hi[j] = center[j] + radius;
  }
  return HyperRectangle(std::move(lo), std::move(hi));
}

double HyperRectangle::min_side() const {
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < dim(); ++j) m = std::min(m, side(j));
  return m;
}

double HyperRectangle::max_side() const {
  double m = 0.0;
  for (int j = 0; j < dim(); ++j) m = std::max(m, side(j));
  return m;
}

int HyperRectangle::effective_dim() const {
  int m = 0;
  for (int j = 0; j < dim(); ++j) {
    if (side(j) > 0.0) ++m;
  }
  return m;
}

bool HyperRectangle::contains(std::span<const double> x) const {
  for (int j = 0; j < dim(); ++j) {
    if (x[j] < lo[j] || x[j] > hi[j]) return false;
  }
  return true;
}

bool HyperRectangle::contains(const HyperRectangle& inner) const {
  for (int j = 0; j < dim(); ++j) {
    if (inner.lo[j] < lo[j] || inner.hi[j] > hi[j]) return false;
  }
  return true;
}

Point HyperRectangle::center() const {
  Point c(lo.size());
  for (int j = 0; j < dim(); ++j) c[j] = 0.5 * (lo[j] + hi[j]);
  return c;
}

bool is_unreachable(double f_x, double f_y, std::span<const double> x,
                    std::span<const double> y, double eps) {
  return f_y > f_x - eps * distance2(x, y);
}

std::uint64_t Net::size() const {
  if (points.empty()) return 0;
  return points.size() / static_cast<std::uint64_t>(dim());
}

std::span<const double> Net::point(std::uint64_t i) const {
  const auto d = static_cast<std::uint64_t>(dim());
  return {points.data() + i * d, static_cast<std::size_t>(d)};
}

std::vector<std::uint64_t> nice_net_axis_counts(const HyperRectangle& rect,
                                                 double delta) {
  if (!(delta > 0.0)) throw ConfigError("cover net: delta must be positive");
  const int m = rect.effective_dim();
  const double root_m = std::sqrt(static_cast<double>(m));
  std::vector<std::uint64_t> counts(rect.dim(), 1);
  for (int j = 0; j < rect.dim(); ++j) {
    const double len = rect.side(j);
    if (len <= 0.0) continue;
    const double raw = std::ceil(root_m * len / (2.0 * delta));
    if (!(raw < 9.0e18)) {
      throw ResourceLimitError("cover net: axis count overflows 64 bits");
    }
    counts[j] = static_cast<std::uint64_t>(raw) + 1;
  }
  return counts;
}

std::uint64_t nice_net_size(const HyperRectangle& rect, double delta,
                             std::uint64_t cap) {
  const auto counts = nice_net_axis_counts(rect, delta);
  unsigned __int128 prod = 1;
  for (auto c : counts) {
    prod *= c;
    if (prod > cap) {
      std::ostringstream os;
      os << "cover net would hold ";
      if (prod > std::numeric_limits<std::uint64_t>::max()) {
        os << "more than 2^64";
      } else {
        os << static_cast<std::uint64_t>(prod);
      }
      os << " points, above the cap of " << cap;
      throw ResourceLimitError(os.str());
    }
  }
  return static_cast<std::uint64_t>(prod);
}

void for_each_net_point(const HyperRectangle& rect, double delta,
                        std::uint64_t cap,
                        const std::function<void(std::span<const double>)>& sink) {
  const std::uint64_t total = nice_net_size(rect, delta, cap);
  if (total == 0) return;
  const int d = rect.dim();
  std::vector<std::vector<double>> coords(d);
  std::vector<std::uint64_t> counts = nice_net_axis_counts(rect, delta);
  for (int j = 0; j < d; ++j) {
    coords[j] = axis_coordinates(rect.lo[j], rect.hi[j], counts[j]);
  }
  std::vector<std::uint64_t> idx(d, 0);
  std::vector<double> pt(d);
  for (int j = 0; j < d; ++j) pt[j] = coords[j][0];
  for (std::uint64_t n = 0;;) {
    sink(pt);
    if (++n == total) break;
    // Odometer increment, last axis fastest.
    for (int j = d - 1; j >= 0; --j) {
      if (++idx[j] < counts[j]) {
        pt[j] = coords[j][idx[j]];
        break;
      }
      idx[j] = 0;
      pt[j] = coords[j][0];
    }
  }
}

Net nice_net(const HyperRectangle& rect, double delta, std::uint64_t cap) {
  Net net;
  net.host = rect;
  net.delta = delta;
  net.axis_counts = nice_net_axis_counts(rect, delta);
  const std::uint64_t total = nice_net_size(rect, delta, cap);
  net.points.reserve(total * static_cast<std::uint64_t>(rect.dim()));
  for_each_net_point(rect, delta, cap, [&](std::span<const double> p) {
    net.points.insert(net.points.end(), p.begin(), p.end());
  });
  return net;
}

Net net_face_restriction(const Net& net, int axis, double coordinate) {
  Net out;
  out.host = net.host;
  out.host.lo[axis] = coordinate;
  out.host.hi[axis] = coordinate;
  out.delta = net.delta;
  out.axis_counts = net.axis_counts;
  out.axis_counts[axis] = 1;
  const int d = net.dim();
  for (std::uint64_t i = 0; i < net.size(); ++i) {
    auto p = net.point(i);
    if (p[axis] == coordinate) {
      out.points.insert(out.points.end(), p.begin(), p.end());
    }
  }
  (void)d;
  return out;
}

std::vector<Slice> barrier_slices(const HyperRectangle& rect, std::uint64_t ell) {
  if (ell < 2) throw ConfigError("barrier_slices: need ell >= 2");
  const int d = rect.dim();
  for (int j = 0; j < d; ++j) {
    if (!(rect.side(j) > 0.0)) {
      throw ConfigError("barrier_slices: degenerate axis");
    }
  }
  std::vector<Slice> slices;
  slices.reserve(static_cast<std::size_t>(d) * (ell - 1));
  for (int j = 0; j < d; ++j) {
    const double w = rect.side(j) / static_cast<double>(ell);
    for (std::uint64_t m = 1; m < ell; ++m) {
      Slice s;
      s.axis = j;
      s.barrier_index = static_cast<int>(m);
      s.coordinate = rect.lo[j] + static_cast<double>(m) * w;
      s.rect = rect;
      s.rect.lo[j] = s.coordinate;
      s.rect.hi[j] = s.coordinate;
      slices.push_back(std::move(s));
    }
  }
  return slices;
}

HyperRectangle shrink_around(const HyperRectangle& rect,
                             std::span<const double> x, std::uint64_t ell) {
  if (ell < 3) throw ConfigError("shrink_around: need ell >= 3");
  if (!rect.contains(x)) throw ConfigError("shrink_around: point outside rectangle");
  const int d = rect.dim();
  HyperRectangle out = rect;
  for (int j = 0; j < d; ++j) {
    const double lo = rect.lo[j];
    const double hi = rect.hi[j];
    const double len = hi - lo;
    if (len <= 0.0) continue;
    const double w = len / static_cast<double>(ell);
    const auto barrier = [&](std::uint64_t m) {
      return lo + static_cast<double>(m) * w;
    };
    const double b_first = barrier(1);
    const double b_last = barrier(ell - 1);
    const double xj = x[j];
    if (xj <= b_first || near_barrier(xj, b_first)) {
      out.lo[j] = lo;
      out.hi[j] = std::min(hi, lo + 2.0 * w);
    } else if (xj >= b_last || near_barrier(xj, b_last)) {
      out.lo[j] = std::max(lo, hi - 2.0 * w);
      out.hi[j] = hi;
    } else {
      // Largest barrier index m1 with barrier(m1) <= xj, tie counted as on
      // the barrier. xj is strictly between b_first and b_last here.
      auto m1 = static_cast<std::uint64_t>(std::floor((xj - lo) / w));
      if (m1 + 1 <= ell - 2 && near_barrier(xj, barrier(m1 + 1))) {
        m1 += 1;
      } else if (barrier(m1) > xj && !near_barrier(xj, barrier(m1))) {
        m1 -= 1;
      }
      m1 = std::clamp<std::uint64_t>(m1, 1, ell - 2);
      out.lo[j] = std::max(lo, barrier(m1 - 1));
      out.hi[j] = std::min(hi, barrier(m1 + 2));
    }
  }
  return out;
}

std::vector<HyperRectangle> enumerate_faces(const HyperRectangle& rect) {
  const int d = rect.dim();
  if (d > 12) throw ConfigError("enumerate_faces: dimension too large");
  std::vector<HyperRectangle> faces;
  std::uint64_t total = 1;
  for (int j = 0; j < d; ++j) total *= 3;
  // Ternary digit per axis: 0 = free, 1 = pin at lo, 2 = pin at hi.
  for (std::uint64_t code = 1; code < total; ++code) {
    std::uint64_t c = code;
    bool any_pinned = false;
    HyperRectangle f = rect;
    for (int j = 0; j < d; ++j) {
      const int digit = static_cast<int>(c % 3);
      c /= 3;
      if (digit == 1) {
        f.hi[j] = f.lo[j];
        any_pinned = true;
      } else if (digit == 2) {
        f.lo[j] = f.hi[j];
        any_pinned = true;
      }
    }
    if (any_pinned) faces.push_back(std::move(f));
  }
  return faces;
}

}  // namespace flowtrap
