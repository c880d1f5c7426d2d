#ifndef FLOWTRAP_GEOMETRY_HPP
#define FLOWTRAP_GEOMETRY_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace flowtrap {

using Point = std::vector<double>;

double norm2(std::span<const double> x);
double distance2(std::span<const double> x, std::span<const double> y);

// Axis-aligned box { x : lo[j] <= x[j] <= hi[j] }. Sides may be degenerate
// (lo[j] == hi[j]), which is how lower-dimensional slices are represented.
struct HyperRectangle {
  std::vector<double> lo;
  std::vector<double> hi;

  HyperRectangle() = default;
  HyperRectangle(std::vector<double> lo_in, std::vector<double> hi_in);

  static HyperRectangle cube(int dim, double lo, double hi);
  // L-infinity ball: { x : |x - center|_inf <= radius }.
  static HyperRectangle inf_ball(std::span<const double> center, double radius);

  int dim() const { return static_cast<int>(lo.size()); }
  double side(int j) const { return hi[j] - lo[j]; }
  double min_side() const;
  double max_side() const;
  // Number of axes with positive extent.
  int effective_dim() const;
  bool contains(std::span<const double> x) const;
  bool contains(const HyperRectangle& inner) const;
  Point center() const;
  // Distance from an inside point to the axis-j faces.
  double face_distance_lo(std::span<const double> x, int j) const { return x[j] - lo[j]; }
  double face_distance_hi(std::span<const double> x, int j) const { return hi[j] - x[j]; }
};

// y is unreachable from x at slope eps when no descent path dropping at
// least eps per unit length can run from x to y:
//   f(y) > f(x) - eps * |x - y|_2   (strict).
bool is_unreachable(double f_x, double f_y, std::span<const double> x,
                    std::span<const double> y, double eps);

// Axis-aligned grid covering a rectangle so every point of the rectangle is
// within delta (Euclidean) of a grid point. Per axis with positive extent,
//   count_j = ceil(sqrt(m) * side_j / (2 delta)) + 1
// where m is the number of such axes; endpoints included, spacing uniform.
// Degenerate axes contribute a single coordinate.
struct Net {
  HyperRectangle host;
  double delta = 0.0;
  std::vector<std::uint64_t> axis_counts;
  // Row-major flat coordinates, size() * dim() doubles.
  std::vector<double> points;

  int dim() const { return host.dim(); }
  std::uint64_t size() const;
  std::span<const double> point(std::uint64_t i) const;
};

std::vector<std::uint64_t> nice_net_axis_counts(const HyperRectangle& rect,
                                                 double delta);
// Total point count; throws ResourceLimitError if it exceeds cap.
std::uint64_t nice_net_size(const HyperRectangle& rect, double delta,
                             std::uint64_t cap);
// Streaming enumeration in row-major order (last axis fastest); `sink`
// receives each point once. Avoids materializing large nets.
void for_each_net_point(const HyperRectangle& rect, double delta,
                        std::uint64_t cap,
                        const std::function<void(std::span<const double>)>& sink);
Net nice_net(const HyperRectangle& rect, double delta, std::uint64_t cap);
// Points of `net` lying on the axis-j face at `coordinate`, as a net of that
// face. Used to check that grid nets restrict to nets of faces.
Net net_face_restriction(const Net& net, int axis, double coordinate);

// Slice of a rectangle: axis `axis` pinned to `coordinate`; `rect` is the
// degenerate rectangle with lo[axis] == hi[axis] == coordinate.
struct Slice {
  int axis = 0;
  int barrier_index = 0;  // m in 1..ell-1
  double coordinate = 0.0;
  HyperRectangle rect;
};

// The d*(ell-1) interior slices that cut each axis of `rect` into ell equal
// cells. Barrier coordinates are computed as lo[j] + m * (side_j / ell) with
// the width hoisted, so traces are reproducible bit for bit. Requires
// ell >= 2. Enumeration order: axis-major, then barrier index.
std::vector<Slice> barrier_slices(const HyperRectangle& rect, std::uint64_t ell);

// Window of at most 3 consecutive cells (out of ell) around x, per axis:
// first cell -> [lo, lo + 2w], last cell -> [hi - 2w, hi], interior ->
// [lo + (m1-1) w, lo + (m1+2) w] where m1 is the largest barrier index with
// barrier <= x[j] and w = side_j / ell. A coordinate within one part in 2^40
// of a barrier is treated as sitting on it. Every new side is <= 3w and x
// keeps distance >= w from every face not inherited from `rect`.
HyperRectangle shrink_around(const HyperRectangle& rect,
                             std::span<const double> x, std::uint64_t ell);

// All proper faces of `rect` obtained by pinning a nonempty subset of axes
// to an endpoint (3^d - 1 faces). Intended for small-dimension tests.
std::vector<HyperRectangle> enumerate_faces(const HyperRectangle& rect);

}  // namespace flowtrap

#endif  // FLOWTRAP_GEOMETRY_HPP
