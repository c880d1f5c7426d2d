#include <doctest.h>

#include <cmath>
#include <vector>

#include "flowtrap/errors.hpp"
#include "flowtrap/geometry.hpp"

using namespace flowtrap;

TEST_CASE("norms and distances") {
  const std::vector<double> a = {3.0, 4.0};
  const std::vector<double> b = {0.0, 0.0};
  CHECK(norm2(a) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(distance2(a, b) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(norm2(b) == 0.0);
}

TEST_CASE("hyperrectangle basics") {
  const HyperRectangle rect({0.0, 2.0}, {1.0, 2.5});
  CHECK(rect.dim() == 2);
  CHECK(rect.side(0) == 1.0);
  CHECK(rect.side(1) == 0.5);
  CHECK(rect.min_side() == 0.5);
  CHECK(rect.max_side() == 1.0);
  CHECK(rect.effective_dim() == 2);
  CHECK(rect.contains(std::vector<double>{0.5, 2.25}));
  CHECK_FALSE(rect.contains(std::vector<double>{0.5, 2.75}));
  const Point c = rect.center();
  CHECK(c[0] == 0.5);
  CHECK(c[1] == 2.25);

  const HyperRectangle cube = HyperRectangle::cube(3, 0.0, 1.0);
  CHECK(cube.dim() == 3);
  CHECK(cube.side(2) == 1.0);

  const std::vector<double> center = {1.0, -1.0};
  const HyperRectangle ball = HyperRectangle::inf_ball(center, 0.25);
  CHECK(ball.lo[0] == 0.75);
  CHECK(ball.hi[1] == -0.75);

  const HyperRectangle degenerate({0.0, 1.0}, {1.0, 1.0});
  CHECK(degenerate.effective_dim() == 1);
  CHECK(degenerate.min_side() == 0.0);

  CHECK(rect.contains(HyperRectangle({0.25, 2.0}, {0.75, 2.25})));
  CHECK_FALSE(rect.contains(HyperRectangle({0.25, 2.0}, {1.25, 2.25})));

  CHECK(rect.face_distance_lo(std::vector<double>{0.3, 2.2}, 0) ==
        doctest::Approx(0.3));
  CHECK(rect.face_distance_hi(std::vector<double>{0.3, 2.2}, 1) ==
        doctest::Approx(0.3));

  CHECK_THROWS_AS(HyperRectangle({1.0}, {0.0}), ConfigError);
  CHECK_THROWS_AS(HyperRectangle({1.0, 0.0}, {2.0}), ConfigError);
}

TEST_CASE("unreachability is strict") {
  const std::vector<double> x = {0.0, 0.0};
  const std::vector<double> y = {1.0, 0.0};
  const double f_x = 1.0;
  const double eps = 0.25;
  // Exactly on the descent cone boundary: still reachable.
  CHECK_FALSE(is_unreachable(f_x, f_x - eps * 1.0, x, y, eps));
  CHECK(is_unreachable(f_x, f_x - eps * 1.0 + 1e-12, x, y, eps));
  CHECK_FALSE(is_unreachable(f_x, 0.0, x, y, eps));
}

TEST_CASE("net axis counts match the worked examples") {
  // Unit square at delta = 0.3: ceil(sqrt(2) * 1 / 0.6) + 1 = 4 per axis.
  const Net square = nice_net(HyperRectangle::cube(2, 0.0, 1.0), 0.3, 1000);
  CHECK(square.axis_counts == std::vector<std::uint64_t>{4, 4});
  CHECK(square.size() == 16);

  // [0,1] x [2, 2.5] at delta = 0.2: counts 5 and 3.
  const Net skew = nice_net(HyperRectangle({0.0, 2.0}, {1.0, 2.5}), 0.2, 1000);
  CHECK(skew.axis_counts == std::vector<std::uint64_t>{5, 3});
  CHECK(skew.size() == 15);

  // A degenerate axis contributes one coordinate; the live axis sees m = 1.
  const Net slice = nice_net(HyperRectangle({0.0, 2.0}, {1.0, 2.0}), 0.3, 1000);
  CHECK(slice.axis_counts == std::vector<std::uint64_t>{3, 1});
  CHECK(slice.size() == 3);
}

TEST_CASE("net endpoints are bitwise exact") {
  const HyperRectangle rect({0.1, -0.7}, {0.9, 1.3});
  const Net net = nice_net(rect, 0.25, 10000);
  const auto first = net.point(0);
  const auto last = net.point(net.size() - 1);
  CHECK(first[0] == 0.1);
  CHECK(first[1] == -0.7);
  CHECK(last[0] == 0.9);
  CHECK(last[1] == 1.3);
}

TEST_CASE("net size respects the cap") {
  const HyperRectangle rect = HyperRectangle::cube(3, 0.0, 1.0);
  CHECK_THROWS_AS(nice_net_size(rect, 1e-4, 1000), ResourceLimitError);
  CHECK_NOTHROW(nice_net_size(rect, 0.3, 1000));
}

TEST_CASE("net enumeration is row-major with the last axis fastest") {
  const HyperRectangle rect({0.0, 0.0}, {1.0, 1.0});
  const Net net = nice_net(rect, 0.3, 1000);
  // 4 x 4 grid: the second point differs from the first on axis 1 only.
  const auto p0 = net.point(0);
  const auto p1 = net.point(1);
  CHECK(p0[0] == p1[0]);
  CHECK(p1[1] > p0[1]);

  std::uint64_t streamed = 0;
  std::vector<double> first_seen;
  for_each_net_point(rect, 0.3, 1000, [&](std::span<const double> p) {
    if (streamed == 0) {
      first_seen.assign(p.begin(), p.end());
    }
    ++streamed;
  });
  CHECK(streamed == net.size());
  CHECK(first_seen == std::vector<double>{0.0, 0.0});
}

TEST_CASE("face restriction keeps exactly the face points") {
  const Net net = nice_net(HyperRectangle::cube(2, 0.0, 1.0), 0.3, 1000);
  const Net face = net_face_restriction(net, 0, 0.0);
  CHECK(face.size() == 4);
  for (std::uint64_t i = 0; i < face.size(); ++i) {
    CHECK(face.point(i)[0] == 0.0);
  }
}

TEST_CASE("barrier slices cut each axis into equal cells") {
  const HyperRectangle rect = HyperRectangle::cube(2, 0.0, 1.0);
  const auto slices = barrier_slices(rect, 4);
  REQUIRE(slices.size() == 6);  // d * (ell - 1)
  // Axis-major enumeration.
  CHECK(slices[0].axis == 0);
  CHECK(slices[0].barrier_index == 1);
  CHECK(slices[0].coordinate == 0.25);
  CHECK(slices[1].coordinate == 0.5);
  CHECK(slices[2].coordinate == 0.75);
  CHECK(slices[3].axis == 1);
  // Each slice is degenerate on its axis and full on the others.
  CHECK(slices[0].rect.lo[0] == 0.25);
  CHECK(slices[0].rect.hi[0] == 0.25);
  CHECK(slices[0].rect.lo[1] == 0.0);
  CHECK(slices[0].rect.hi[1] == 1.0);

  CHECK_THROWS_AS(barrier_slices(rect, 1), ConfigError);
  CHECK_THROWS_AS(
      barrier_slices(HyperRectangle({0.0, 0.0}, {1.0, 0.0}), 4), ConfigError);
}

TEST_CASE("shrink_around matches the worked example") {
  const HyperRectangle rect = HyperRectangle::cube(2, 0.0, 1.0);
  const std::vector<double> x = {0.1, 0.6};
  const HyperRectangle window = shrink_around(rect, x, 4);
  CHECK(window.lo[0] == 0.0);
  CHECK(window.hi[0] == 0.5);
  CHECK(window.lo[1] == 0.25);
  CHECK(window.hi[1] == 1.0);
}

TEST_CASE("shrink_around on a barrier keeps the first-cell window") {
  const HyperRectangle rect = HyperRectangle::cube(2, 0.0, 1.0);
  const HyperRectangle window =
      shrink_around(rect, std::vector<double>{0.25, 0.25}, 4);
  // x sits exactly on barrier 1 of each axis: the tie goes to the
  // first-cell branch, so the window is [0, 0.5] on both axes.
  CHECK(window.lo[0] == 0.0);
  CHECK(window.hi[0] == 0.5);
  CHECK(window.lo[1] == 0.0);
  CHECK(window.hi[1] == 0.5);
}

TEST_CASE("shrink_around keeps margins and containment") {
  const HyperRectangle rect({-1.0, 2.0}, {3.0, 2.8});
  const std::vector<double> x = {2.9, 2.41};
  for (const std::uint64_t ell : {3ull, 5ull, 9ull, 17ull}) {
    const HyperRectangle window = shrink_around(rect, x, ell);
    CHECK(rect.contains(window));
    CHECK(window.contains(x));
    for (int j = 0; j < 2; ++j) {
      const double w = rect.side(j) / static_cast<double>(ell);
      CHECK(window.side(j) <= 3.0 * w * (1.0 + 1e-12));
      // Distance to any face that is new (not inherited from rect).
      if (window.lo[j] != rect.lo[j]) {
        CHECK(x[j] - window.lo[j] >= w * (1.0 - 1e-12));
      }
      if (window.hi[j] != rect.hi[j]) {
        CHECK(window.hi[j] - x[j] >= w * (1.0 - 1e-12));
      }
    }
  }
  CHECK_THROWS_AS(shrink_around(rect, std::vector<double>{5.0, 2.4}, 4),
                  ConfigError);
  CHECK_THROWS_AS(shrink_around(rect, x, 2), ConfigError);
}

TEST_CASE("enumerate_faces lists all proper faces") {
  const HyperRectangle rect = HyperRectangle::cube(2, 0.0, 1.0);
  const auto faces = enumerate_faces(rect);
  CHECK(faces.size() == 8);  // 3^2 - 1
  int edges = 0;
  int corners = 0;
  for (const auto& face : faces) {
    const int pinned = 2 - face.effective_dim();
    if (pinned == 1) ++edges;
    if (pinned == 2) ++corners;
    CHECK(rect.contains(face));
  }
  CHECK(edges == 4);
  CHECK(corners == 4);
}
