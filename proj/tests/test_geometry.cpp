#include <random>

#include "doctest.h"
#include "error.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "oracles.hpp"

using namespace asvnav;
using namespace asvnav::geometry;

namespace {

Polygon square(double e, double n, double s) { return Polygon{{{e, n}, {e + s, n}, {e + s, n + s}, {e, n + s}}}; }

GridMeta meta(int w, int h, double cell = 1.0) { return GridMeta{{0.0, 0.0}, cell, w, h}; }

}  // namespace

TEST_CASE("connected components") {
  const auto m = meta(5, 5);
  CHECK(connected_components(m, {}).empty());

  const auto single = connected_components(m, {7});
  REQUIRE(single.size() == 1);
  CHECK(single[0] == CellSet{7});

  // (0,0) and (1,1) touch only at a corner.
  const auto diag = connected_components(m, {0, 6});
  REQUIRE(diag.size() == 1);
  CHECK(diag[0].size() == 2);
}

TEST_CASE("connected components match a flood fill on random grids") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 20), h = 1 + static_cast<int>(rng() % 20);
    const double density = (rng() % 60) / 100.0;
    std::vector<bool> occ(static_cast<std::size_t>(w * h));
    CellSet cells;
    for (std::size_t i = 0; i < occ.size(); ++i) {
      occ[i] = std::uniform_real_distribution<>(0, 1)(rng) < density;
      if (occ[i]) cells.push_back(i);
    }
    const auto got = connected_components(meta(w, h), cells);
    const auto want = oracle::flood_components(w, h, occ);
    REQUIRE(got.size() == want.size());
    for (std::size_t k = 0; k < got.size(); ++k) CHECK(got[k] == want[k]);
  }
}

TEST_CASE("trace contour") {
  SUBCASE("single cell is the unit square") {
    const auto poly = trace_contour({0}, meta(3, 3));
    CHECK(poly.size() == 4);
    CHECK(signed_area(poly) == doctest::Approx(1.0));
    CHECK(perimeter(poly) == doctest::Approx(4.0));
  }
  SUBCASE("3x3 block is a 3 m square") {
    const auto poly = trace_contour({0, 1, 2, 5, 6, 7, 10, 11, 12}, meta(5, 5));
    CHECK(poly.size() == 4);
    CHECK(signed_area(poly) == doctest::Approx(9.0));
  }
  SUBCASE("L shape has 6 vertices and holds every cell") {
    const auto m = meta(4, 4);
    const CellSet cells{0, 1, 2, 4, 8};
    const auto poly = trace_contour(cells, m);
    CHECK(poly.size() == 6);
    for (auto c : cells) CHECK(oracle::inside(m.cell_center(m.coord(c)), poly.ring));
  }
}

TEST_CASE("traced contours contain their cells on random blobs") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int w = 12, h = 12;
    const auto m = meta(w, h, 0.5);
    CellSet cells;
    for (std::size_t i = 0; i < static_cast<std::size_t>(w * h); ++i) {
      if (rng() % 100 < 45) cells.push_back(i);
    }
    for (const auto& comp : connected_components(m, cells)) {
      const auto poly = trace_contour(comp, m);
      CHECK(signed_area(poly) > 0.0);
      for (auto c : comp) CHECK(oracle::inside(m.cell_center(m.coord(c)), poly.ring));
    }
  }
}

TEST_CASE("polygons intersect") {
  const auto a = square(0, 0, 1);
  CHECK(polygons_intersect(a, a));
  CHECK_FALSE(polygons_intersect(a, square(11, 0, 1)));
  CHECK(polygons_intersect(square(0, 0, 10), square(4, 4, 1)));
  CHECK(polygons_intersect(square(4, 4, 1), square(0, 0, 10)));
  CHECK(polygons_intersect(a, square(1, 0, 1)));  // shared edge
}

TEST_CASE("polygons_intersect is symmetric") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<> u(-10, 10);
  for (int i = 0; i < 500; ++i) {
    std::vector<UtmPoint> pa, pb;
    for (int k = 0; k < 6; ++k) pa.push_back({u(rng), u(rng)});
    for (int k = 0; k < 6; ++k) pb.push_back({u(rng) + 8, u(rng)});
    const auto a = convex_hull(pa), b = convex_hull(pb);
    if (a.size() < 3 || b.size() < 3) continue;
    CHECK(polygons_intersect(a, b) == polygons_intersect(b, a));
  }
}

TEST_CASE("point in polygon") {
  const auto sq = square(0, 0, 2);
  CHECK(point_in_polygon({1, 1}, sq));
  CHECK_FALSE(point_in_polygon({1000, 1000}, sq));
  CHECK(point_in_polygon({0, 0}, sq));
  CHECK(point_in_polygon({2, 1}, sq));
  CHECK_FALSE(point_strictly_inside({2, 1}, sq));
}

TEST_CASE("point in polygon agrees with a winding-number oracle") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<> u(-5, 5);
  // Star-shaped, non-convex ring.
  Polygon star;
  for (int k = 0; k < 10; ++k) {
    const double r = k % 2 ? 1.5 : 4.0;
    const double a = kTwoPi * k / 10.0;
    star.ring.push_back({r * std::cos(a), r * std::sin(a)});
  }
  for (int i = 0; i < 5000; ++i) {
    const UtmPoint p{u(rng), u(rng)};
    CHECK(point_in_polygon(p, star) == oracle::inside(p, star.ring));
  }
  for (const auto& v : star.ring) CHECK(point_in_polygon(v, star));
}

TEST_CASE("segment polygon intersections") {
  const auto sq = square(0, 0, 2);
  SUBCASE("straight through gives entry then exit") {
    const auto hits = segment_polygon_intersections({-1, 1}, {3, 1}, sq);
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].point.easting == doctest::Approx(0.0));
    CHECK(hits[1].point.easting == doctest::Approx(2.0));
    CHECK(hits[0].t < hits[1].t);
  }
  SUBCASE("tangent at a vertex gives one point") {
    const auto hits = segment_polygon_intersections({-1, 1}, {1, -1}, sq);
    REQUIRE(hits.size() == 1);
    CHECK(distance(hits[0].point, {0, 0}) < 1e-9);
  }
  SUBCASE("disjoint") { CHECK(segment_polygon_intersections({5, 5}, {6, 7}, sq).empty()); }
}

TEST_CASE("segment hits lie on the boundary and are ordered") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<> u(-6, 6);
  Polygon star;
  for (int k = 0; k < 12; ++k) {
    const double r = k % 2 ? 2.0 : 4.0;
    star.ring.push_back({r * std::cos(kTwoPi * k / 12.0), r * std::sin(kTwoPi * k / 12.0)});
  }
  star = make_ccw(star);
  for (int i = 0; i < 1000; ++i) {
    const UtmPoint a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const auto hits = segment_polygon_intersections(a, b, star);
    double last = -1.0;
    for (const auto& h : hits) {
      CHECK(oracle::on_segment(h.point, star.vertex(h.edge), star.vertex(h.edge + 1), 1e-7));
      CHECK(oracle::on_segment(h.point, a, b, 1e-7));
      CHECK(h.t >= last);
      last = h.t;
    }
    // Endpoints on opposite sides need an odd number of crossings unless a vertex is grazed.
    if (oracle::inside(a, star.ring) != oracle::inside(b, star.ring)) CHECK(!hits.empty());
  }
}

TEST_CASE("split contour") {
  const auto sq = square(0, 0, 2);
  SUBCASE("opposite midpoints split evenly with the stated tie-break") {
    const auto [first, second] = split_contour(sq, {1, 0}, {1, 2});
    CHECK(length(first) == doctest::Approx(4.0));
    CHECK(length(second) == doctest::Approx(4.0));
    // Halves run through (2,0) and (0,0); the smaller (northing, easting) is (0,0).
    REQUIRE(first.points.size() >= 3);
    CHECK(distance(first.points[1], {0, 0}) < 1e-12);
  }
  SUBCASE("same edge") {
    const auto [first, second] = split_contour(sq, {0.5, 0}, {1.5, 0});
    CHECK(first.points.size() == 2);
    CHECK(length(first) == doctest::Approx(1.0));
    CHECK(length(second) == doctest::Approx(7.0));
  }
  SUBCASE("adjacent corners") {
    const auto [first, second] = split_contour(sq, {0, 0}, {2, 0});
    CHECK(length(first) == doctest::Approx(2.0));
    CHECK(length(second) == doctest::Approx(6.0));
  }
  SUBCASE("degenerate") { CHECK_THROWS_AS(split_contour(sq, {1, 0}, {1, 0}), Error); }
}

TEST_CASE("split contour halves sum to the perimeter") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<> u(0, 1);
  Polygon poly = make_ccw(Polygon{{{0, 0}, {10, 0}, {10, 4}, {6, 4}, {6, 9}, {0, 9}}});
  const double per = perimeter(poly);
  auto boundary_point = [&](double s) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const double len = distance(poly.vertex(i), poly.vertex(i + 1));
      if (s <= len) return poly.vertex(i) + (s / len) * (poly.vertex(i + 1) - poly.vertex(i));
      s -= len;
    }
    return poly.vertex(0);
  };
  for (int i = 0; i < 300; ++i) {
    const double s1 = u(rng) * per, s2 = u(rng) * per;
    if (std::fabs(s1 - s2) < 1e-3) continue;
    const auto [a, b] = split_contour(poly, boundary_point(s1), boundary_point(s2));
    CHECK(std::fabs(length(a) + length(b) - per) <= 1e-9 * per);
    CHECK(length(a) <= length(b) + 1e-12);
    const double arc = std::fabs(s1 - s2);
    CHECK(length(a) == doctest::Approx(std::min(arc, per - arc)).epsilon(1e-9));
  }
}

TEST_CASE("rasterize polygon") {
  OccupancyGrid grid(meta(10, 10));
  rasterize_polygon(square(100, 100, 5), grid);
  CHECK(grid.count_occupied() == 0);

  rasterize_polygon(square(2, 2, 3), grid);
  CHECK(grid.count_occupied() == 9);
  const auto once = grid;
  rasterize_polygon(square(2, 2, 3), grid);
  CHECK(grid == once);
}

TEST_CASE("rasterization matches per-cell containment and never clears") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<> u(0, 20);
  const auto m = meta(20, 20);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<UtmPoint> pts;
    for (int k = 0; k < 7; ++k) pts.push_back({u(rng), u(rng)});
    const auto poly = convex_hull(pts);
    if (poly.size() < 3) continue;
    OccupancyGrid grid(m);
    grid.set(std::size_t{0});
    rasterize_polygon(poly, grid);
    CHECK(grid.occupied(std::size_t{0}));
    for (std::size_t i = 1; i < m.cell_count(); ++i) {
      CHECK(grid.occupied(i) == oracle::inside(m.cell_center(m.coord(i)), poly.ring));
    }
  }
}

TEST_CASE("convex hull encloses every input point") {
  std::mt19937 rng(37);
  std::normal_distribution<> g(0, 5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<UtmPoint> pts;
    for (int k = 0; k < 30; ++k) pts.push_back({g(rng), g(rng)});
    const auto hull = convex_hull(pts);
    CHECK(signed_area(hull) > 0.0);
    for (const auto& p : pts) CHECK(oracle::inside(p, hull.ring));
  }
}

TEST_CASE("dilation keeps the radius clear") {
  const std::vector<UtmPoint> pts{{0, 0}, {4, 0}, {4, 1}};
  const auto d = dilate_points(pts, 2.0);
  for (const auto& p : pts) {
    for (int k = 0; k < 64; ++k) {
      const UtmPoint q = p + 2.0 * UtmPoint{std::cos(kTwoPi * k / 64), std::sin(kTwoPi * k / 64)};
      CHECK(oracle::inside(q, d.ring));
    }
  }
}

TEST_CASE("headings and wrapping") {
  CHECK(heading_of({0, 1}) == doctest::Approx(0.0));
  CHECK(heading_of({1, 0}) == doctest::Approx(kPi / 2));
  CHECK(wrap_pi(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(wrap_two_pi(-kPi / 2) == doctest::Approx(3 * kPi / 2));
}
