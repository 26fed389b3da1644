#include <sstream>

#include "chart.hpp"
#include "doctest.h"
#include "error.hpp"
#include "oracles.hpp"

using namespace asvnav;
using asvnav::geometry::UtmPoint;

namespace {

chart::Chart parse(const std::string& text) {
  std::istringstream in(text);
  return chart::parse_chart(in);
}

ErrorCode code_of(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("load minimal chart") {
  const auto c = parse("# test\nGRID 0 0 1 100 100\nLAND 4\n10 10\n20 10\n20 20\n10 20\n");
  CHECK(c.land_polygons.size() == 1);
  CHECK(c.grid.width == 100);
  CHECK(geometry::signed_area(c.land_polygons[0]) > 0.0);
}

TEST_CASE("clockwise rings are stored counter-clockwise") {
  const auto c = parse("GRID 0 0 1 10 10\nLAND 3\n1 1\n1 5\n5 1\n");
  CHECK(geometry::signed_area(c.land_polygons[0]) > 0.0);
}

TEST_CASE("chart errors") {
  CHECK(code_of("GRID 0 0 1 10 10\nLAND 2\n1 1\n2 2\n") == ErrorCode::ChartValidation);
  CHECK(code_of("GRID 0 0 0 10 10\n") == ErrorCode::ChartValidation);
  CHECK(code_of("GRID 0 0 1 10 10\nLAND 4\n0 0\n4 4\n4 0\n0 4\n") == ErrorCode::ChartValidation);
  CHECK(code_of("GRID 0 0 1 10 10\nLAND 3\n0 0\n4 x\n4 0\n") == ErrorCode::ChartParse);
  CHECK(code_of("LAND 3\n0 0\n4 4\n4 0\n") == ErrorCode::ChartParse);
  CHECK(code_of("GRID 0 0 1 10 10\nLAND 3\n0 0\n4 4\n") == ErrorCode::ChartParse);
  CHECK(code_of("GRID 0 0 1 10 10\nSEA 3\n") == ErrorCode::ChartParse);
  CHECK(code_of("") == ErrorCode::ChartParse);
}

TEST_CASE("parse errors carry the line number") {
  try {
    parse("GRID 0 0 1 10 10\nLAND 3\n0 0\n4 nope\n4 0\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("4000 x 4000 metadata loads without rasterizing") {
  const auto c = parse("GRID 0 0 1 4000 4000\nLAND 4\n0 0\n100 0\n100 100\n0 100\n");
  CHECK(c.grid.cell_count() == 16'000'000u);
}

TEST_CASE("static grid") {
  SUBCASE("no land") {
    const auto c = parse("GRID 0 0 1 20 20\n");
    CHECK(chart::static_grid(c).count_occupied() == 0);
  }
  SUBCASE("aligned square over 4 cells") {
    const auto c = parse("GRID 0 0 1 20 20\nLAND 4\n5 5\n7 5\n7 7\n5 7\n");
    const auto g = chart::static_grid(c);
    CHECK(g.count_occupied() == 4);
    CHECK(g == chart::static_grid(c));
  }
}

TEST_CASE("static grid cells correspond exactly to land containment") {
  const auto c = parse(
      "GRID 100 200 0.5 80 60\n"
      "LAND 5\n100 200\n130 200\n125 215\n112 230\n100 220\n"
      "LAND 4\n118 210\n140 205\n138 228\n125 226\n");
  const auto g = chart::static_grid(c);
  const auto& m = c.grid;
  for (std::size_t i = 0; i < m.cell_count(); ++i) {
    const UtmPoint p = m.cell_center(m.coord(i));
    bool inside = false;
    for (const auto& poly : c.land_polygons) inside = inside || oracle::inside(p, poly.ring);
    CHECK(g.occupied(i) == inside);
  }
}

TEST_CASE("write and parse round trip") {
  const auto c = parse("GRID 0.5 -3 2 10 12\nLAND 3\n1 1\n9 1\n5 7.25\n");
  std::ostringstream out;
  chart::write_chart(out, c);
  const auto back = parse(out.str());
  CHECK(back.grid == c.grid);
  REQUIRE(back.land_polygons.size() == 1);
  CHECK(back.land_polygons[0].ring == c.land_polygons[0].ring);
}

TEST_CASE("cell round trip stays within half a cell") {
  const geometry::GridMeta m{{10.0, 20.0}, 0.25, 40, 40};
  for (std::size_t i = 0; i < m.cell_count(); i += 7) {
    const auto p = m.cell_center(m.coord(i));
    const auto back = m.cell_of(p);
    REQUIRE(back);
    CHECK(m.index(*back) == i);
  }
}

TEST_CASE("resampled chart keeps the extent") {
  const auto c = parse("GRID 0 0 1 40 30\nLAND 4\n5 5\n7 5\n7 7\n5 7\n");
  const auto r = chart::with_cell_size(c, 0.5);
  CHECK(r.grid.width == 80);
  CHECK(r.grid.height == 60);
  CHECK(chart::static_grid(r).count_occupied() == 16);
}
