#include "chart.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "error.hpp"
#include "textio.hpp"

namespace asvnav::chart {

namespace {

[[noreturn]] void parse_error(int line, const std::string& why) { throw Error(ErrorCode::ChartParse, why, line); }

}  // namespace

Chart parse_chart(std::istream& in) {
  Chart chart;
  bool have_grid = false;
  std::string raw;
  int line_no = 0;
  Polygon current;
  std::size_t expected = 0;
  int land_line = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto tokens = textio::split_ws(textio::strip_comment(raw));
    if (tokens.empty()) continue;

    if (expected > 0) {
      if (tokens.size() != 2) parse_error(line_no, "expected '<easting> <northing>'");
      UtmPoint p;
      if (!textio::parse_double(tokens[0], p.easting) || !textio::parse_double(tokens[1], p.northing)) {
        parse_error(line_no, "malformed coordinate");
      }
      current.ring.push_back(p);
      if (--expected == 0) {
        chart.land_polygons.push_back(std::move(current));
        current = {};
      }
      continue;
    }

    if (tokens[0] == "GRID") {
      if (have_grid) parse_error(line_no, "duplicate GRID record");
      if (!chart.land_polygons.empty()) parse_error(line_no, "GRID must precede LAND records");
      if (tokens.size() != 6) parse_error(line_no, "GRID expects 5 fields");
      GridMeta& g = chart.grid;
      long long w = 0, h = 0;
      if (!textio::parse_double(tokens[1], g.origin.easting) || !textio::parse_double(tokens[2], g.origin.northing) ||
          !textio::parse_double(tokens[3], g.cell_size) || !textio::parse_int(tokens[4], w) ||
          !textio::parse_int(tokens[5], h)) {
        parse_error(line_no, "malformed GRID field");
      }
      if (w < 1 || h < 1 || w > 1'000'000 || h > 1'000'000) {
        throw Error(ErrorCode::ChartValidation, "grid dimensions must be in [1, 1e6]", line_no);
      }
      if (!(g.cell_size > 0.0) || !std::isfinite(g.cell_size)) {
        throw Error(ErrorCode::ChartValidation, "cell size must be positive", line_no);
      }
      g.width = static_cast<int>(w);
      g.height = static_cast<int>(h);
      have_grid = true;
    } else if (tokens[0] == "LAND") {
      if (!have_grid) parse_error(line_no, "LAND before GRID");
      long long n = 0;
      if (tokens.size() != 2 || !textio::parse_int(tokens[1], n) || n < 0) parse_error(line_no, "LAND expects a vertex count");
      if (n < 3) throw Error(ErrorCode::ChartValidation, "land polygon needs at least 3 vertices", line_no);
      expected = static_cast<std::size_t>(n);
      land_line = line_no;
    } else {
      parse_error(line_no, "unknown record '" + tokens[0] + "'");
    }
  }
  if (expected > 0) parse_error(land_line, "LAND polygon truncated at end of file");
  if (!have_grid) parse_error(std::max(line_no, 1), "missing GRID record");

  for (auto& poly : chart.land_polygons) poly = geometry::make_ccw(std::move(poly));
  validate(chart);
  return chart;
}

Chart load_chart(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open chart " + path.string());
  return parse_chart(in);
}

void validate(const Chart& chart) {
  const GridMeta& g = chart.grid;
  if (!(g.cell_size > 0.0) || !std::isfinite(g.cell_size)) throw Error(ErrorCode::ChartValidation, "cell size must be positive");
  if (g.width < 1 || g.height < 1) throw Error(ErrorCode::ChartValidation, "grid must have at least one cell");
  if (!std::isfinite(g.origin.easting) || !std::isfinite(g.origin.northing)) {
    throw Error(ErrorCode::ChartValidation, "grid origin must be finite");
  }
  for (std::size_t i = 0; i < chart.land_polygons.size(); ++i) {
    const Polygon& poly = chart.land_polygons[i];
    if (poly.size() < 3) {
      throw Error(ErrorCode::ChartValidation, "land polygon " + std::to_string(i) + " has fewer than 3 vertices");
    }
    for (const auto& p : poly.ring) {
      if (!std::isfinite(p.easting) || !std::isfinite(p.northing)) {
        throw Error(ErrorCode::ChartValidation, "land polygon " + std::to_string(i) + " has a non-finite vertex");
      }
    }
    if (!geometry::is_simple(poly)) {
      throw Error(ErrorCode::ChartValidation, "land polygon " + std::to_string(i) + " is self-intersecting");
    }
  }
}

void write_chart(std::ostream& out, const Chart& chart) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(17);
  s << "GRID " << chart.grid.origin.easting << ' ' << chart.grid.origin.northing << ' ' << chart.grid.cell_size << ' '
    << chart.grid.width << ' ' << chart.grid.height << '\n';
  for (const auto& poly : chart.land_polygons) {
    s << "LAND " << poly.size() << '\n';
    for (const auto& p : poly.ring) s << p.easting << ' ' << p.northing << '\n';
  }
  out << s.str();
}

void save_chart(const std::filesystem::path& path, const Chart& chart) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write chart " + path.string());
  write_chart(out, chart);
}

OccupancyGrid static_grid(const Chart& chart) {
  OccupancyGrid grid(chart.grid);
  for (const auto& poly : chart.land_polygons) geometry::rasterize_polygon(poly, grid);
  return grid;
}

Chart with_cell_size(const Chart& chart, double cell_size) {
  if (!(cell_size > 0.0)) throw Error(ErrorCode::InvalidArgument, "cell size must be positive");
  Chart out = chart;
  const double we = chart.grid.width * chart.grid.cell_size;
  const double he = chart.grid.height * chart.grid.cell_size;
  out.grid.cell_size = cell_size;
  out.grid.width = std::max(1, static_cast<int>(std::ceil(we / cell_size - 1e-9)));
  out.grid.height = std::max(1, static_cast<int>(std::ceil(he / cell_size - 1e-9)));
  return out;
}

bool on_land(const Chart& chart, UtmPoint p) {
  for (const auto& poly : chart.land_polygons) {
    if (geometry::point_in_polygon(p, poly)) return true;
  }
  return false;
}

}  // namespace asvnav::chart
