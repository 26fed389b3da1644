#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "grid.hpp"

namespace asvnav::chart {

using geometry::GridMeta;
using geometry::OccupancyGrid;
using geometry::Polygon;
using geometry::UtmPoint;

// Georeferenced land polygons plus the grid they rasterize onto. Immutable
// after load.
struct Chart {
  std::vector<Polygon> land_polygons;  // counter-clockwise, simple
  GridMeta grid;
};

// Text format, '#' starts a comment:
//   GRID <origin_easting> <origin_northing> <cell_size_m> <width_cells> <height_cells>
//   LAND <n>
//   <easting> <northing>      (n lines)
// Throws Error(ChartParse) with the offending line, Error(ChartValidation)
// for degenerate or self-intersecting rings and bad grid metadata.
Chart load_chart(const std::filesystem::path& path);
Chart parse_chart(std::istream& in);

void write_chart(std::ostream& out, const Chart& chart);
void save_chart(const std::filesystem::path& path, const Chart& chart);

// Throws Error(ChartValidation).
void validate(const Chart& chart);

// Cells whose centers fall inside some land polygon are occupied.
OccupancyGrid static_grid(const Chart& chart);

// Same extent resampled at a different cell size.
Chart with_cell_size(const Chart& chart, double cell_size);

bool on_land(const Chart& chart, UtmPoint p);

}  // namespace asvnav::chart
