#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "geometry.hpp"

namespace asvnav::geometry {

// Cell (col, row): col grows east, row grows north; cell (0,0) has its
// south-west corner at the grid origin.
struct GridCoord {
  int col = 0;
  int row = 0;

  friend bool operator==(const GridCoord&, const GridCoord&) = default;
};

struct GridMeta {
  UtmPoint origin;
  double cell_size = 1.0;
  int width = 0;
  int height = 0;

  std::size_t cell_count() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
  bool contains(GridCoord c) const { return c.col >= 0 && c.row >= 0 && c.col < width && c.row < height; }
  std::size_t index(GridCoord c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(c.col);
  }
  GridCoord coord(std::size_t index) const {
    return {static_cast<int>(index % static_cast<std::size_t>(width)),
            static_cast<int>(index / static_cast<std::size_t>(width))};
  }
  UtmPoint cell_center(GridCoord c) const {
    return {origin.easting + (c.col + 0.5) * cell_size, origin.northing + (c.row + 0.5) * cell_size};
  }
  UtmPoint corner(int vcol, int vrow) const {
    return {origin.easting + vcol * cell_size, origin.northing + vrow * cell_size};
  }
  // Cell containing p, or nullopt outside the grid.
  std::optional<GridCoord> cell_of(UtmPoint p) const;
  BoundingBox extent() const {
    return {origin.easting, origin.northing, origin.easting + width * cell_size, origin.northing + height * cell_size};
  }

  friend bool operator==(const GridMeta&, const GridMeta&) = default;
};

// Sorted, duplicate-free row-major cell indices.
using CellSet = std::vector<std::size_t>;

void normalize(CellSet& cells);

class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  explicit OccupancyGrid(const GridMeta& meta) : meta_(meta), cells_(meta.cell_count(), 0) {}

  const GridMeta& meta() const { return meta_; }
  bool occupied(GridCoord c) const { return cells_[meta_.index(c)] != 0; }
  bool occupied(std::size_t index) const { return cells_[index] != 0; }
  void set(GridCoord c) { cells_[meta_.index(c)] = 1; }
  void set(std::size_t index) { cells_[index] = 1; }
  std::size_t count_occupied() const;
  CellSet occupied_cells() const;

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  GridMeta meta_;
  std::vector<std::uint8_t> cells_;
};

// Maximal 8-connected components, each sorted, ordered by smallest index.
std::vector<CellSet> connected_components(const GridMeta& meta, const CellSet& cells);
std::vector<CellSet> connected_components(const OccupancyGrid& grid);

// Outer boundary of an 8-connected component as a counter-clockwise ring
// through cell corners, collinear vertices removed. Diagonal-only contacts
// are kept in one ring that touches itself at the shared corner.
Polygon trace_contour(const CellSet& component, const GridMeta& meta);

// Occupies every cell whose center lies inside poly or on its boundary.
void rasterize_polygon(const Polygon& poly, OccupancyGrid& grid);

}  // namespace asvnav::geometry
