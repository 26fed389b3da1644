#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace asvnav::geometry {

std::optional<GridCoord> GridMeta::cell_of(UtmPoint p) const {
  const double fc = std::floor((p.easting - origin.easting) / cell_size);
  const double fr = std::floor((p.northing - origin.northing) / cell_size);
  if (!(fc >= 0.0 && fr >= 0.0 && fc < width && fr < height)) return std::nullopt;
  return GridCoord{static_cast<int>(fc), static_cast<int>(fr)};
}

void normalize(CellSet& cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
}

std::size_t OccupancyGrid::count_occupied() const {
  return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [](std::uint8_t v) { return v != 0; }));
}

CellSet OccupancyGrid::occupied_cells() const {
  CellSet out;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i] != 0) out.push_back(i);
  }
  return out;
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    // Smaller root wins so roots track the earliest cell.
    if (a < b) parent[b] = a;
    else if (b < a) parent[a] = b;
  }
};

}  // namespace

std::vector<CellSet> connected_components(const GridMeta& meta, const CellSet& cells) {
  std::vector<CellSet> out;
  if (cells.empty()) return out;

  auto position = [&](GridCoord c) -> std::optional<std::size_t> {
    if (!meta.contains(c)) return std::nullopt;
    const auto it = std::lower_bound(cells.begin(), cells.end(), meta.index(c));
    if (it == cells.end() || *it != meta.index(c)) return std::nullopt;
    return static_cast<std::size_t>(it - cells.begin());
  };

  DisjointSets sets(cells.size());
  // Only neighbours earlier in row-major order need visiting.
  constexpr int kBack[4][2] = {{-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const GridCoord c = meta.coord(cells[i]);
    for (const auto& d : kBack) {
      if (auto j = position({c.col + d[0], c.row + d[1]})) sets.unite(i, *j);
    }
  }

  std::vector<std::size_t> slot(cells.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::size_t root = sets.find(i);
    if (slot[root] == static_cast<std::size_t>(-1)) {
      slot[root] = out.size();
      out.emplace_back();
    }
    out[slot[root]].push_back(cells[i]);
  }
  return out;
}

std::vector<CellSet> connected_components(const OccupancyGrid& grid) {
  return connected_components(grid.meta(), grid.occupied_cells());
}

Polygon trace_contour(const CellSet& component, const GridMeta& meta) {
  if (component.empty()) return {};

  int min_c = meta.width, min_r = meta.height, max_c = -1, max_r = -1;
  for (std::size_t idx : component) {
    const GridCoord c = meta.coord(idx);
    min_c = std::min(min_c, c.col);
    max_c = std::max(max_c, c.col);
    min_r = std::min(min_r, c.row);
    max_r = std::max(max_r, c.row);
  }
  const int w = max_c - min_c + 1;
  const int h = max_r - min_r + 1;
  std::vector<std::uint8_t> local(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
  for (std::size_t idx : component) {
    const GridCoord c = meta.coord(idx);
    local[static_cast<std::size_t>(c.row - min_r) * w + (c.col - min_c)] = 1;
  }
  auto filled = [&](int col, int row) {
    const int lc = col - min_c, lr = row - min_r;
    if (lc < 0 || lr < 0 || lc >= w || lr >= h) return false;
    return local[static_cast<std::size_t>(lr) * w + lc] != 0;
  };

  // Directions: 0 east, 1 north, 2 west, 3 south. Cells left/right of the
  // directed edge leaving vertex (x, y).
  constexpr int kStep[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  constexpr int kLeft[4][2] = {{0, 0}, {-1, 0}, {-1, -1}, {0, -1}};
  constexpr int kRight[4][2] = {{0, -1}, {0, 0}, {-1, 0}, {-1, -1}};
  auto boundary_edge = [&](int x, int y, int dir) {
    return filled(x + kLeft[dir][0], y + kLeft[dir][1]) && !filled(x + kRight[dir][0], y + kRight[dir][1]);
  };

  // The bottom edge of the first cell is always on the outer boundary.
  const GridCoord first = meta.coord(component.front());
  const int sx = first.col, sy = first.row;
  int x = sx, y = sy, dir = 0;
  std::vector<std::pair<int, int>> corners;
  const std::size_t limit = 4 * component.size() + 8;
  for (std::size_t steps = 0; steps < limit; ++steps) {
    x += kStep[dir][0];
    y += kStep[dir][1];
    // Prefer turning right so diagonal contacts stay in one ring.
    int next = -1;
    for (int turn : {3, 0, 1}) {
      const int cand = (dir + turn) % 4;
      if (boundary_edge(x, y, cand)) {
        next = cand;
        break;
      }
    }
    if (next < 0) next = (dir + 2) % 4;
    if (next != dir) corners.emplace_back(x, y);
    dir = next;
    if (x == sx && y == sy && dir == 0) break;
  }

  Polygon poly;
  poly.ring.reserve(corners.size());
  // Start from the origin corner for a stable vertex order.
  std::size_t start = 0;
  for (std::size_t i = 0; i < corners.size(); ++i) {
    if (corners[i].first == sx && corners[i].second == sy) {
      start = i;
      break;
    }
  }
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const auto& [cx, cy] = corners[(start + i) % corners.size()];
    poly.ring.push_back(meta.corner(cx, cy));
  }
  return poly;
}

void rasterize_polygon(const Polygon& poly, OccupancyGrid& grid) {
  if (poly.size() < 3) return;
  const GridMeta& meta = grid.meta();
  const BoundingBox box = bounds(poly);
  const double cs = meta.cell_size;
  const double ox = meta.origin.easting, oy = meta.origin.northing;
  const double tol = tolerance(std::max(box.magnitude(), meta.extent().magnitude()));

  auto clamp_col = [&](double v) { return static_cast<int>(std::clamp(v, -1.0, static_cast<double>(meta.width))); };
  auto clamp_row = [&](double v) { return static_cast<int>(std::clamp(v, -1.0, static_cast<double>(meta.height))); };
  const int r0 = std::max(0, clamp_row(std::ceil((box.min_n - tol - oy) / cs - 0.5)));
  const int r1 = std::min(meta.height - 1, clamp_row(std::floor((box.max_n + tol - oy) / cs - 0.5)));
  const int c0 = std::max(0, clamp_col(std::ceil((box.min_e - tol - ox) / cs - 0.5)));
  const int c1 = std::min(meta.width - 1, clamp_col(std::floor((box.max_e + tol - ox) / cs - 0.5)));
  if (r0 > r1 || c0 > c1) return;

  const std::size_t n = poly.size();
  std::vector<double> xs;
  for (int row = r0; row <= r1; ++row) {
    const double y = oy + (row + 0.5) * cs;
    bool near_vertex = false;
    for (const auto& v : poly.ring) {
      if (std::fabs(v.northing - y) <= tol) {
        near_vertex = true;
        break;
      }
    }
    if (near_vertex) {
      for (int col = c0; col <= c1; ++col) {
        if (point_in_polygon(meta.cell_center({col, row}), poly)) grid.set(GridCoord{col, row});
      }
      continue;
    }
    xs.clear();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const UtmPoint& a = poly.ring[i];
      const UtmPoint& b = poly.ring[j];
      if ((a.northing > y) != (b.northing > y)) {
        xs.push_back(a.easting + (y - a.northing) * (b.easting - a.easting) / (b.northing - a.northing));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const int lo = std::max(c0, clamp_col(std::ceil((xs[k] - ox) / cs - 0.5)));
      const int hi = std::min(c1, clamp_col(std::floor((xs[k + 1] - ox) / cs - 0.5)));
      for (int col = lo; col <= hi; ++col) grid.set(GridCoord{col, row});
      // Centers a rounding error outside the span may still sit on the boundary.
      for (int col : {lo - 1, hi + 1}) {
        if (col >= c0 && col <= c1 && point_in_polygon(meta.cell_center({col, row}), poly)) {
          grid.set(GridCoord{col, row});
        }
      }
    }
  }
}

}  // namespace asvnav::geometry
