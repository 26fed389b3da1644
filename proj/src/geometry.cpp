#include "geometry.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "error.hpp"

namespace asvnav::geometry {

double heading_of(UtmPoint v) { return wrap_two_pi(std::atan2(v.easting, v.northing)); }

double wrap_pi(double angle) {
  double r = std::remainder(angle, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

double wrap_two_pi(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

BoundingBox bounds(std::span<const UtmPoint> pts) {
  BoundingBox box;
  if (pts.empty()) return box;
  box.min_e = box.max_e = pts.front().easting;
  box.min_n = box.max_n = pts.front().northing;
  for (const auto& p : pts) {
    box.min_e = std::min(box.min_e, p.easting);
    box.max_e = std::max(box.max_e, p.easting);
    box.min_n = std::min(box.min_n, p.northing);
    box.max_n = std::max(box.max_n, p.northing);
  }
  return box;
}

BoundingBox bounds(const Polygon& poly) { return bounds(std::span<const UtmPoint>(poly.ring)); }

double signed_area(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return 0.0;
  // Shoelace relative to the first vertex keeps UTM-sized coordinates exact enough.
  const UtmPoint o = poly.ring[0];
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) twice += cross(poly.ring[i] - o, poly.ring[i + 1] - o);
  return 0.5 * twice;
}

double perimeter(const Polygon& poly) {
  double total = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) total += distance(poly.vertex(i), poly.vertex(i + 1));
  return total;
}

double length(const Polyline& line) {
  double total = 0.0;
  for (std::size_t i = 1; i < line.points.size(); ++i) total += distance(line.points[i - 1], line.points[i]);
  return total;
}

Polygon make_ccw(Polygon poly) {
  if (signed_area(poly) < 0.0) std::reverse(poly.ring.begin(), poly.ring.end());
  return poly;
}

UtmPoint vertex_mean(const Polygon& poly) {
  if (poly.ring.empty()) return {};
  double e = 0.0, n = 0.0;
  for (const auto& p : poly.ring) {
    e += p.easting;
    n += p.northing;
  }
  const double k = static_cast<double>(poly.ring.size());
  return {e / k, n / k};
}

Polygon translated(const Polygon& poly, UtmPoint offset) {
  Polygon out = poly;
  for (auto& p : out.ring) p = p + offset;
  return out;
}

UtmPoint closest_point_on_segment(UtmPoint p, UtmPoint a, UtmPoint b) {
  const UtmPoint d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return a + t * d;
}

double distance_to_segment(UtmPoint p, UtmPoint a, UtmPoint b) {
  return distance(p, closest_point_on_segment(p, a, b));
}

namespace {

double magnitude_of(std::initializer_list<UtmPoint> pts) {
  double m = 0.0;
  for (const auto& p : pts) m = std::max({m, std::fabs(p.easting), std::fabs(p.northing)});
  return m;
}

// Crossing-number parity; boundary handling is the caller's business.
bool crossing_parity(UtmPoint p, const Polygon& poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const UtmPoint& a = poly.ring[i];
    const UtmPoint& b = poly.ring[j];
    if ((a.northing > p.northing) != (b.northing > p.northing)) {
      const double x = a.easting + (p.northing - a.northing) * (b.easting - a.easting) / (b.northing - a.northing);
      if (p.easting < x) inside = !inside;
    }
  }
  return inside;
}

BoundingBox edge_box(UtmPoint a, UtmPoint b) {
  return {std::min(a.easting, b.easting), std::min(a.northing, b.northing), std::max(a.easting, b.easting),
          std::max(a.northing, b.northing)};
}

}  // namespace

bool segments_intersect(UtmPoint a, UtmPoint b, UtmPoint c, UtmPoint d) {
  const double tol = tolerance(magnitude_of({a, b, c, d}));
  if (distance_to_segment(a, c, d) <= tol || distance_to_segment(b, c, d) <= tol ||
      distance_to_segment(c, a, b) <= tol || distance_to_segment(d, a, b) <= tol) {
    return true;
  }
  const double o1 = cross(b - a, c - a);
  const double o2 = cross(b - a, d - a);
  const double o3 = cross(d - c, a - c);
  const double o4 = cross(d - c, b - c);
  return ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0));
}

bool on_boundary(UtmPoint p, const Polygon& poly) {
  const double tol = tolerance(std::max(bounds(poly).magnitude(), magnitude_of({p})));
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (distance_to_segment(p, poly.vertex(i), poly.vertex(i + 1)) <= tol) return true;
  }
  return false;
}

bool point_in_polygon(UtmPoint p, const Polygon& poly) {
  if (poly.size() < 3) return false;
  const BoundingBox box = bounds(poly);
  const double tol = tolerance(std::max(box.magnitude(), magnitude_of({p})));
  if (!box.contains(p, tol)) return false;
  return on_boundary(p, poly) || crossing_parity(p, poly);
}

bool point_strictly_inside(UtmPoint p, const Polygon& poly) {
  if (poly.size() < 3) return false;
  const BoundingBox box = bounds(poly);
  if (!box.contains(p)) return false;
  return crossing_parity(p, poly) && !on_boundary(p, poly);
}

bool polygons_intersect(const Polygon& a, const Polygon& b) {
  if (a.size() < 3 || b.size() < 3) return false;
  const BoundingBox ba = bounds(a);
  const BoundingBox bb = bounds(b);
  const double tol = tolerance(std::max(ba.magnitude(), bb.magnitude()));
  if (!ba.overlaps(bb, tol)) return false;

  auto candidate_edges = [tol](const Polygon& poly, const BoundingBox& other) {
    std::vector<std::size_t> edges;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      if (edge_box(poly.vertex(i), poly.vertex(i + 1)).overlaps(other, tol)) edges.push_back(i);
    }
    return edges;
  };
  const auto ea = candidate_edges(a, bb);
  const auto eb = candidate_edges(b, ba);
  for (std::size_t i : ea) {
    const UtmPoint p = a.vertex(i), q = a.vertex(i + 1);
    const BoundingBox pq = edge_box(p, q);
    for (std::size_t j : eb) {
      const UtmPoint r = b.vertex(j), s = b.vertex(j + 1);
      if (!pq.overlaps(edge_box(r, s), tol)) continue;
      if (segments_intersect(p, q, r, s)) return true;
    }
  }
  // No boundary contact: intersect only by containment.
  return crossing_parity(a.ring[0], b) || crossing_parity(b.ring[0], a);
}

bool is_simple(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  const double tol = tolerance(bounds(poly).magnitude());
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(poly.vertex(i), poly.vertex(i + 1)) <= tol) return false;
  }
  // Adjacent edges may only share their common vertex.
  for (std::size_t i = 0; i < n; ++i) {
    const UtmPoint a = poly.vertex(i), b = poly.vertex(i + 1), c = poly.vertex(i + 2);
    if (distance_to_segment(c, a, b) <= tol || distance_to_segment(a, b, c) <= tol) return false;
  }
  if (n == 3) return true;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<BoundingBox> boxes(n);
  for (std::size_t i = 0; i < n; ++i) boxes[i] = edge_box(poly.vertex(i), poly.vertex(i + 1));
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return boxes[x].min_e < boxes[y].min_e; });
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    for (std::size_t m = k + 1; m < n && boxes[order[m]].min_e <= boxes[i].max_e + tol; ++m) {
      const std::size_t j = order[m];
      const std::size_t lo = std::min(i, j), hi = std::max(i, j);
      if (hi == lo + 1 || (lo == 0 && hi == n - 1)) continue;
      if (!boxes[i].overlaps(boxes[j], tol)) continue;
      if (segments_intersect(poly.vertex(i), poly.vertex(i + 1), poly.vertex(j), poly.vertex(j + 1))) return false;
    }
  }
  return true;
}

std::vector<BoundaryHit> segment_polygon_intersections(UtmPoint a, UtmPoint b, const Polygon& poly) {
  std::vector<BoundaryHit> hits;
  const std::size_t n = poly.size();
  if (n < 2) return hits;
  const BoundingBox box = bounds(poly);
  const double tol = tolerance(std::max(box.magnitude(), magnitude_of({a, b})));
  const BoundingBox seg_box = edge_box(a, b);
  if (!seg_box.overlaps(box, tol)) return hits;

  const UtmPoint d = b - a;
  const double len2 = dot(d, d);
  const double len = std::sqrt(len2);
  if (len <= tol) {
    for (std::size_t i = 0; i < n; ++i) {
      if (distance_to_segment(a, poly.vertex(i), poly.vertex(i + 1)) <= tol) {
        hits.push_back({a, i, 0.0});
        break;
      }
    }
    return hits;
  }

  auto param_of = [&](UtmPoint p) { return std::clamp(dot(p - a, d) / len2, 0.0, 1.0); };
  for (std::size_t i = 0; i < n; ++i) {
    const UtmPoint p = poly.vertex(i), q = poly.vertex(i + 1);
    if (!seg_box.overlaps(edge_box(p, q), tol)) continue;
    const UtmPoint e = q - p;
    const double elen = norm(e);
    if (elen == 0.0) continue;
    const double denom = cross(d, e);
    if (std::fabs(denom) <= 1e-12 * len * elen) {
      // Parallel: only collinear overlap produces boundary contact.
      if (std::fabs(cross(d, p - a)) / len > tol) continue;
      const double tp = dot(p - a, d) / len2;
      const double tq = dot(q - a, d) / len2;
      const double lo = std::max(0.0, std::min(tp, tq));
      const double hi = std::min(1.0, std::max(tp, tq));
      const double slack = tol / len;
      if (lo > hi + slack) continue;
      hits.push_back({a + lo * d, i, lo});
      if (hi - lo > slack) hits.push_back({a + hi * d, i, hi});
      continue;
    }
    const double t = cross(p - a, e) / denom;
    const double u = cross(p - a, d) / denom;
    const double st = tol / len, su = tol / elen;
    if (t < -st || t > 1.0 + st || u < -su || u > 1.0 + su) continue;
    if (u <= su) {
      hits.push_back({p, i, param_of(p)});
    } else if (u >= 1.0 - su) {
      hits.push_back({q, i, param_of(q)});
    } else {
      const double tc = std::clamp(t, 0.0, 1.0);
      hits.push_back({a + tc * d, i, tc});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const BoundaryHit& x, const BoundaryHit& y) {
    return x.t != y.t ? x.t < y.t : x.edge < y.edge;
  });
  std::vector<BoundaryHit> merged;
  for (const auto& h : hits) {
    if (!merged.empty() && distance(merged.back().point, h.point) <= 8.0 * tol) continue;
    merged.push_back(h);
  }
  return merged;
}

std::vector<BoundaryHit> segment_polygon_intersections(const Polyline& seg, const Polygon& poly) {
  if (seg.points.size() != 2) throw Error(ErrorCode::InvalidArgument, "segment must have exactly 2 points");
  return segment_polygon_intersections(seg.points[0], seg.points[1], poly);
}

bool segment_crosses_interior(UtmPoint a, UtmPoint b, const Polygon& poly) {
  if (poly.size() < 3) return false;
  const BoundingBox box = bounds(poly);
  if (!edge_box(a, b).overlaps(box)) return false;
  const auto hits = segment_polygon_intersections(a, b, poly);
  std::vector<double> ts;
  ts.reserve(hits.size() + 2);
  ts.push_back(0.0);
  for (const auto& h : hits) ts.push_back(h.t);
  ts.push_back(1.0);
  std::sort(ts.begin(), ts.end());
  const UtmPoint d = b - a;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (ts[i] - ts[i - 1] <= 1e-12) continue;
    const UtmPoint mid = a + (0.5 * (ts[i] + ts[i - 1])) * d;
    if (point_strictly_inside(mid, poly)) return true;
  }
  return false;
}

std::size_t nearest_edge(UtmPoint p, const Polygon& poly) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const double dd = distance_to_segment(p, poly.vertex(i), poly.vertex(i + 1));
    if (dd < best_d) {
      best_d = dd;
      best = i;
    }
  }
  return best;
}

UtmPoint outward_normal(const Polygon& poly, std::size_t edge) {
  const UtmPoint e = poly.vertex(edge + 1) - poly.vertex(edge);
  const double len = norm(e);
  if (len == 0.0) return {};
  return {e.northing / len, -e.easting / len};
}

namespace {

void push_distinct(std::vector<UtmPoint>& pts, UtmPoint p, double tol) {
  if (pts.empty() || distance(pts.back(), p) > tol) pts.push_back(p);
}

// Row-major order of grid cells: southern rows first, then west to east.
bool row_major_less(UtmPoint a, UtmPoint b) {
  return a.northing != b.northing ? a.northing < b.northing : a.easting < b.easting;
}

}  // namespace

std::pair<Polyline, Polyline> split_contour(const Polygon& poly, UtmPoint entry, UtmPoint exit) {
  const std::size_t n = poly.size();
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "split_contour needs a polygon");
  const double tol = tolerance(std::max(bounds(poly).magnitude(), magnitude_of({entry, exit})));
  if (distance(entry, exit) <= tol) throw Error(ErrorCode::DegenerateSplit, "entry and exit coincide");

  const std::size_t ei = nearest_edge(entry, poly);
  const std::size_t xi = nearest_edge(exit, poly);

  auto along = [&](std::size_t edge, UtmPoint p) {
    const UtmPoint a = poly.vertex(edge), b = poly.vertex(edge + 1);
    return dot(p - a, b - a);
  };

  Polyline forward, backward;
  // Forward follows the ring order, backward runs against it.
  push_distinct(forward.points, entry, tol);
  if (ei == xi && along(ei, exit) >= along(ei, entry)) {
    push_distinct(forward.points, exit, tol);
  } else {
    std::size_t k = (ei + 1) % n;
    for (std::size_t step = 0; step < n; ++step) {
      push_distinct(forward.points, poly.ring[k], tol);
      if (k == xi) break;
      k = (k + 1) % n;
    }
    push_distinct(forward.points, exit, tol);
  }

  push_distinct(backward.points, entry, tol);
  if (ei == xi && along(ei, exit) < along(ei, entry)) {
    push_distinct(backward.points, exit, tol);
  } else {
    std::size_t k = ei;
    for (std::size_t step = 0; step < n; ++step) {
      push_distinct(backward.points, poly.ring[k], tol);
      const std::size_t next_edge_end = (xi + 1) % n;
      if (k == next_edge_end) break;
      k = (k + n - 1) % n;
    }
    push_distinct(backward.points, exit, tol);
  }

  const double lf = length(forward);
  const double lb = length(backward);
  const double tie = 1e-9 * std::max(1.0, lf + lb);
  bool forward_first;
  if (std::fabs(lf - lb) <= tie) {
    forward_first = !row_major_less(backward.points[1], forward.points[1]);
  } else {
    forward_first = lf < lb;
  }
  if (forward_first) return {std::move(forward), std::move(backward)};
  return {std::move(backward), std::move(forward)};
}

Polygon convex_hull(std::span<const UtmPoint> pts) {
  std::vector<UtmPoint> p(pts.begin(), pts.end());
  std::sort(p.begin(), p.end(), [](UtmPoint a, UtmPoint b) {
    return a.easting != b.easting ? a.easting < b.easting : a.northing < b.northing;
  });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return Polygon{p};

  std::vector<UtmPoint> hull(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p[i];
  }
  hull.resize(k - 1);
  return Polygon{std::move(hull)};
}

Polygon dilate_points(std::span<const UtmPoint> pts, double radius, int segments) {
  const Polygon base = convex_hull(pts);
  // Circumscribed polygon so the true disc is contained.
  const double r = radius / std::cos(kPi / segments);
  std::vector<UtmPoint> cloud;
  cloud.reserve(base.size() * static_cast<std::size_t>(segments));
  for (const auto& p : base.ring) {
    for (int k = 0; k < segments; ++k) {
      const double a = kTwoPi * (k + 0.5) / segments;
      cloud.push_back({p.easting + r * std::cos(a), p.northing + r * std::sin(a)});
    }
  }
  return convex_hull(cloud);
}

}  // namespace asvnav::geometry
