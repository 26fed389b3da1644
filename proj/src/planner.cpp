#include "planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace asvnav::planner {

using geometry::BoundingBox;
using geometry::distance;
using geometry::dot;
using geometry::kTwoPi;

namespace {

constexpr double kSnap = 1e-7;  // m, boundary points closer than this to a vertex are that vertex

struct Interval {
  double t0 = 0.0;
  double t1 = 0.0;
};

BoundingBox segment_box(UtmPoint a, UtmPoint b) {
  return {std::min(a.easting, b.easting), std::min(a.northing, b.northing), std::max(a.easting, b.easting),
          std::max(a.northing, b.northing)};
}

// Parameter ranges of ab that lie strictly inside poly, merged where they
// touch.
std::vector<Interval> interior_intervals(UtmPoint a, UtmPoint b, const Polygon& poly) {
  std::vector<Interval> out;
  if (!segment_box(a, b).overlaps(geometry::bounds(poly))) return out;
  const auto hits = geometry::segment_polygon_intersections(a, b, poly);
  std::vector<double> ts{0.0};
  for (const auto& h : hits) ts.push_back(h.t);
  ts.push_back(1.0);
  std::sort(ts.begin(), ts.end());
  const UtmPoint d = b - a;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (ts[i] - ts[i - 1] <= 1e-12) continue;
    const UtmPoint mid = a + (0.5 * (ts[i] + ts[i - 1])) * d;
    if (!geometry::point_strictly_inside(mid, poly)) continue;
    if (!out.empty() && ts[i - 1] - out.back().t1 <= 1e-12) {
      out.back().t1 = ts[i];
    } else {
      out.push_back({ts[i - 1], ts[i]});
    }
  }
  return out;
}

UtmPoint lerp(UtmPoint a, UtmPoint b, double t) { return a + t * (b - a); }

void push_distinct(std::vector<UtmPoint>& pts, UtmPoint p) {
  if (pts.empty() || distance(pts.back(), p) > kSnap) pts.push_back(p);
}

bool inside_any(UtmPoint p, const ObstacleSet& obstacles) {
  for (const auto& poly : obstacles.polygons) {
    if (geometry::point_in_polygon(p, poly)) return true;
  }
  return false;
}

bool chain_blocked(const std::vector<UtmPoint>& pts, const ObstacleSet& obstacles, std::size_t skip) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    for (std::size_t k = 0; k < obstacles.polygons.size(); ++k) {
      if (k == skip) continue;
      if (geometry::segment_crosses_interior(pts[i - 1], pts[i], obstacles.polygons[k])) return true;
    }
  }
  return false;
}

struct Crossing {
  std::size_t obstacle = 0;
  std::size_t entry_seg = 0;
  double entry_t = 0.0;
  std::size_t exit_seg = 0;
  double exit_t = 0.0;
};

// First obstacle whose interior the path enters, with its first entry and
// last exit.
std::optional<Crossing> first_crossing(const Polyline& path, const ObstacleSet& obstacles) {
  const auto& pts = path.points;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    std::optional<Crossing> best;
    for (std::size_t k = 0; k < obstacles.polygons.size(); ++k) {
      const auto iv = interior_intervals(pts[i], pts[i + 1], obstacles.polygons[k]);
      if (iv.empty()) continue;
      if (!best || iv.front().t0 < best->entry_t) best = Crossing{k, i, iv.front().t0, 0, 0.0};
    }
    if (!best) continue;
    const Polygon& poly = obstacles.polygons[best->obstacle];
    for (std::size_t j = pts.size() - 1; j-- > i;) {
      const auto iv = interior_intervals(pts[j], pts[j + 1], poly);
      if (iv.empty()) continue;
      best->exit_seg = j;
      best->exit_t = iv.back().t1;
      break;
    }
    return best;
  }
  return std::nullopt;
}

std::optional<std::size_t> vertex_at(UtmPoint p, const Polygon& poly) {
  for (std::size_t k = 0; k < poly.size(); ++k) {
    if (distance(p, poly.ring[k]) <= kSnap) return k;
  }
  return std::nullopt;
}

// Replacement for path[entry..exit] through one boundary half.
std::vector<UtmPoint> splice(const Polyline& path, const Crossing& c, const Polyline& half) {
  const auto& pts = path.points;
  std::vector<UtmPoint> out;
  for (std::size_t i = 0; i <= c.entry_seg; ++i) push_distinct(out, pts[i]);
  for (const auto& p : half.points) push_distinct(out, p);
  for (std::size_t i = c.exit_seg + 1; i < pts.size(); ++i) push_distinct(out, pts[i]);
  return out;
}

std::optional<Polyline> detour_once(const Polyline& path, const Crossing& c, const ObstacleSet* others,
                                    const PlannerParams& params, const Polygon& poly) {
  const auto& pts = path.points;
  const UtmPoint entry = lerp(pts[c.entry_seg], pts[c.entry_seg + 1], c.entry_t);
  const UtmPoint exit = lerp(pts[c.exit_seg], pts[c.exit_seg + 1], c.exit_t);
  std::pair<Polyline, Polyline> halves;
  try {
    halves = geometry::split_contour(poly, entry, exit);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateSplit) return std::nullopt;
    throw;
  }
  const Polyline near = offset_boundary(halves.first, poly, params.clearance);
  Polyline chosen{splice(path, c, near)};
  if (others != nullptr) {
    // Prefer the longer half when only it keeps clear of the other obstacles.
    const auto lo = std::min(c.entry_seg, chosen.points.size() - 1);
    std::vector<UtmPoint> window(chosen.points.begin() + static_cast<std::ptrdiff_t>(lo),
                                 chosen.points.begin() + static_cast<std::ptrdiff_t>(std::min(chosen.points.size(), lo + near.points.size() + 2)));
    if (chain_blocked(window, *others, c.obstacle)) {
      const Polyline far = offset_boundary(halves.second, poly, params.clearance);
      Polyline alt{splice(path, c, far)};
      std::vector<UtmPoint> alt_window(alt.points.begin() + static_cast<std::ptrdiff_t>(lo),
                                       alt.points.begin() + static_cast<std::ptrdiff_t>(std::min(alt.points.size(), lo + far.points.size() + 2)));
      if (!chain_blocked(alt_window, *others, c.obstacle)) chosen = std::move(alt);
    }
  }
  return chosen;
}

}  // namespace

std::string_view to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::Ok: return "ok";
    case PlanStatus::Escaped: return "escaped";
    case PlanStatus::Stop: return "stop";
  }
  return "stop";
}

void ObstacleSet::add(Polygon poly) {
  if (poly.size() < 3) return;
  polygons.push_back(geometry::make_ccw(std::move(poly)));
}

Polyline clip_path(UtmPoint start, const Polyline& global, double lookahead) {
  const auto& w = global.points;
  if (w.size() < 2) throw Error(ErrorCode::InvalidArgument, "global path needs at least 2 waypoints");
  std::size_t best_seg = 0;
  UtmPoint best_foot = w[0];
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const UtmPoint f = geometry::closest_point_on_segment(start, w[i], w[i + 1]);
    const double d = distance(start, f);
    if (d < best_d) {
      best_d = d;
      best_seg = i;
      best_foot = f;
    }
  }
  while (lookahead > 0.0 && best_seg + 1 < w.size()) {
    const double left = distance(best_foot, w[best_seg + 1]);
    if (lookahead < left) {
      best_foot = best_foot + (lookahead / left) * (w[best_seg + 1] - best_foot);
      break;
    }
    lookahead -= left;
    best_foot = w[best_seg + 1];
    if (best_seg + 2 == w.size()) break;
    ++best_seg;
  }
  Polyline out;
  push_distinct(out.points, start);
  push_distinct(out.points, best_foot);
  for (std::size_t i = best_seg + 1; i < w.size(); ++i) push_distinct(out.points, w[i]);
  if (out.points.size() < 2) out.points.push_back(w.back());
  return out;
}

bool segment_blocked(UtmPoint a, UtmPoint b, const ObstacleSet& obstacles) {
  const BoundingBox box = segment_box(a, b);
  for (const auto& poly : obstacles.polygons) {
    if (!box.overlaps(geometry::bounds(poly))) continue;
    if (geometry::segment_crosses_interior(a, b, poly)) return true;
  }
  return false;
}

UtmPoint escape(UtmPoint start, const ObstacleSet& obstacles, const PlannerParams& params) {
  const double c = params.clearance;
  std::vector<UtmPoint> candidates;

  // Edge feet of the containing polygons, pushed out along the edge normal.
  for (const auto& poly : obstacles.polygons) {
    if (!geometry::point_in_polygon(start, poly)) continue;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const UtmPoint foot = geometry::closest_point_on_segment(start, poly.vertex(i), poly.vertex(i + 1));
      candidates.push_back(foot + c * geometry::outward_normal(poly, i));
    }
  }

  // Radial rays: the first boundary crossing beyond which the point is clear.
  const double r = params.search_radius;
  for (int k = 0; k < params.escape_directions; ++k) {
    const double a = kTwoPi * k / params.escape_directions;
    const UtmPoint dir = geometry::heading_vector(a);
    const UtmPoint end = start + r * dir;
    std::vector<double> ts;
    for (const auto& poly : obstacles.polygons) {
      for (const auto& h : geometry::segment_polygon_intersections(start, end, poly)) ts.push_back(h.t);
    }
    std::sort(ts.begin(), ts.end());
    for (const double t : ts) {
      const UtmPoint p = start + (t * r + c) * dir;
      if (!inside_any(p, obstacles)) {
        candidates.push_back(p);
        break;
      }
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](UtmPoint x, UtmPoint y) { return distance(start, x) < distance(start, y); });
  for (const auto& p : candidates) {
    if (distance(start, p) > r) break;
    if (!inside_any(p, obstacles)) return p;
  }
  throw Error(ErrorCode::NoSafePoint, "no safe point within the search radius");
}

Polyline offset_boundary(const Polyline& boundary, const Polygon& poly, double clearance) {
  Polyline out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < boundary.points.size(); ++i) {
    const UtmPoint p = boundary.points[i];
    if (const auto k = vertex_at(p, poly)) {
      const UtmPoint n1 = geometry::outward_normal(poly, (*k + n - 1) % n);
      const UtmPoint n2 = geometry::outward_normal(poly, *k);
      const double s = 1.0 + dot(n1, n2);
      if (s >= 0.1) {
        // Miter: distance clearance from both edge lines.
        push_distinct(out.points, p + (clearance / s) * (n1 + n2));
      } else {
        // Near-reversal spike: bevel, ordered toward the previous output point.
        UtmPoint b1 = p + clearance * n1, b2 = p + clearance * n2;
        if (!out.points.empty() && distance(out.points.back(), b2) < distance(out.points.back(), b1)) std::swap(b1, b2);
        push_distinct(out.points, b1);
        push_distinct(out.points, b2);
      }
    } else {
      push_distinct(out.points, p + clearance * geometry::outward_normal(poly, geometry::nearest_edge(p, poly)));
    }
  }
  return out;
}

Polyline detour(const Polyline& path, const Polygon& poly, const PlannerParams& params) {
  ObstacleSet single;
  single.add(poly);
  const auto c = first_crossing(path, single);
  if (!c) return path;
  auto out = detour_once(path, *c, nullptr, params, single.polygons.front());
  return out ? *out : path;
}

Polyline refine(const Polyline& path, const ObstacleSet& obstacles) {
  const auto& pts = path.points;
  if (pts.size() <= 2) return path;
  Polyline out;
  out.points.push_back(pts.front());
  std::size_t anchor = 0;
  while (anchor + 1 < pts.size()) {
    std::size_t next = anchor + 1;
    for (std::size_t j = pts.size() - 1; j > anchor + 1; --j) {
      if (!segment_blocked(pts[anchor], pts[j], obstacles)) {
        next = j;
        break;
      }
    }
    out.points.push_back(pts[next]);
    anchor = next;
  }
  return out;
}

PlanPath plan(UtmPoint start, const GlobalPath& global_path, const ObstacleSet& obstacles, const PlannerParams& params) {
  const auto& w = global_path.waypoints.points;
  if (w.size() < 2) throw Error(ErrorCode::InvalidArgument, "global path needs at least 2 waypoints");

  PlanPath result;
  const PlanPath stop{Polyline{{start}}, PlanStatus::Stop};
  if (inside_any(w.back(), obstacles)) return stop;

  UtmPoint origin = start;
  if (inside_any(start, obstacles)) {
    try {
      origin = escape(start, obstacles, params);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoSafePoint) return stop;
      throw;
    }
    result.status = PlanStatus::Escaped;
  }

  Polyline body = clip_path(origin, global_path.waypoints, params.rejoin_lookahead);
  int iterations = 0;
  while (const auto c = first_crossing(body, obstacles)) {
    if (++iterations > params.max_iterations) return stop;
    auto next = detour_once(body, *c, &obstacles, params, obstacles.polygons[c->obstacle]);
    if (!next) return stop;
    body = std::move(*next);
  }
  // An unobstructed global path is handed back as clipped.
  if (iterations > 0) body = refine(body, obstacles);

  for (std::size_t i = 1; i < body.points.size(); ++i) {
    if (segment_blocked(body.points[i - 1], body.points[i], obstacles)) return stop;
  }

  if (result.status == PlanStatus::Escaped) push_distinct(result.waypoints.points, start);
  for (const auto& p : body.points) push_distinct(result.waypoints.points, p);
  if (result.waypoints.points.size() < 2) result.waypoints.points.push_back(w.back());
  return result;
}

}  // namespace asvnav::planner
