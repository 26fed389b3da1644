#pragma once

/// @file geometry.hpp
/// Planar primitives in UTM meters: points, polygon rings, polylines and the
/// predicates the radar, COLREGs and planner stages share.
///
/// Containment is boundary-inclusive everywhere: a point on a polygon edge
/// counts as inside. Point-on-line tests use a 1e-9 m tolerance, widened to a
/// few ulps of the coordinate magnitude so that absolute UTM northings
/// (~5e6 m) still resolve.

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace asvnav::geometry {

inline constexpr double kEps = 1e-9;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct UtmPoint {
  double easting = 0.0;
  double northing = 0.0;

  friend bool operator==(const UtmPoint&, const UtmPoint&) = default;
};

inline UtmPoint operator+(UtmPoint a, UtmPoint b) { return {a.easting + b.easting, a.northing + b.northing}; }
inline UtmPoint operator-(UtmPoint a, UtmPoint b) { return {a.easting - b.easting, a.northing - b.northing}; }
inline UtmPoint operator*(double s, UtmPoint a) { return {s * a.easting, s * a.northing}; }
inline double dot(UtmPoint a, UtmPoint b) { return a.easting * b.easting + a.northing * b.northing; }
inline double cross(UtmPoint a, UtmPoint b) { return a.easting * b.northing - a.northing * b.easting; }
inline double norm(UtmPoint a) { return std::hypot(a.easting, a.northing); }
inline double distance(UtmPoint a, UtmPoint b) { return norm(a - b); }

// Unit vector for a compass heading (radians clockwise from north).
inline UtmPoint heading_vector(double heading) { return {std::sin(heading), std::cos(heading)}; }

// Compass heading of a displacement, in [0, 2pi).
double heading_of(UtmPoint v);

// Wraps an angle to (-pi, pi].
double wrap_pi(double angle);

// Wraps an angle to [0, 2pi).
double wrap_two_pi(double angle);

// Tolerance for point-on-line decisions near coordinates of the given magnitude.
inline double tolerance(double magnitude) { return std::fmax(kEps, 1e-14 * magnitude); }

struct BoundingBox {
  double min_e = 0.0, min_n = 0.0, max_e = 0.0, max_n = 0.0;

  bool overlaps(const BoundingBox& o, double pad = 0.0) const {
    return min_e <= o.max_e + pad && o.min_e <= max_e + pad && min_n <= o.max_n + pad && o.min_n <= max_n + pad;
  }
  bool contains(UtmPoint p, double pad = 0.0) const {
    return p.easting >= min_e - pad && p.easting <= max_e + pad && p.northing >= min_n - pad &&
           p.northing <= max_n + pad;
  }
  double magnitude() const {
    return std::fmax(std::fmax(std::fabs(min_e), std::fabs(max_e)), std::fmax(std::fabs(min_n), std::fabs(max_n)));
  }
};

BoundingBox bounds(std::span<const UtmPoint> pts);

// Implicitly closed ring; outer rings are counter-clockwise.
struct Polygon {
  std::vector<UtmPoint> ring;

  std::size_t size() const { return ring.size(); }
  const UtmPoint& vertex(std::size_t i) const { return ring[i % ring.size()]; }
};

struct Polyline {
  std::vector<UtmPoint> points;
};

double signed_area(const Polygon& poly);
double perimeter(const Polygon& poly);
double length(const Polyline& line);
BoundingBox bounds(const Polygon& poly);

// Reverses clockwise rings so the result is counter-clockwise.
Polygon make_ccw(Polygon poly);

// Arithmetic mean of the ring vertices.
UtmPoint vertex_mean(const Polygon& poly);

Polygon translated(const Polygon& poly, UtmPoint offset);

UtmPoint closest_point_on_segment(UtmPoint p, UtmPoint a, UtmPoint b);
double distance_to_segment(UtmPoint p, UtmPoint a, UtmPoint b);

// Closed-segment intersection, touching included.
bool segments_intersect(UtmPoint a, UtmPoint b, UtmPoint c, UtmPoint d);

bool on_boundary(UtmPoint p, const Polygon& poly);

// True iff p is inside poly or on its boundary.
bool point_in_polygon(UtmPoint p, const Polygon& poly);

// True iff p is inside poly and not on its boundary.
bool point_strictly_inside(UtmPoint p, const Polygon& poly);

// True iff the boundaries cross or touch, or one polygon contains the other.
bool polygons_intersect(const Polygon& a, const Polygon& b);

// Ring has no crossing or touching between non-adjacent edges.
bool is_simple(const Polygon& poly);

struct BoundaryHit {
  UtmPoint point;
  std::size_t edge = 0;  // edge i runs from vertex i to vertex i+1
  double t = 0.0;        // parameter along the query segment
};

// Boundary points met by segment ab, ordered by distance from a. Hits closer
// than the tolerance are merged; a segment running along an edge reports the
// two ends of the overlap.
std::vector<BoundaryHit> segment_polygon_intersections(UtmPoint a, UtmPoint b, const Polygon& poly);
std::vector<BoundaryHit> segment_polygon_intersections(const Polyline& seg, const Polygon& poly);

// True iff some point of segment ab lies strictly inside poly. Segments that
// only touch the boundary or run along it do not cross.
bool segment_crosses_interior(UtmPoint a, UtmPoint b, const Polygon& poly);

// Splits the boundary at two boundary points into the two polylines that run
// from entry to exit. The shorter comes first; on equal length the one whose
// first interior vertex has the smaller (northing, easting) comes first.
// Throws Error(DegenerateSplit) when entry == exit.
std::pair<Polyline, Polyline> split_contour(const Polygon& poly, UtmPoint entry, UtmPoint exit);

// Andrew's monotone chain; counter-clockwise, collinear points dropped.
Polygon convex_hull(std::span<const UtmPoint> pts);

// Convex polygon containing every point of the Minkowski sum of the points
// with a disc of the given radius.
Polygon dilate_points(std::span<const UtmPoint> pts, double radius, int segments = 16);

// Index of the edge nearest to p.
std::size_t nearest_edge(UtmPoint p, const Polygon& poly);

// Outward unit normal of edge i of a counter-clockwise ring.
UtmPoint outward_normal(const Polygon& poly, std::size_t edge);

}  // namespace asvnav::geometry
