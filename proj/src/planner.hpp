#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geometry.hpp"

namespace asvnav::planner {

using geometry::Polygon;
using geometry::Polyline;
using geometry::UtmPoint;

struct GlobalPath {
  Polyline waypoints;
  std::vector<std::string> labels;  // empty or one per waypoint
};

enum class PlanStatus { Ok, Escaped, Stop };

std::string_view to_string(PlanStatus s);

struct PlanPath {
  Polyline waypoints;
  PlanStatus status = PlanStatus::Ok;
};

// Counter-clockwise obstacle rings for one planning call.
struct ObstacleSet {
  std::vector<Polygon> polygons;

  void add(Polygon poly);
};

struct PlannerParams {
  double clearance = 1.4142135623730951;  // one cell diagonal at 1 m
  double search_radius = 150.0;
  int max_iterations = 64;
  int escape_directions = 64;
  double rejoin_lookahead = 25.0;  // m along the global path past the nearest point
};

// Global path onward from the point on it nearest to start, advanced by
// lookahead, prefixed with start.
Polyline clip_path(UtmPoint start, const Polyline& global, double lookahead = 0.0);

// True iff segment ab passes through the interior of some obstacle.
bool segment_blocked(UtmPoint a, UtmPoint b, const ObstacleSet& obstacles);

// Nearest point outside every obstacle, clearance beyond the boundary.
// Throws Error(NoSafePoint) if none lies within search_radius.
UtmPoint escape(UtmPoint start, const ObstacleSet& obstacles, const PlannerParams& params);

// Boundary polyline moved outward by the clearance; poly is counter-clockwise.
Polyline offset_boundary(const Polyline& boundary, const Polygon& poly, double clearance);

// Replaces the stretch between the first entry into poly and the last exit
// from it with the shorter boundary half, offset outward. Returns the path
// unchanged when it does not pass through the interior.
Polyline detour(const Polyline& path, const Polygon& poly, const PlannerParams& params);

// Anchored farthest-visible shortcutting.
Polyline refine(const Polyline& path, const ObstacleSet& obstacles);

PlanPath plan(UtmPoint start, const GlobalPath& global_path, const ObstacleSet& obstacles, const PlannerParams& params);

}  // namespace asvnav::planner
