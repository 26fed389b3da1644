#include "colregs.hpp"

#include <algorithm>
#include <cmath>

namespace asvnav::colregs {

using geometry::heading_vector;
using geometry::kPi;

std::string_view to_string(Situation s) {
  switch (s) {
    case Situation::HeadOn: return "head_on";
    case Situation::Overtaking: return "overtaking";
    case Situation::CrossingFromRight: return "crossing_from_right";
    case Situation::CrossingFromLeft: return "crossing_from_left";
    case Situation::NotApplicable: return "not_applicable";
  }
  return "not_applicable";
}

bool is_in_front(const radar::OwnshipState& ownship, UtmPoint target, double activation_range) {
  const UtmPoint rel = target - ownship.position;
  const double range = geometry::norm(rel);
  if (range > activation_range) return false;
  if (range == 0.0) return true;
  const double bearing = geometry::wrap_pi(geometry::heading_of(rel) - ownship.heading);
  return std::fabs(bearing) <= kPi / 2.0;
}

bool is_in_front(const radar::OwnshipState& ownship, const tracking::Track& track, const ColregsParams& params) {
  return is_in_front(ownship, track.position(), params.activation_range);
}

Situation classify(double theta_a, double theta_b, const ColregsParams& params) {
  const double diff = geometry::wrap_pi(theta_a - theta_b);
  if (std::fabs(diff) <= params.overtaking_limit) return Situation::Overtaking;
  if (std::fabs(diff) > params.head_on_limit) return Situation::HeadOn;
  return diff > 0.0 ? Situation::CrossingFromRight : Situation::CrossingFromLeft;
}

Situation situation_for(const radar::OwnshipState& ownship, const tracking::Track& track, const ColregsParams& params) {
  if (!is_in_front(ownship, track, params)) return Situation::NotApplicable;
  const UtmPoint v = track.velocity();
  const double speed = geometry::norm(v);
  if (speed < params.min_target_speed) return Situation::NotApplicable;
  const Situation s = classify(ownship.heading, geometry::heading_of(v), params);
  if (s == Situation::Overtaking && !(ownship.speed > speed)) return Situation::NotApplicable;
  return s;
}

double pad_length(double target_speed, const ColregsParams& params) {
  return std::max(target_speed * params.lookahead, params.pad_min);
}

std::optional<Polygon> pad_region(const Polygon& dilated, double heading, double length, Situation situation) {
  if (situation != Situation::HeadOn && situation != Situation::Overtaking && situation != Situation::CrossingFromRight) {
    return std::nullopt;
  }
  const UtmPoint fwd = heading_vector(heading);
  const UtmPoint stbd = heading_vector(heading + kPi / 2.0);

  // Extent of the dilated polygon along the body axes.
  double f_lo = INFINITY, f_hi = -INFINITY, s_lo = INFINITY, s_hi = -INFINITY;
  for (const auto& p : dilated.ring) {
    const double f = geometry::dot(p, fwd), s = geometry::dot(p, stbd);
    f_lo = std::min(f_lo, f);
    f_hi = std::max(f_hi, f);
    s_lo = std::min(s_lo, s);
    s_hi = std::max(s_hi, s);
  }

  double a0 = f_lo, a1 = f_hi, b0 = s_lo, b1 = s_hi;
  switch (situation) {
    case Situation::CrossingFromRight:  // ahead of the bow
      a0 = f_hi;
      a1 = f_hi + length;
      break;
    case Situation::Overtaking:  // port side
      b0 = s_lo - length;
      b1 = s_lo;
      break;
    case Situation::HeadOn:  // starboard side, leaves the target to ownship's port
      b0 = s_hi;
      b1 = s_hi + length;
      break;
    default:
      break;
  }
  auto at = [&](double f, double s) { return f * fwd + s * stbd; };
  // Counter-clockwise for a right-handed (east, north) frame: starboard is
  // clockwise of forward.
  Polygon pad{{at(a0, b0), at(a0, b1), at(a1, b1), at(a1, b0)}};
  return geometry::make_ccw(std::move(pad));
}

Polygon dilated_target(const Polygon& target, const ColregsParams& params) {
  return geometry::dilate_points(target.ring, params.safety_margin);
}

std::optional<ProjectionPolygon> projection(const tracking::Track& track, Situation situation, const ColregsParams& params,
                                            double time) {
  const UtmPoint v = track.velocity();
  const Polygon dilated = dilated_target(track.latest_polygon, params);
  const auto pad = pad_region(dilated, geometry::heading_of(v), pad_length(geometry::norm(v), params), situation);
  if (!pad) return std::nullopt;

  std::vector<UtmPoint> pts = dilated.ring;
  pts.insert(pts.end(), pad->ring.begin(), pad->ring.end());
  ProjectionPolygon out;
  out.polygon = geometry::convex_hull(pts);
  out.source_track = track.id;
  out.situation = situation;
  out.created_at = time;
  return out;
}

void apply_projections(OccupancyGrid& grid, std::span<const ProjectionPolygon> projections) {
  for (const auto& p : projections) geometry::rasterize_polygon(p.polygon, grid);
}

}  // namespace asvnav::colregs
