#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "grid.hpp"
#include "radar.hpp"
#include "tracking.hpp"

namespace asvnav::colregs {

using geometry::OccupancyGrid;
using geometry::Polygon;
using geometry::UtmPoint;

enum class Situation { HeadOn, Overtaking, CrossingFromRight, CrossingFromLeft, NotApplicable };

std::string_view to_string(Situation s);

struct ColregsParams {
  double overtaking_limit = geometry::kPi / 4.0;   // |diff| up to this is overtaking
  double head_on_limit = 3.0 * geometry::kPi / 4.0;  // |diff| beyond this is head-on
  double safety_margin = 10.0;
  double lookahead = 30.0;  // s
  double pad_min = 20.0;    // m
  double activation_range = 200.0;
  double min_target_speed = 0.3;  // below this the target heading is meaningless
};

struct ProjectionPolygon {
  Polygon polygon;
  tracking::TrackId source_track = 0;
  Situation situation = Situation::NotApplicable;
  double created_at = 0.0;
};

// Target within +-90 deg of the ownship heading and inside activation_range.
bool is_in_front(const radar::OwnshipState& ownship, UtmPoint target, double activation_range);
bool is_in_front(const radar::OwnshipState& ownship, const tracking::Track& track, const ColregsParams& params);

// Sector of diff = theta_a - theta_b wrapped to (-pi, pi].
Situation classify(double theta_a, double theta_b, const ColregsParams& params = {});

// Full decision for one track: front check, target speed floor, sector, and
// the faster-ownship requirement for overtaking.
Situation situation_for(const radar::OwnshipState& ownship, const tracking::Track& track, const ColregsParams& params);

double pad_length(double target_speed, const ColregsParams& params);

// Directional pad next to a dilated target polygon, in the target body frame
// given by heading. Empty for CrossingFromLeft and NotApplicable.
std::optional<Polygon> pad_region(const Polygon& dilated, double heading, double length, Situation situation);

// Target vertices dilated by the safety margin.
Polygon dilated_target(const Polygon& target, const ColregsParams& params);

// Dilated target polygon extended by the situation's pad. nullopt when the
// situation imposes nothing.
std::optional<ProjectionPolygon> projection(const tracking::Track& track, Situation situation, const ColregsParams& params,
                                            double time);

void apply_projections(OccupancyGrid& grid, std::span<const ProjectionPolygon> projections);

}  // namespace asvnav::colregs
