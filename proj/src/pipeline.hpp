#pragma once

#include <vector>

#include "chart.hpp"
#include "colregs.hpp"
#include "config.hpp"
#include "planner.hpp"
#include "radar.hpp"
#include "tracking.hpp"

namespace asvnav {

struct TrackView {
  tracking::Track track;
  bool confirmed = false;
  colregs::Situation situation = colregs::Situation::NotApplicable;
};

// Everything one frame produced, for output and rendering.
struct Snapshot {
  std::size_t frame_index = 0;
  double time = 0.0;
  radar::OwnshipState ownship;
  geometry::CellSet radar_cells;
  std::vector<radar::TargetCandidate> candidates;
  std::vector<geometry::Polygon> land_objects;
  std::vector<TrackView> tracks;
  std::vector<colregs::ProjectionPolygon> projections;
  planner::ObstacleSet obstacles;
  planner::PlanPath plan;
  double wall_seconds = 0.0;
};

// Per-frame chain: extraction, tracking, COLREGs projection, planning.
class Pipeline {
 public:
  Pipeline(chart::Chart chart, const Config& config, planner::GlobalPath global_path);

  const chart::Chart& chart() const { return chart_; }
  const Config& config() const { return config_; }
  const planner::GlobalPath& global_path() const { return global_path_; }
  const planner::PlannerParams& planner_params() const { return planner_params_; }
  const tracking::Tracker& tracker() const { return tracker_; }

  // ownship is the pose to plan from.
  Snapshot process(const radar::RadarFrame& frame, const radar::OwnshipState& ownship);

 private:
  chart::Chart chart_;
  Config config_;
  planner::GlobalPath global_path_;
  planner::PlannerParams planner_params_;
  tracking::Tracker tracker_;
  std::size_t frames_ = 0;
};

// Grid the pipeline works on: the chart's own, or resampled per config.
chart::Chart working_chart(const chart::Chart& chart, const Config& config);

}  // namespace asvnav
