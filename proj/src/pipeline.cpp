#include "pipeline.hpp"

#include <chrono>
#include <cmath>

namespace asvnav {

chart::Chart working_chart(const chart::Chart& chart, const Config& config) {
  if (config.cell_size > 0.0 && config.cell_size != chart.grid.cell_size) return chart::with_cell_size(chart, config.cell_size);
  return chart;
}

Pipeline::Pipeline(chart::Chart chart, const Config& config, planner::GlobalPath global_path)
    : chart_(working_chart(chart, config)),
      config_(config),
      global_path_(std::move(global_path)),
      planner_params_(config.planner),
      tracker_(config.tracker) {
  planner_params_.clearance =
      config.planner_clearance > 0.0 ? config.planner_clearance : std::sqrt(2.0) * chart_.grid.cell_size;
}

Snapshot Pipeline::process(const radar::RadarFrame& frame, const radar::OwnshipState& ownship) {
  const auto t0 = std::chrono::steady_clock::now();
  Snapshot snap;
  snap.frame_index = frames_++;
  snap.time = frame.start_time;
  snap.ownship = ownship;
  snap.radar_cells = frame.occupied;

  auto extraction = radar::extract_targets(frame, chart_, config_.radar);
  tracker_.step(extraction.candidates, frame.start_time);

  for (const auto& poly : chart_.land_polygons) snap.obstacles.add(poly);
  for (const auto& obj : extraction.land_objects) snap.obstacles.add(geometry::convex_hull(obj.ring));

  for (const auto& t : tracker_.tracks()) {
    TrackView view{t, t.hits >= config_.tracker.confirm_hits, colregs::Situation::NotApplicable};
    if (view.confirmed) {
      view.situation = colregs::situation_for(ownship, t, config_.colregs);
      if (auto p = colregs::projection(t, view.situation, config_.colregs, frame.start_time)) {
        snap.projections.push_back(std::move(*p));
      }
    }
    // The stand-on vessel holds course, so a give-way target does not bend the path.
    if (view.situation != colregs::Situation::CrossingFromLeft) {
      snap.obstacles.add(geometry::convex_hull(t.latest_polygon.ring));
    }
    snap.tracks.push_back(std::move(view));
  }
  for (const auto& p : snap.projections) snap.obstacles.add(p.polygon);

  snap.plan = planner::plan(ownship.position, global_path_, snap.obstacles, planner_params_);
  snap.candidates = std::move(extraction.candidates);
  snap.land_objects = std::move(extraction.land_objects);
  snap.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return snap;
}

}  // namespace asvnav
