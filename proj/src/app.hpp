#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>

#include "chart.hpp"
#include "config.hpp"
#include "logio.hpp"
#include "pipeline.hpp"
#include "planner.hpp"
#include "simulator.hpp"

namespace asvnav::app {

// One waypoint per line: `<easting> <northing> [label]`, '#' comments.
planner::GlobalPath parse_path(std::istream& in);
planner::GlobalPath load_path(const std::filesystem::path& path);
void write_path(std::ostream& out, const planner::GlobalPath& path);

// Per-frame output set under one directory:
//   waypoints/frame_NNNN.txt, tracks.csv, metrics.csv, svg/frame_NNNN.svg
class FrameWriter {
 public:
  FrameWriter(std::filesystem::path dir, bool svg);

  void write(const chart::Chart& chart, const Snapshot& snap);

 private:
  std::filesystem::path dir_;
  bool svg_;
  std::ofstream tracks_;
  std::ofstream metrics_;
};

struct ReplaySummary {
  std::size_t frames = 0;
  std::size_t dropped_rotations = 0;
};

// Throws Error(IncompleteRotation) when the log holds no full rotation and
// Error(LogParse) when it has no odometry.
ReplaySummary replay(const chart::Chart& chart, const logio::Log& log, const planner::GlobalPath& path,
                     const Config& config, const std::filesystem::path& out_dir, bool svg);

struct SimulateOptions {
  std::filesystem::path out_dir;
  bool svg = false;
  // Writes the synthesized scans and frame-start poses as a replayable log,
  // with the global path next to it (<record>.path).
  std::optional<std::filesystem::path> record;
};

sim::RunResult simulate(const sim::Scenario& scenario, const Config& config, const SimulateOptions& options);

// Preset name, or a scenario file path. Throws Error(InvalidArgument) listing
// the presets when neither resolves.
sim::Scenario resolve_scenario(const std::string& name_or_path);

void write_report(std::ostream& out, const sim::Scenario& scenario, const sim::RunResult& result);
void write_trajectory(std::ostream& out, const std::vector<sim::TrajectorySample>& samples);

}  // namespace asvnav::app
