#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "colregs.hpp"
#include "planner.hpp"
#include "radar.hpp"
#include "tracking.hpp"

namespace asvnav {

struct SimParams {
  double dt = 0.1;                 // s, integration step
  double turn_rate = 20.0 * geometry::kPi / 180.0;  // rad/s
  double accel = 0.5;              // m/s^2, also the stop deceleration
  double waypoint_radius = 2.0;    // m
  double max_range = 512.0;        // m, synthetic radar
  double noise_p = 0.001;          // speckle probability per sample
  std::size_t lines_per_rotation = 2048;
};

struct Config {
  double cell_size = 0.0;  // 0 keeps the chart's own resolution
  radar::RadarParams radar;
  tracking::TrackerParams tracker;
  colregs::ColregsParams colregs;
  planner::PlannerParams planner;
  double planner_clearance = 0.0;  // 0 means one cell diagonal
  SimParams sim;

  // Throws Error(ConfigParse) naming the offending key or value.
  void validate() const;
};

// Flat `key = value` lines, '#' comments. Unknown keys are errors.
Config parse_config(std::istream& in);
Config load_config(const std::filesystem::path& path);

// One key, file syntax. Does not validate the whole config.
void set_config_value(Config& cfg, const std::string& key, std::string_view value, int line = 0);

// Every key with its current value, in a stable order.
std::vector<std::pair<std::string, std::string>> config_entries(const Config& cfg);
void write_config(std::ostream& out, const Config& cfg);

}  // namespace asvnav
