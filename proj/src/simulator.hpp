#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "chart.hpp"
#include "config.hpp"
#include "pipeline.hpp"
#include "planner.hpp"
#include "radar.hpp"

namespace asvnav::sim {

using geometry::Polygon;
using geometry::UtmPoint;

enum class EncounterKind { None, HeadOn, Overtaking, CrossingFromRight, CrossingFromLeft, Custom };

std::string_view to_string(EncounterKind k);
std::optional<EncounterKind> encounter_from_string(std::string_view s);

struct TargetScript {
  UtmPoint position;
  double heading = 0.0;  // radians
  double speed = 0.0;
  double hull_length = 10.0;
  double hull_width = 3.0;
  std::vector<UtmPoint> waypoints;  // empty: constant velocity
};

struct TargetState {
  UtmPoint position;
  double heading = 0.0;
  double speed = 0.0;
  double hull_length = 10.0;
  double hull_width = 3.0;
  std::vector<UtmPoint> waypoints;
  std::size_t next_waypoint = 0;
};

struct Scenario {
  std::string name;
  EncounterKind kind = EncounterKind::None;
  chart::Chart chart;
  radar::OwnshipState ownship_start;
  planner::GlobalPath global_path;
  std::vector<TargetScript> targets;
  double duration = 60.0;
  std::uint64_t seed = 1;
};

TargetState initial_state(const TargetScript& script);

// Constant velocity, or waypoint following that holds at the last waypoint.
void step_targets(std::vector<TargetState>& targets, double dt);

// Hull rectangle centered on the target, long axis along its heading.
Polygon target_hull(const TargetState& t);

// mt19937_64 with fixed mappings, so streams do not depend on the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  double uniform();                 // [0, 1)
  int uniform_int(int lo, int hi);  // inclusive
  double normal();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t frame_seed(std::uint64_t seed, std::uint64_t frame);

struct SynthParams {
  std::size_t lines = 2048;  // per rotation
  double max_range = 512.0;
  double noise_p = 0.001;
  double rotation_period = radar::kRotationPeriod;
};

// One rotation of evenly spaced scanlines starting at bearing 0, pose frozen
// at the start.
std::vector<radar::ScanLine> synth_frame(const radar::OwnshipState& ownship, const std::vector<TargetState>& targets,
                                         const chart::Chart& chart, std::uint64_t noise_seed, const SynthParams& params);

struct TrajectorySample {
  double t = 0.0;
  radar::OwnshipState ownship;
  std::vector<TargetState> targets;
};

enum class PassSide { Port, Starboard };

struct ComplianceReport {
  EncounterKind kind = EncounterKind::None;
  double cpa_distance = 0.0;
  double cpa_time = 0.0;
  PassSide pass_side = PassSide::Port;
  double stand_on_deviation = 0.0;
  double max_cross_track = 0.0;
  bool entered_ahead_pad = false;
  bool pass = false;
  std::string reason;
};

double cross_track(UtmPoint p, const geometry::Polyline& path);

ComplianceReport compliance(const std::vector<TrajectorySample>& samples, EncounterKind kind,
                            const planner::GlobalPath& global_path, const colregs::ColregsParams& params);

// Called once per frame with the synthesized lines, the pose they were
// generated from, and the pipeline output.
using FrameObserver =
    std::function<void(const std::vector<radar::ScanLine>&, const radar::OwnshipState&, const Snapshot&)>;

struct RunResult {
  ComplianceReport report;
  std::vector<TrajectorySample> samples;
  std::size_t frames = 0;
};

// Throws Error(ScenarioDiverged) if the ownship leaves the chart.
RunResult run(const Scenario& scenario, const Config& config, const FrameObserver& observer = {});

// 600 m x 1200 m river with 150 m banks on both sides, 1 m cells.
chart::Chart straight_river();

std::vector<std::string> preset_names();
std::optional<Scenario> preset(std::string_view name);

// key = value header (seed, duration, chart, ownship, kind, name), then
// WAYPOINT <e> <n> and TARGET <e> <n> <heading_deg> <speed> <length> <width>
// lines. A relative chart path resolves against base_dir; "straight_river"
// names the built-in chart. Throws Error(ScenarioParse).
Scenario parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace asvnav::sim
