#include "simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "colregs.hpp"
#include "error.hpp"
#include "textio.hpp"

namespace asvnav::sim {

using geometry::heading_vector;
using geometry::kPi;
using geometry::kTwoPi;

namespace {

constexpr double kDeg = kPi / 180.0;

// Near-radar transmitter ringing: strong at the antenna, gone by hump_extent.
constexpr double kHumpPeak = 230.0;
constexpr double kHumpDecay = 3.0;   // m
constexpr double kHumpExtent = 10.0;  // m

std::string fmt(double v) { return textio::fixed(v, 2); }

}  // namespace

std::string_view to_string(EncounterKind k) {
  switch (k) {
    case EncounterKind::None: return "none";
    case EncounterKind::HeadOn: return "head_on";
    case EncounterKind::Overtaking: return "overtaking";
    case EncounterKind::CrossingFromRight: return "crossing_right";
    case EncounterKind::CrossingFromLeft: return "crossing_left";
    case EncounterKind::Custom: return "custom";
  }
  return "custom";
}

std::optional<EncounterKind> encounter_from_string(std::string_view s) {
  for (auto k : {EncounterKind::None, EncounterKind::HeadOn, EncounterKind::Overtaking, EncounterKind::CrossingFromRight,
                 EncounterKind::CrossingFromLeft, EncounterKind::Custom}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

TargetState initial_state(const TargetScript& script) {
  TargetState t;
  t.position = script.position;
  t.heading = geometry::wrap_two_pi(script.heading);
  t.speed = script.speed;
  t.hull_length = script.hull_length;
  t.hull_width = script.hull_width;
  t.waypoints = script.waypoints;
  return t;
}

void step_targets(std::vector<TargetState>& targets, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::NonPositiveDt, "time step must be positive");
  for (auto& t : targets) {
    if (t.waypoints.empty()) {
      t.position = t.position + (t.speed * dt) * heading_vector(t.heading);
      continue;
    }
    double budget = t.speed * dt;
    while (budget > 0.0 && t.next_waypoint < t.waypoints.size()) {
      const UtmPoint to = t.waypoints[t.next_waypoint] - t.position;
      const double d = geometry::norm(to);
      if (d <= budget) {
        t.position = t.waypoints[t.next_waypoint];
        budget -= d;
        ++t.next_waypoint;
      } else {
        t.heading = geometry::heading_of(to);
        t.position = t.position + budget * heading_vector(t.heading);
        budget = 0.0;
      }
    }
  }
}

Polygon target_hull(const TargetState& t) {
  const UtmPoint f = (t.hull_length / 2.0) * heading_vector(t.heading);
  const UtmPoint s = (t.hull_width / 2.0) * heading_vector(t.heading + kPi / 2.0);
  const UtmPoint c = t.position;
  return geometry::make_ccw(Polygon{{c + f + s, c + f - s, c - f - s, c - f + s}});
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

int Rng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

double Rng::normal() {
  // Box-Muller; 1 - u keeps the log argument positive.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

std::uint64_t frame_seed(std::uint64_t seed, std::uint64_t frame) {
  // splitmix64 finalizer over the pair.
  std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ULL * (frame + 1));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<radar::ScanLine> synth_frame(const radar::OwnshipState& ownship, const std::vector<TargetState>& targets,
                                         const chart::Chart& chart, std::uint64_t noise_seed, const SynthParams& params) {
  Rng rng(noise_seed);
  std::vector<Polygon> bodies = chart.land_polygons;
  for (const auto& t : targets) bodies.push_back(target_hull(t));
  std::vector<geometry::BoundingBox> boxes;
  for (const auto& b : bodies) boxes.push_back(geometry::bounds(b));

  const std::size_t n = radar::kSamplesPerLine;
  const std::size_t count = params.lines;
  const double bin = params.max_range / static_cast<double>(n);
  std::vector<radar::ScanLine> lines(count);
  for (std::size_t i = 0; i < count; ++i) {
    radar::ScanLine& line = lines[i];
    line.bearing = kTwoPi * static_cast<double>(i) / static_cast<double>(count);
    line.timestamp = ownship.timestamp + params.rotation_period * static_cast<double>(i) / static_cast<double>(count);
    line.max_range = params.max_range;

    const UtmPoint a = ownship.position;
    const UtmPoint b = a + params.max_range * heading_vector(ownship.heading + line.bearing);
    const geometry::BoundingBox ray{std::min(a.easting, b.easting), std::min(a.northing, b.northing),
                                    std::max(a.easting, b.easting), std::max(a.northing, b.northing)};
    double first = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < bodies.size(); ++k) {
      if (!ray.overlaps(boxes[k])) continue;
      const auto hits = geometry::segment_polygon_intersections(a, b, bodies[k]);
      if (!hits.empty()) first = std::min(first, hits.front().t * params.max_range);
    }

    for (std::size_t k = 0; k < n; ++k) {
      const double r = line.range_of(k);
      if (r > kHumpExtent) break;
      line.samples[k] = static_cast<std::uint8_t>(std::lround(kHumpPeak * std::exp(-r / kHumpDecay)));
    }
    if (std::isfinite(first)) {
      const auto k = static_cast<long>(first / bin);
      for (long j = k - 1; j <= k + 1; ++j) {
        if (j >= 0 && j < static_cast<long>(n)) line.samples[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(rng.uniform_int(180, 255));
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (rng.uniform() < params.noise_p) {
        const auto v = static_cast<std::uint8_t>(rng.uniform_int(1, 60));
        line.samples[k] = std::max(line.samples[k], v);
      }
    }
  }
  return lines;
}

double cross_track(UtmPoint p, const geometry::Polyline& path) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < path.points.size(); ++i) {
    best = std::min(best, geometry::distance_to_segment(p, path.points[i - 1], path.points[i]));
  }
  return best;
}

ComplianceReport compliance(const std::vector<TrajectorySample>& samples, EncounterKind kind,
                            const planner::GlobalPath& global_path, const colregs::ColregsParams& params) {
  ComplianceReport r;
  r.kind = kind;
  for (const auto& s : samples) r.max_cross_track = std::max(r.max_cross_track, cross_track(s.ownship.position, global_path.waypoints));

  const bool has_target = !samples.empty() && !samples.front().targets.empty();
  if (has_target) {
    r.cpa_distance = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
      const TargetState& t = s.targets.front();
      const double d = geometry::distance(s.ownship.position, t.position);
      if (d < r.cpa_distance) {
        r.cpa_distance = d;
        r.cpa_time = s.t;
        const double side = geometry::cross(heading_vector(s.ownship.heading), t.position - s.ownship.position);
        r.pass_side = side > 0.0 ? PassSide::Port : PassSide::Starboard;
      }
      if (d <= params.activation_range) {
        r.stand_on_deviation = std::max(r.stand_on_deviation, cross_track(s.ownship.position, global_path.waypoints));
      }
      if (kind == EncounterKind::CrossingFromRight) {
        const Polygon dilated = colregs::dilated_target(target_hull(t), params);
        const auto pad = colregs::pad_region(dilated, t.heading, colregs::pad_length(t.speed, params),
                                             colregs::Situation::CrossingFromRight);
        if (pad && geometry::point_in_polygon(s.ownship.position, *pad)) r.entered_ahead_pad = true;
      }
    }
  }

  const double margin = params.safety_margin;
  const std::string cpa = "cpa " + fmt(r.cpa_distance) + " m";
  const std::string side = r.pass_side == PassSide::Port ? "port" : "starboard";
  switch (kind) {
    case EncounterKind::None:
      r.pass = r.max_cross_track < 2.0;
      r.reason = "max cross-track " + fmt(r.max_cross_track) + " m (limit 2)";
      break;
    case EncounterKind::HeadOn:
    case EncounterKind::Overtaking:
      r.pass = has_target && r.pass_side == PassSide::Port && r.cpa_distance >= margin;
      r.reason = cpa + ", target passed to " + side;
      break;
    case EncounterKind::CrossingFromRight:
      r.pass = has_target && !r.entered_ahead_pad && r.cpa_distance >= margin;
      r.reason = cpa + (r.entered_ahead_pad ? ", entered the ahead pad" : ", stayed astern");
      break;
    case EncounterKind::CrossingFromLeft:
      r.pass = has_target && r.stand_on_deviation < 5.0;
      r.reason = "stand-on deviation " + fmt(r.stand_on_deviation) + " m (limit 5), " + cpa;
      break;
    case EncounterKind::Custom:
      r.pass = !has_target || r.cpa_distance >= margin;
      r.reason = has_target ? cpa : "no targets";
      break;
  }
  return r;
}

namespace {

struct Helm {
  std::vector<UtmPoint> waypoints;  // excludes the current position
  std::size_t next = 0;
  bool stop = false;
};

void steer(radar::OwnshipState& own, Helm& helm, double cruise, const SimParams& p) {
  while (helm.next < helm.waypoints.size() && geometry::distance(own.position, helm.waypoints[helm.next]) < p.waypoint_radius) {
    ++helm.next;
  }
  if (helm.stop || helm.next >= helm.waypoints.size()) {
    own.speed = std::max(0.0, own.speed - p.accel * p.dt);
  } else {
    const double want = geometry::heading_of(helm.waypoints[helm.next] - own.position);
    const double err = geometry::wrap_pi(want - own.heading);
    const double cap = p.turn_rate * p.dt;
    own.heading = geometry::wrap_two_pi(own.heading + std::clamp(err, -cap, cap));
    own.speed = std::min(cruise, own.speed + p.accel * p.dt);
  }
  own.position = own.position + (own.speed * p.dt) * heading_vector(own.heading);
}

}  // namespace

RunResult run(const Scenario& scenario, const Config& config, const FrameObserver& observer) {
  if (!(scenario.duration > 0.0)) throw Error(ErrorCode::InvalidArgument, "scenario duration must be positive");
  Pipeline pipeline(scenario.chart, config, scenario.global_path);
  const auto& grid = pipeline.chart().grid;
  const auto extent = grid.extent();

  radar::OwnshipState own = scenario.ownship_start;
  own.heading = geometry::wrap_two_pi(own.heading);
  const double cruise = scenario.ownship_start.speed;
  std::vector<TargetState> targets;
  for (const auto& s : scenario.targets) targets.push_back(initial_state(s));

  SynthParams synth;
  synth.max_range = config.sim.max_range;
  synth.noise_p = config.sim.noise_p;
  synth.lines = config.sim.lines_per_rotation;
  const int steps = std::max(1, static_cast<int>(std::lround(synth.rotation_period / config.sim.dt)));

  RunResult result;
  double t = 0.0;
  result.samples.push_back({t, own, targets});
  for (std::uint64_t f = 0; t < scenario.duration - 1e-9; ++f) {
    own.timestamp = t;
    const auto lines = synth_frame(own, targets, pipeline.chart(), frame_seed(scenario.seed, f), synth);
    const radar::OwnshipTrack track({own});
    const auto frame = radar::assemble_frame(lines, track, grid, config.radar);
    const Snapshot snap = pipeline.process(frame, own);
    if (observer) observer(lines, own, snap);
    ++result.frames;

    Helm helm;
    helm.stop = snap.plan.status == planner::PlanStatus::Stop;
    helm.waypoints.assign(snap.plan.waypoints.points.begin() + (snap.plan.waypoints.points.empty() ? 0 : 1),
                          snap.plan.waypoints.points.end());
    for (int k = 0; k < steps; ++k) {
      steer(own, helm, cruise, config.sim);
      step_targets(targets, config.sim.dt);
      t = static_cast<double>(f) * synth.rotation_period + (k + 1) * config.sim.dt;
      own.timestamp = t;
      if (!extent.contains(own.position)) {
        throw Error(ErrorCode::ScenarioDiverged, "ownship left the chart at t = " + fmt(t) + " s");
      }
      result.samples.push_back({t, own, targets});
    }
    t = static_cast<double>(f + 1) * synth.rotation_period;
  }
  result.report = compliance(result.samples, scenario.kind, scenario.global_path, config.colregs);
  return result;
}

chart::Chart straight_river() {
  chart::Chart c;
  c.grid = {{0.0, 0.0}, 1.0, 600, 1200};
  c.land_polygons.push_back(Polygon{{{0.0, 0.0}, {150.0, 0.0}, {150.0, 1200.0}, {0.0, 1200.0}}});
  c.land_polygons.push_back(Polygon{{{450.0, 0.0}, {600.0, 0.0}, {600.0, 1200.0}, {450.0, 1200.0}}});
  return c;
}

namespace {

Scenario river_base(std::string name, EncounterKind kind, double duration) {
  Scenario s;
  s.name = std::move(name);
  s.kind = kind;
  s.chart = straight_river();
  s.ownship_start.position = {300.0, 100.0};
  s.ownship_start.heading = 0.0;
  s.ownship_start.speed = 3.0;
  s.global_path.waypoints.points = {{300.0, 100.0}, {300.0, 1100.0}};
  s.duration = duration;
  s.seed = 7;
  return s;
}

TargetScript boat(double e, double n, double heading_deg, double speed) {
  TargetScript t;
  t.position = {e, n};
  t.heading = heading_deg * kDeg;
  t.speed = speed;
  return t;
}

}  // namespace

std::vector<std::string> preset_names() { return {"crossing_left", "crossing_right", "free_transit", "head_on", "overtaking"}; }

std::optional<Scenario> preset(std::string_view name) {
  if (name == "head_on") {
    Scenario s = river_base("head_on", EncounterKind::HeadOn, 100.0);
    s.targets.push_back(boat(300.0, 400.0, 180.0, 2.0));
    return s;
  }
  if (name == "overtaking") {
    Scenario s = river_base("overtaking", EncounterKind::Overtaking, 120.0);
    s.targets.push_back(boat(300.0, 160.0, 0.0, 1.5));
    return s;
  }
  if (name == "crossing_right") {
    Scenario s = river_base("crossing_right", EncounterKind::CrossingFromRight, 80.0);
    s.targets.push_back(boat(355.0, 145.0, 270.0, 4.0));
    return s;
  }
  if (name == "crossing_left") {
    Scenario s = river_base("crossing_left", EncounterKind::CrossingFromLeft, 80.0);
    s.targets.push_back(boat(220.0, 250.0, 90.0, 2.5));
    return s;
  }
  if (name == "free_transit") return river_base("free_transit", EncounterKind::None, 60.0);
  return std::nullopt;
}

Scenario parse_scenario(std::istream& in, const std::filesystem::path& base_dir) {
  Scenario s = river_base("custom", EncounterKind::Custom, 60.0);
  s.global_path.waypoints.points.clear();
  bool have_ownship = false;
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& why) { throw Error(ErrorCode::ScenarioParse, why, line_no); };
  auto num = [&](const std::string& tok) {
    double v = 0.0;
    if (!textio::parse_double(tok, v)) fail("malformed number '" + tok + "'");
    return v;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const auto body = textio::trim(textio::strip_comment(raw));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq != std::string_view::npos) {
      const std::string key(textio::trim(body.substr(0, eq)));
      const std::string value(textio::trim(body.substr(eq + 1)));
      if (key == "seed") {
        long long v = 0;
        if (!textio::parse_int(value, v) || v < 0) fail("seed must be a nonnegative integer");
        s.seed = static_cast<std::uint64_t>(v);
      } else if (key == "duration") {
        s.duration = num(value);
        if (!(s.duration > 0.0)) fail("duration must be positive");
      } else if (key == "name") {
        s.name = value;
      } else if (key == "kind") {
        const auto k = encounter_from_string(value);
        if (!k) fail("unknown kind '" + value + "'");
        s.kind = *k;
      } else if (key == "chart") {
        if (value == "straight_river") {
          s.chart = straight_river();
        } else {
          std::filesystem::path p(value);
          if (p.is_relative()) p = base_dir / p;
          s.chart = chart::load_chart(p);
        }
      } else if (key == "ownship") {
        const auto tok = textio::split_ws(value);
        if (tok.size() != 4) fail("ownship expects '<e> <n> <heading_deg> <speed>'");
        s.ownship_start.position = {num(tok[0]), num(tok[1])};
        s.ownship_start.heading = geometry::wrap_two_pi(num(tok[2]) * kDeg);
        s.ownship_start.speed = num(tok[3]);
        if (s.ownship_start.speed < 0.0) fail("ownship speed must not be negative");
        have_ownship = true;
      } else {
        fail("unknown key '" + key + "'");
      }
      continue;
    }
    const auto tok = textio::split_ws(body);
    if (tok[0] == "WAYPOINT") {
      if (tok.size() != 3) fail("WAYPOINT expects 2 fields");
      s.global_path.waypoints.points.push_back({num(tok[1]), num(tok[2])});
    } else if (tok[0] == "TARGET") {
      if (tok.size() != 7) fail("TARGET expects 6 fields");
      TargetScript t = boat(num(tok[1]), num(tok[2]), num(tok[3]), num(tok[4]));
      t.hull_length = num(tok[5]);
      t.hull_width = num(tok[6]);
      if (t.speed < 0.0) fail("target speed must not be negative");
      if (!(t.hull_length > 0.0) || !(t.hull_width > 0.0)) fail("hull dimensions must be positive");
      s.targets.push_back(t);
    } else {
      fail("unknown record '" + tok[0] + "'");
    }
  }

  line_no = 0;
  if (!have_ownship) s.ownship_start = river_base("", EncounterKind::None, 1.0).ownship_start;
  auto& w = s.global_path.waypoints.points;
  if (w.empty()) {
    w.push_back(s.ownship_start.position);
    w.push_back(s.ownship_start.position + 1000.0 * heading_vector(s.ownship_start.heading));
  }
  if (w.size() < 2) fail("global path needs at least 2 waypoints");
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (geometry::distance(w[i - 1], w[i]) == 0.0) fail("consecutive waypoints must differ");
  }
  const auto extent = s.chart.grid.extent();
  if (!extent.contains(s.ownship_start.position)) fail("ownship starts outside the chart");
  for (const auto& t : s.targets) {
    if (!extent.contains(t.position)) fail("target starts outside the chart");
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open scenario " + path.string());
  Scenario s = parse_scenario(in, path.parent_path());
  if (s.name == "custom") s.name = path.stem().string();
  return s;
}

}  // namespace asvnav::sim
