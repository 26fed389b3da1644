#include <sstream>

#include "doctest.h"
#include "error.hpp"
#include "simulator.hpp"

using namespace asvnav;
using namespace asvnav::sim;
using geometry::kPi;
using geometry::kTwoPi;

namespace {

TargetState boat(double e, double n, double heading, double speed) {
  TargetScript s;
  s.position = {e, n};
  s.heading = heading;
  s.speed = speed;
  return initial_state(s);
}

chart::Chart open_water() {
  chart::Chart c;
  c.grid = {{-600.0, -600.0}, 1.0, 1200, 1200};
  return c;
}

// Range along a ray from the origin at bearing b (north = 0, clockwise) to an
// axis-aligned box, by slab intersection. Infinity on a miss.
double ray_box(double b, double e0, double n0, double e1, double n1) {
  const double de = std::sin(b), dn = std::cos(b);
  double lo = 0.0, hi = 1e300;
  auto slab = [&](double d, double a0, double a1) {
    if (std::fabs(d) < 1e-15) return a0 <= 0.0 && 0.0 <= a1;
    double t0 = a0 / d, t1 = a1 / d;
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
    return lo <= hi;
  };
  if (!slab(de, e0, e1) || !slab(dn, n0, n1)) return std::numeric_limits<double>::infinity();
  return lo;
}

std::vector<TrajectorySample> straight_run(radar::OwnshipState own, TargetState t, int steps, double dt) {
  std::vector<TrajectorySample> out;
  std::vector<TargetState> ts{t};
  for (int k = 0; k <= steps; ++k) {
    out.push_back({k * dt, own, ts});
    own.position = own.position + (own.speed * dt) * geometry::heading_vector(own.heading);
    step_targets(ts, dt);
  }
  return out;
}

}  // namespace

TEST_CASE("step targets") {
  SUBCASE("constant velocity") {
    std::vector<TargetState> ts{boat(0, 0, kPi / 2, 2.0)};
    step_targets(ts, 1.0);
    CHECK(ts[0].position.easting == doctest::Approx(2.0));
    CHECK(ts[0].position.northing == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("zero speed stays put") {
    std::vector<TargetState> ts{boat(5, 7, 1.0, 0.0)};
    for (int k = 0; k < 10; ++k) step_targets(ts, 0.5);
    CHECK(ts[0].position == geometry::UtmPoint{5, 7});
  }
  SUBCASE("waypoints are followed and the last one held") {
    TargetScript s;
    s.position = {0, 0};
    s.speed = 2.0;
    s.waypoints = {{0, 3}, {4, 3}};
    std::vector<TargetState> ts{initial_state(s)};
    step_targets(ts, 2.0);
    CHECK(ts[0].position.easting == doctest::Approx(1.0));
    CHECK(ts[0].position.northing == doctest::Approx(3.0));
    for (int k = 0; k < 20; ++k) step_targets(ts, 1.0);
    CHECK(ts[0].position == geometry::UtmPoint{4, 3});
  }
  SUBCASE("non-positive step") {
    std::vector<TargetState> ts{boat(0, 0, 0, 1)};
    CHECK_THROWS_AS(step_targets(ts, 0.0), Error);
    CHECK_THROWS_AS(step_targets(ts, -1.0), Error);
  }
}

TEST_CASE("synthetic frame against a ray-cast oracle") {
  // 10 x 3 hull heading east, 100 m due north.
  const auto target = boat(0, 100, kPi / 2, 0.0);
  const radar::OwnshipState own{{0, 0}, 0.0, 0.0, 0.0};
  SynthParams params;
  const auto lines = synth_frame(own, {target}, open_water(), 5, params);
  REQUIRE(lines.size() == params.lines);
  CHECK(lines.front().bearing == 0.0);
  CHECK(lines.back().bearing < kTwoPi);
  std::size_t hot_lines = 0;
  for (const auto& l : lines) {
    const double r = ray_box(l.bearing, -5.0, 98.5, 5.0, 101.5);
    const auto bin = static_cast<long>(std::floor(r));
    bool any = false;
    for (std::size_t k = 0; k < radar::kSamplesPerLine; ++k) {
      if (l.range_of(k) <= 10.0) continue;  // transmitter hump
      const bool hot = l.samples[k] >= 180;
      const bool expected = std::isfinite(r) && std::labs(static_cast<long>(k) - bin) <= 1;
      CHECK(hot == expected);
      any = any || hot;
    }
    if (any) {
      ++hot_lines;
      CHECK(std::min(l.bearing, kTwoPi - l.bearing) < 0.06);
    }
  }
  CHECK(hot_lines > 0);
}

TEST_CASE("empty water gives only the hump and speckle") {
  const radar::OwnshipState own{{0, 0}, 1.0, 0.0, 0.0};
  const radar::RadarParams rp;
  const auto lines = synth_frame(own, {}, open_water(), 9, {});
  std::size_t speckle = 0;
  for (const auto& l : lines) {
    for (std::size_t k = 0; k < radar::kSamplesPerLine; ++k) {
      if (l.range_of(k) <= 10.0) {
        if (k > 0) CHECK(l.samples[k] <= std::max<int>(l.samples[k - 1], 60));
        continue;
      }
      CHECK(l.samples[k] <= 60);
      speckle += l.samples[k] > 0;
    }
    // The hump sits inside the dead-zone window and is removed there.
    const auto f = radar::filter_dead_zone(l, rp.max_dead_zone);
    for (std::size_t k = 0; k < radar::kSamplesPerLine && l.range_of(k) <= 10.0; ++k) {
      CHECK(f.samples[k] == 0);
    }
  }
  CHECK(speckle > 0);
  // Speckle above the threshold survives as isolated cells, never as targets.
  const auto frame = radar::assemble_frame(lines, radar::OwnshipTrack({own}), open_water().grid, rp);
  CHECK(frame.occupied.size() <= speckle);
  CHECK(radar::extract_targets(frame, open_water(), rp).candidates.empty());
}

TEST_CASE("synthetic frames are a pure function of state and seed") {
  const radar::OwnshipState own{{300, 100}, 0.3, 2.0, 4.0};
  const std::vector<TargetState> ts{boat(300, 300, kPi, 2.0), boat(200, 220, 1.0, 1.0)};
  const auto c = straight_river();
  const auto a = synth_frame(own, ts, c, 17, {});
  const auto b = synth_frame(own, ts, c, 17, {});
  const auto d = synth_frame(own, ts, c, 18, {});
  REQUIRE(a.size() == b.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].samples == b[i].samples);
    CHECK(a[i].timestamp == b[i].timestamp);
    differs = differs || a[i].samples != d[i].samples;
  }
  CHECK(differs);
}

TEST_CASE("compliance geometry") {
  const colregs::ColregsParams params;
  planner::GlobalPath path;
  path.waypoints.points = {{0, 0}, {0, 1000}};
  SUBCASE("target off the port bow at closest approach") {
    const radar::OwnshipState own{{0, 0}, 0.0, 2.0, 0.0};
    const auto r = compliance(straight_run(own, boat(-20, 100, 0.0, 0.0), 100, 1.0), EncounterKind::Custom, path, params);
    CHECK(r.pass_side == PassSide::Port);
    CHECK(r.cpa_distance == doctest::Approx(20.0));
    CHECK(r.cpa_time == doctest::Approx(50.0));
  }
  SUBCASE("target to starboard") {
    const radar::OwnshipState own{{0, 0}, 0.0, 2.0, 0.0};
    const auto r = compliance(straight_run(own, boat(30, 100, 0.0, 0.0), 100, 1.0), EncounterKind::Custom, path, params);
    CHECK(r.pass_side == PassSide::Starboard);
  }
  SUBCASE("parallel tracks keep their lateral separation") {
    const radar::OwnshipState own{{0, 0}, 0.0, 3.0, 0.0};
    const auto r = compliance(straight_run(own, boat(25, 0, 0.0, 3.0), 60, 0.5), EncounterKind::Custom, path, params);
    CHECK(r.cpa_distance == doctest::Approx(25.0));
    CHECK(r.stand_on_deviation == 0.0);
    CHECK(r.pass);
  }
  SUBCASE("cross-track deviation") {
    const radar::OwnshipState own{{3, 0}, 0.0, 1.0, 0.0};
    const auto r = compliance(straight_run(own, boat(-100, 500, 0, 0), 10, 1.0), EncounterKind::None, path, params);
    CHECK(r.max_cross_track == doctest::Approx(3.0));
    CHECK_FALSE(r.pass);
  }
}

TEST_CASE("free transit follows the global path") {
  const auto s = *preset("free_transit");
  const auto res = run(s, Config{});
  CHECK(res.report.pass);
  CHECK(res.report.max_cross_track < 2.0);
}

TEST_CASE("ownship trajectory is continuous") {
  const auto s = *preset("head_on");
  const Config cfg;
  const auto res = run(s, cfg);
  const auto per_frame = static_cast<std::size_t>(std::lround(radar::kRotationPeriod / cfg.sim.dt));
  for (std::size_t i = per_frame; i < res.samples.size(); i += per_frame) {
    const double d = geometry::distance(res.samples[i].ownship.position, res.samples[i - per_frame].ownship.position);
    CHECK(d <= s.ownship_start.speed * radar::kRotationPeriod + 1e-6);
  }
}

TEST_CASE("velocity estimate converges with zero noise") {
  Scenario s = *preset("free_transit");
  s.ownship_start.speed = 0.0;
  s.duration = 10 * radar::kRotationPeriod;
  s.targets.push_back({{250, 200}, kPi / 2, 2.0, 10.0, 3.0, {}});
  Config cfg;
  cfg.sim.noise_p = 0.0;
  std::vector<Snapshot> snaps;
  run(s, cfg, [&](const auto&, const auto&, const Snapshot& snap) { snaps.push_back(snap); });
  REQUIRE(snaps.size() == 10);
  REQUIRE(snaps.back().tracks.size() == 1);
  const auto v = snaps.back().tracks[0].track.velocity();
  CHECK(geometry::distance(v, {2.0, 0.0}) <= 0.3);
  for (const auto& snap : snaps) CHECK(snap.tracks.size() <= 1);
}

TEST_CASE("verdicts are deterministic for a seed") {
  const auto s = *preset("crossing_right");
  const auto a = run(s, Config{});
  const auto b = run(s, Config{});
  CHECK(a.report.pass == b.report.pass);
  CHECK(a.report.cpa_distance == b.report.cpa_distance);
  CHECK(a.report.reason == b.report.reason);
  REQUIRE(a.samples.size() == b.samples.size());
  CHECK(a.samples.back().ownship.position == b.samples.back().ownship.position);
}

TEST_CASE("scenario leaving the chart diverges") {
  Scenario s = *preset("free_transit");
  s.global_path.waypoints.points = {{300, 100}, {300, 5000}};
  s.duration = 500;
  s.ownship_start.speed = 10.0;
  try {
    run(s, Config{});
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ScenarioDiverged);
  }
}

TEST_CASE("scenario files") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in);
  };
  SUBCASE("header and records") {
    const auto s = parse(
        "# encounter\nname = demo\nkind = head_on\nseed = 4\nduration = 30\nchart = straight_river\n"
        "ownship = 300 100 0 3\nWAYPOINT 300 100\nWAYPOINT 300 900\nTARGET 300 400 180 2 12 4\n");
    CHECK(s.name == "demo");
    CHECK(s.kind == EncounterKind::HeadOn);
    CHECK(s.seed == 4);
    CHECK(s.duration == 30.0);
    REQUIRE(s.targets.size() == 1);
    CHECK(s.targets[0].heading == doctest::Approx(kPi));
    CHECK(s.targets[0].hull_length == 12.0);
    CHECK(s.global_path.waypoints.points.size() == 2);
  }
  SUBCASE("rejections carry the line") {
    const std::vector<std::pair<std::string, int>> bad{
        {"duration = 0\n", 1},
        {"seed = 2\nTARGET 300 400 180 -1 10 3\n", 2},
        {"TARGET 300 400 180 1 0 3\n", 1},
        {"TARGET 300 400 180 1 10\n", 1},
        {"colour = red\n", 1},
        {"kind = sideways\n", 1},
        {"FERRY 1 2\n", 1},
    };
    for (const auto& [text, line] : bad) {
      try {
        parse(text);
        FAIL("accepted: " << text);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ScenarioParse);
        CHECK(e.line() == line);
      }
    }
  }
  SUBCASE("targets must start on the chart") {
    CHECK_THROWS_AS(parse("TARGET 300 5000 0 1 10 3\n"), Error);
  }
}
