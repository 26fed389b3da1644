#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "app.hpp"
#include "config.hpp"
#include "doctest.h"
#include "error.hpp"
#include "logio.hpp"
#include "svg.hpp"

using namespace asvnav;
namespace fs = std::filesystem;

namespace {

std::string scan_record(double t, double bearing, int fill = 0) {
  std::ostringstream s;
  s << "SCAN," << t << ',' << bearing;
  for (int k = 0; k < 512; ++k) s << ',' << fill;
  return s.str();
}

template <class F>
Error expect_error(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  FAIL("no error thrown");
  return Error(ErrorCode::InvalidArgument, "");
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("asvnav_test_io_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("log parsing") {
  SUBCASE("round trip") {
    radar::ScanLine line;
    line.timestamp = 0.125;
    line.bearing = 1.0 / 3.0;
    for (std::size_t k = 0; k < 512; ++k) line.samples[k] = static_cast<std::uint8_t>(k % 256);
    std::ostringstream out;
    logio::write_odom(out, {{10.5, -3.25}, 0.7, 2.0, 0.1});
    logio::write_scan(out, line);
    std::istringstream in(out.str());
    const auto log = logio::parse_log(in, 300.0);
    REQUIRE(log.scans.size() == 1);
    REQUIRE(log.odometry.size() == 1);
    CHECK(log.scans[0].bearing == line.bearing);
    CHECK(log.scans[0].timestamp == line.timestamp);
    CHECK(log.scans[0].samples == line.samples);
    CHECK(log.scans[0].max_range == 300.0);
    CHECK(log.odometry[0].position == geometry::UtmPoint{10.5, -3.25});
    CHECK(log.odometry[0].timestamp == 0.1);
  }
  SUBCASE("intensity out of range names the line") {
    std::string bad = scan_record(0.2, 0.1);
    bad.replace(bad.size() - 1, 1, "300");
    std::istringstream in("ODOM,0,0,0,0,0\n" + scan_record(0.1, 0.0) + "\n" + bad + "\n");
    const auto e = expect_error([&] { logio::parse_log(in, 512.0); });
    CHECK(e.code() == ErrorCode::LogParse);
    CHECK(e.line() == 3);
  }
  SUBCASE("malformed records") {
    const std::vector<std::string> bad{
        "SCAN,0,0,1,2,3",                       // short
        scan_record(0, 0) + ",7",               // long
        scan_record(0, 7.0),                    // bearing past a full turn
        scan_record(0, 0, -1),                  // negative intensity
        "ODOM,0,1,2,3",                         // short
        "ODOM,0,1,2,3,-1",                      // negative speed
        "ODOM,0,1,x,3,1",                       // not a number
        "PING,0",                               // unknown record
    };
    for (const auto& text : bad) {
      std::istringstream in(text + "\n");
      CHECK(expect_error([&] { logio::parse_log(in, 512.0); }).code() == ErrorCode::LogParse);
    }
  }
  SUBCASE("time runs backwards") {
    std::istringstream in("ODOM,5,0,0,0,0\nODOM,4,0,0,0,0\n");
    const auto e = expect_error([&] { logio::parse_log(in, 512.0); });
    CHECK(e.line() == 2);
  }
}

TEST_CASE("config files") {
  SUBCASE("defaults round trip") {
    const Config d;
    std::ostringstream out;
    write_config(out, d);
    std::istringstream in(out.str());
    const Config back = parse_config(in);
    CHECK(config_entries(back) == config_entries(d));
  }
  SUBCASE("values and comments") {
    std::istringstream in("# tuning\nradar.intensity_threshold = 40  # brighter\n\ncolregs.safety_margin=12.5\n");
    const Config c = parse_config(in);
    CHECK(c.radar.intensity_threshold == 40);
    CHECK(c.colregs.safety_margin == 12.5);
  }
  SUBCASE("angles are given in degrees") {
    std::istringstream in("colregs.overtaking_limit_deg = 30\n");
    CHECK(parse_config(in).colregs.overtaking_limit == doctest::Approx(geometry::kPi / 6));
  }
  SUBCASE("rejections") {
    for (const std::string text : {"radar.treshold = 3\n", "tracker.range_max = -1\n", "tracker.range_max = ten\n",
                                   "sim.lines_per_rotation = 4\n", "just words\n", "radar.min_target_cells = 2.5\n"}) {
      std::istringstream in(text);
      CHECK(expect_error([&] { parse_config(in); }).code() == ErrorCode::ConfigParse);
    }
  }
  SUBCASE("unknown key names its line") {
    std::istringstream in("sim.dt = 0.1\n\nsim.dtt = 0.2\n");
    CHECK(expect_error([&] { parse_config(in); }).line() == 3);
  }
}

TEST_CASE("path files") {
  std::istringstream in("# route\n300 100 start\n300 600\n310.5 1100 end\n");
  const auto p = app::parse_path(in);
  REQUIRE(p.waypoints.points.size() == 3);
  CHECK(p.waypoints.points[2] == geometry::UtmPoint{310.5, 1100});
  std::ostringstream out;
  app::write_path(out, p);
  std::istringstream again(out.str());
  CHECK(app::parse_path(again).waypoints.points == p.waypoints.points);

  std::istringstream one("1 2\n");
  CHECK(expect_error([&] { app::parse_path(one); }).code() == ErrorCode::InvalidArgument);
  std::istringstream bad("1 2\n3\n");
  CHECK(expect_error([&] { app::parse_path(bad); }).line() == 2);
}

TEST_CASE("svg rendering") {
  const auto chart = sim::straight_river();
  Snapshot empty;
  SUBCASE("empty snapshot draws land only") {
    const auto doc = svg::render_frame(chart, empty);
    CHECK(count(doc, "<g id=") == 1);
    CHECK(count(doc, "<g id=\"land\"") == 1);
    CHECK(count(doc, "<polygon") == 2);
    CHECK(doc.find("ownship") == std::string::npos);
  }
  SUBCASE("one track, one trail") {
    Snapshot s;
    TrackView v;
    v.track.id = 4;
    for (int k = 0; k < 5; ++k) v.track.history.push_back({k * 2.5, {300.0 + k, 200.0 + 2 * k}});
    v.track.state.x << 305, 210, 0.4, 0.8;
    s.tracks.push_back(v);
    s.plan.waypoints.points = {{300, 100}, {300, 1100}};
    const auto doc = svg::render_frame(chart, s);
    CHECK(count(doc, "<polyline class=\"trail\"") == 1);
    CHECK(count(doc, "data-id=\"4\"") == 1);
    CHECK(count(doc, "id=\"ownship\"") == 1);
    CHECK(doc == svg::render_frame(chart, s));
  }
  SUBCASE("north is up") {
    Snapshot s;
    s.plan.waypoints.points = {{300, 100}, {300, 1100}};
    const auto doc = svg::render_frame(chart, s);
    const std::regex pts("<polyline[^>]*points=\"([0-9.]+),([0-9.]+) ([0-9.]+),([0-9.]+)\"");
    std::smatch m;
    REQUIRE(std::regex_search(doc, m, pts));
    CHECK(std::stod(m[2]) == doctest::Approx(1100.0));
    CHECK(std::stod(m[4]) == doctest::Approx(100.0));
  }
}

TEST_CASE("replay of a log without returns follows the global path") {
  const auto chart = sim::straight_river();
  planner::GlobalPath path;
  path.waypoints.points = {{300, 100}, {300, 1100}};
  logio::Log log;
  log.odometry.push_back({{290, 120}, 0.0, 0.0, 0.0});
  const std::size_t n = 256;
  for (std::size_t i = 0; i < 3 * n; ++i) {
    radar::ScanLine l;
    l.timestamp = 2.5 * static_cast<double>(i) / n;
    l.bearing = geometry::kTwoPi * static_cast<double>(i % n) / n;
    l.max_range = 512.0;
    log.scans.push_back(l);
  }
  const auto dir = scratch("quiet");
  const auto summary = app::replay(chart, log, path, Config{}, dir, true);
  CHECK(summary.frames == 3);
  const auto tracks = slurp(dir / "tracks.csv");
  CHECK(count(tracks, "\n") == 1);
  for (std::size_t f = 0; f < 3; ++f) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.txt", f);
    std::istringstream in(slurp(dir / "waypoints" / name));
    std::string header;
    std::getline(in, header);
    CHECK(header.find("status ok") != std::string::npos);
    std::vector<geometry::UtmPoint> pts;
    double e = 0, nn = 0;
    while (in >> e >> nn) pts.push_back({e, nn});
    const auto clipped = planner::clip_path({290, 120}, path.waypoints, planner::PlannerParams{}.rejoin_lookahead);
    CHECK(pts == clipped.points);
    CHECK(fs::exists(dir / "svg" / (std::string(name).substr(0, 10) + ".svg")));
  }
  fs::remove_all(dir);
}

TEST_CASE("replay rejects logs it cannot use") {
  const auto chart = sim::straight_river();
  planner::GlobalPath path;
  path.waypoints.points = {{300, 100}, {300, 1100}};
  logio::Log half;
  half.odometry.push_back({{300, 100}, 0.0, 0.0, 0.0});
  for (int i = 0; i < 100; ++i) {
    radar::ScanLine l;
    l.timestamp = i * 0.01;
    l.bearing = i * 0.01;
    half.scans.push_back(l);
  }
  const auto dir = scratch("reject");
  CHECK(expect_error([&] { app::replay(chart, half, path, Config{}, dir, false); }).code() ==
        ErrorCode::IncompleteRotation);
  half.odometry.clear();
  CHECK(expect_error([&] { app::replay(chart, half, path, Config{}, dir, false); }).code() == ErrorCode::LogParse);
  fs::remove_all(dir);
}

TEST_CASE("scenario resolution") {
  CHECK(app::resolve_scenario("head_on").kind == sim::EncounterKind::HeadOn);
  const auto e = expect_error([] { app::resolve_scenario("tugboat_party"); });
  CHECK(e.code() == ErrorCode::InvalidArgument);
  for (const auto& name : sim::preset_names()) CHECK(std::string(e.what()).find(name) != std::string::npos);
}

TEST_CASE("simulate writes a report and identical outputs per seed") {
  const auto a = scratch("sim_a"), b = scratch("sim_b");
  const auto s = *sim::preset("free_transit");
  const auto ra = app::simulate(s, Config{}, {a, false, a / "rec.log"});
  app::simulate(s, Config{}, {b, false, std::nullopt});
  CHECK(ra.report.pass);
  const auto report = slurp(a / "report.txt");
  CHECK(report.find("verdict = pass") != std::string::npos);
  CHECK(report == slurp(b / "report.txt"));
  CHECK(slurp(a / "trajectory.csv") == slurp(b / "trajectory.csv"));
  CHECK(slurp(a / "tracks.csv") == slurp(b / "tracks.csv"));
  CHECK(fs::exists(a / "rec.log.path"));
  // The recording replays to the same waypoints.
  const auto c = scratch("sim_c");
  app::replay(s.chart, logio::load_log(a / "rec.log", 512.0), app::load_path(a / "rec.log.path"), Config{}, c, false);
  for (const auto& entry : fs::directory_iterator(a / "waypoints")) {
    CHECK(slurp(entry.path()) == slurp(c / "waypoints" / entry.path().filename()));
  }
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(c);
}
