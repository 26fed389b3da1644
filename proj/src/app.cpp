#include "app.hpp"

#include <cstdio>
#include <fstream>

#include "error.hpp"
#include "svg.hpp"
#include "textio.hpp"

namespace asvnav::app {

namespace fs = std::filesystem;

namespace {

std::string f3(double v) { return textio::fixed(v, 3); }
std::string f6(double v) { return textio::fixed(v, 6); }

std::string frame_name(std::size_t index, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%04zu.%s", index, ext);
  return buf;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + p.string());
  return out;
}

void make_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + p.string() + ": " + ec.message());
}

}  // namespace

planner::GlobalPath parse_path(std::istream& in) {
  planner::GlobalPath path;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto tok = textio::split_ws(textio::strip_comment(raw));
    if (tok.empty()) continue;
    if (tok.size() < 2 || tok.size() > 3) throw Error(ErrorCode::InvalidArgument, "path line expects '<e> <n> [label]'", line_no);
    geometry::UtmPoint p;
    if (!textio::parse_double(tok[0], p.easting) || !textio::parse_double(tok[1], p.northing)) {
      throw Error(ErrorCode::InvalidArgument, "malformed path coordinate", line_no);
    }
    path.waypoints.points.push_back(p);
    path.labels.push_back(tok.size() == 3 ? tok[2] : std::string());
  }
  if (path.waypoints.points.size() < 2) throw Error(ErrorCode::InvalidArgument, "path needs at least 2 waypoints");
  return path;
}

planner::GlobalPath load_path(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open path " + path.string());
  return parse_path(in);
}

void write_path(std::ostream& out, const planner::GlobalPath& path) {
  for (std::size_t i = 0; i < path.waypoints.points.size(); ++i) {
    const auto& p = path.waypoints.points[i];
    out << textio::exact(p.easting) << ' ' << textio::exact(p.northing);
    if (i < path.labels.size() && !path.labels[i].empty()) out << ' ' << path.labels[i];
    out << '\n';
  }
}

FrameWriter::FrameWriter(fs::path dir, bool svg) : dir_(std::move(dir)), svg_(svg) {
  make_dir(dir_ / "waypoints");
  if (svg_) make_dir(dir_ / "svg");
  tracks_ = open_out(dir_ / "tracks.csv");
  metrics_ = open_out(dir_ / "metrics.csv");
  tracks_ << "frame,t,id,e,n,ve,vn,p_e,p_n,p_ve,p_vn,hits,misses,confirmed,situation\n";
  metrics_ << "frame,t,wall_ms,tracks,confirmed,candidates,projections,status,waypoints\n";
}

void FrameWriter::write(const chart::Chart& chart, const Snapshot& snap) {
  {
    auto out = open_out(dir_ / "waypoints" / frame_name(snap.frame_index, "txt"));
    out << "# t " << f3(snap.time) << " status " << planner::to_string(snap.plan.status) << '\n';
    for (const auto& p : snap.plan.waypoints.points) out << f3(p.easting) << ' ' << f3(p.northing) << '\n';
  }

  std::size_t confirmed = 0;
  for (const auto& v : snap.tracks) {
    const auto& t = v.track;
    const auto& x = t.state.x;
    const auto& P = t.state.P;
    confirmed += v.confirmed ? 1 : 0;
    tracks_ << snap.frame_index << ',' << f3(snap.time) << ',' << t.id << ',' << f6(x(0)) << ',' << f6(x(1)) << ','
            << f6(x(2)) << ',' << f6(x(3)) << ',' << f6(P(0, 0)) << ',' << f6(P(1, 1)) << ',' << f6(P(2, 2)) << ','
            << f6(P(3, 3)) << ',' << t.hits << ',' << t.misses << ',' << (v.confirmed ? 1 : 0) << ','
            << colregs::to_string(v.situation) << '\n';
  }
  metrics_ << snap.frame_index << ',' << f3(snap.time) << ',' << f3(snap.wall_seconds * 1e3) << ',' << snap.tracks.size()
           << ',' << confirmed << ',' << snap.candidates.size() << ',' << snap.projections.size() << ','
           << planner::to_string(snap.plan.status) << ',' << snap.plan.waypoints.points.size() << '\n';
  tracks_.flush();
  metrics_.flush();

  if (svg_) {
    auto out = open_out(dir_ / "svg" / frame_name(snap.frame_index, "svg"));
    out << svg::render_frame(chart, snap);
  }
}

ReplaySummary replay(const chart::Chart& chart, const logio::Log& log, const planner::GlobalPath& path,
                     const Config& config, const fs::path& out_dir, bool svg) {
  if (log.odometry.empty()) throw Error(ErrorCode::LogParse, "log has no ODOM records");
  Pipeline pipeline(chart, config, path);
  const radar::OwnshipTrack ownship(log.odometry);
  radar::FrameAssembler assembler(pipeline.chart().grid, config.radar, ownship);
  FrameWriter writer(out_dir, svg);

  ReplaySummary summary;
  auto handle = [&](const radar::RadarFrame& frame) {
    writer.write(pipeline.chart(), pipeline.process(frame, frame.ownship_at_start));
    ++summary.frames;
  };
  for (const auto& line : log.scans) {
    if (auto frame = assembler.push(line)) handle(*frame);
  }
  if (auto frame = assembler.flush()) handle(*frame);
  summary.dropped_rotations = assembler.dropped_rotations();
  if (summary.frames == 0) throw Error(ErrorCode::IncompleteRotation, "log contains no complete radar rotation");
  return summary;
}

sim::RunResult simulate(const sim::Scenario& scenario, const Config& config, const SimulateOptions& options) {
  FrameWriter writer(options.out_dir, options.svg);
  const chart::Chart chart = working_chart(scenario.chart, config);

  std::ofstream record;
  if (options.record) {
    if (options.record->has_parent_path()) make_dir(options.record->parent_path());
    record = open_out(*options.record);
    auto path_out = open_out(fs::path(*options.record).concat(".path"));
    write_path(path_out, scenario.global_path);
  }

  auto observer = [&](const std::vector<radar::ScanLine>& lines, const radar::OwnshipState& own, const Snapshot& snap) {
    writer.write(chart, snap);
    if (record.is_open() && !lines.empty()) {
      // The synthetic radar sees the rotation from the frame-start pose, so
      // that pose is stamped at both ends of the rotation.
      logio::write_odom(record, own);
      for (std::size_t i = 0; i + 1 < lines.size(); ++i) logio::write_scan(record, lines[i]);
      radar::OwnshipState end = own;
      end.timestamp = lines.back().timestamp;
      logio::write_odom(record, end);
      logio::write_scan(record, lines.back());
    }
  };
  sim::RunResult result = sim::run(scenario, config, observer);

  auto report = open_out(options.out_dir / "report.txt");
  write_report(report, scenario, result);
  auto traj = open_out(options.out_dir / "trajectory.csv");
  write_trajectory(traj, result.samples);
  return result;
}

sim::Scenario resolve_scenario(const std::string& name_or_path) {
  if (auto s = sim::preset(name_or_path)) return *s;
  std::error_code ec;
  if (fs::is_regular_file(name_or_path, ec)) return sim::load_scenario(name_or_path);
  std::string names;
  for (const auto& n : sim::preset_names()) names += (names.empty() ? "" : ", ") + n;
  throw Error(ErrorCode::InvalidArgument, "unknown scenario '" + name_or_path + "'; presets: " + names);
}

void write_report(std::ostream& out, const sim::Scenario& scenario, const sim::RunResult& result) {
  const auto& r = result.report;
  out << "scenario = " << scenario.name << '\n'
      << "kind = " << sim::to_string(r.kind) << '\n'
      << "seed = " << scenario.seed << '\n'
      << "frames = " << result.frames << '\n'
      << "verdict = " << (r.pass ? "pass" : "fail") << '\n'
      << "cpa_distance = " << f3(r.cpa_distance) << '\n'
      << "cpa_time = " << f3(r.cpa_time) << '\n'
      << "pass_side = " << (r.pass_side == sim::PassSide::Port ? "port" : "starboard") << '\n'
      << "stand_on_deviation = " << f3(r.stand_on_deviation) << '\n'
      << "max_cross_track = " << f3(r.max_cross_track) << '\n'
      << "entered_ahead_pad = " << (r.entered_ahead_pad ? "true" : "false") << '\n'
      << "reason = " << r.reason << '\n';
}

void write_trajectory(std::ostream& out, const std::vector<sim::TrajectorySample>& samples) {
  out << "t,e,n,heading,speed";
  const std::size_t targets = samples.empty() ? 0 : samples.front().targets.size();
  for (std::size_t i = 0; i < targets; ++i) out << ",t" << i << "_e,t" << i << "_n,t" << i << "_heading";
  out << '\n';
  for (const auto& s : samples) {
    out << f3(s.t) << ',' << f3(s.ownship.position.easting) << ',' << f3(s.ownship.position.northing) << ','
        << f6(s.ownship.heading) << ',' << f3(s.ownship.speed);
    for (const auto& t : s.targets) out << ',' << f3(t.position.easting) << ',' << f3(t.position.northing) << ',' << f6(t.heading);
    out << '\n';
  }
}

}  // namespace asvnav::app
