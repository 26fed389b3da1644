#include "config.hpp"

#include <fstream>
#include <functional>
#include <istream>
#include <ostream>

#include "error.hpp"
#include "textio.hpp"

namespace asvnav {

namespace {

constexpr double kDeg = geometry::kPi / 180.0;

struct Field {
  const char* key;
  std::function<double&(Config&)> ref;
  double scale = 1.0;  // stored = written * scale
};

const std::vector<Field>& double_fields() {
  static const std::vector<Field> fields = {
      {"grid.cell_size", [](Config& c) -> double& { return c.cell_size; }},
      {"radar.max_dead_zone", [](Config& c) -> double& { return c.radar.max_dead_zone; }},
      {"tracker.sigma_ax", [](Config& c) -> double& { return c.tracker.kf.sigma_ax; }},
      {"tracker.sigma_ay", [](Config& c) -> double& { return c.tracker.kf.sigma_ay; }},
      {"tracker.sigma_px", [](Config& c) -> double& { return c.tracker.kf.sigma_px; }},
      {"tracker.sigma_py", [](Config& c) -> double& { return c.tracker.kf.sigma_py; }},
      {"tracker.init_pos_var", [](Config& c) -> double& { return c.tracker.kf.init_pos_var; }},
      {"tracker.init_vel_var", [](Config& c) -> double& { return c.tracker.kf.init_vel_var; }},
      {"tracker.range_max", [](Config& c) -> double& { return c.tracker.range_max; }},
      {"tracker.pdf_threshold", [](Config& c) -> double& { return c.tracker.pdf_threshold; }},
      {"colregs.overtaking_limit_deg", [](Config& c) -> double& { return c.colregs.overtaking_limit; }, kDeg},
      {"colregs.head_on_limit_deg", [](Config& c) -> double& { return c.colregs.head_on_limit; }, kDeg},
      {"colregs.safety_margin", [](Config& c) -> double& { return c.colregs.safety_margin; }},
      {"colregs.lookahead", [](Config& c) -> double& { return c.colregs.lookahead; }},
      {"colregs.pad_min", [](Config& c) -> double& { return c.colregs.pad_min; }},
      {"colregs.activation_range", [](Config& c) -> double& { return c.colregs.activation_range; }},
      {"colregs.min_target_speed", [](Config& c) -> double& { return c.colregs.min_target_speed; }},
      {"planner.clearance", [](Config& c) -> double& { return c.planner_clearance; }},
      {"planner.search_radius", [](Config& c) -> double& { return c.planner.search_radius; }},
      {"planner.rejoin_lookahead", [](Config& c) -> double& { return c.planner.rejoin_lookahead; }},
      {"sim.dt", [](Config& c) -> double& { return c.sim.dt; }},
      {"sim.turn_rate_deg", [](Config& c) -> double& { return c.sim.turn_rate; }, kDeg},
      {"sim.accel", [](Config& c) -> double& { return c.sim.accel; }},
      {"sim.waypoint_radius", [](Config& c) -> double& { return c.sim.waypoint_radius; }},
      {"sim.max_range", [](Config& c) -> double& { return c.sim.max_range; }},
      {"sim.noise_p", [](Config& c) -> double& { return c.sim.noise_p; }},
  };
  return fields;
}

struct IntField {
  const char* key;
  std::function<long long(const Config&)> get;
  std::function<void(Config&, long long)> set;
};

const std::vector<IntField>& int_fields() {
  static const std::vector<IntField> fields = {
      {"radar.intensity_threshold", [](const Config& c) { return static_cast<long long>(c.radar.intensity_threshold); },
       [](Config& c, long long v) { c.radar.intensity_threshold = static_cast<int>(v); }},
      {"radar.min_target_cells", [](const Config& c) { return static_cast<long long>(c.radar.min_target_cells); },
       [](Config& c, long long v) { c.radar.min_target_cells = static_cast<std::size_t>(v); }},
      {"tracker.max_misses", [](const Config& c) { return static_cast<long long>(c.tracker.max_misses); },
       [](Config& c, long long v) { c.tracker.max_misses = static_cast<int>(v); }},
      {"tracker.confirm_hits", [](const Config& c) { return static_cast<long long>(c.tracker.confirm_hits); },
       [](Config& c, long long v) { c.tracker.confirm_hits = static_cast<int>(v); }},
      {"sim.lines_per_rotation", [](const Config& c) { return static_cast<long long>(c.sim.lines_per_rotation); },
       [](Config& c, long long v) { c.sim.lines_per_rotation = static_cast<std::size_t>(v); }},
      {"planner.max_iterations", [](const Config& c) { return static_cast<long long>(c.planner.max_iterations); },
       [](Config& c, long long v) { c.planner.max_iterations = static_cast<int>(v); }},
  };
  return fields;
}

[[noreturn]] void fail(const std::string& why, int line = 0) { throw Error(ErrorCode::ConfigParse, why, line); }

}  // namespace

void Config::validate() const {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0)) fail(std::string(key) + " must be positive");
  };
  auto nonnegative = [](double v, const char* key) {
    if (!(v >= 0.0)) fail(std::string(key) + " must not be negative");
  };
  nonnegative(cell_size, "grid.cell_size");
  if (radar.intensity_threshold < 1 || radar.intensity_threshold > 255) fail("radar.intensity_threshold must be in [1, 255]");
  nonnegative(radar.max_dead_zone, "radar.max_dead_zone");
  if (radar.min_target_cells < 1) fail("radar.min_target_cells must be at least 1");
  positive(tracker.kf.sigma_ax, "tracker.sigma_ax");
  positive(tracker.kf.sigma_ay, "tracker.sigma_ay");
  positive(tracker.kf.sigma_px, "tracker.sigma_px");
  positive(tracker.kf.sigma_py, "tracker.sigma_py");
  positive(tracker.kf.init_pos_var, "tracker.init_pos_var");
  positive(tracker.kf.init_vel_var, "tracker.init_vel_var");
  positive(tracker.range_max, "tracker.range_max");
  positive(tracker.pdf_threshold, "tracker.pdf_threshold");
  if (tracker.max_misses < 0) fail("tracker.max_misses must not be negative");
  if (tracker.confirm_hits < 1) fail("tracker.confirm_hits must be at least 1");
  positive(colregs.overtaking_limit, "colregs.overtaking_limit_deg");
  if (!(colregs.head_on_limit > colregs.overtaking_limit) || colregs.head_on_limit > geometry::kPi) {
    fail("colregs.head_on_limit_deg must lie between the overtaking limit and 180");
  }
  nonnegative(colregs.safety_margin, "colregs.safety_margin");
  nonnegative(colregs.lookahead, "colregs.lookahead");
  nonnegative(colregs.pad_min, "colregs.pad_min");
  positive(colregs.activation_range, "colregs.activation_range");
  nonnegative(colregs.min_target_speed, "colregs.min_target_speed");
  nonnegative(planner_clearance, "planner.clearance");
  positive(planner.search_radius, "planner.search_radius");
  nonnegative(planner.rejoin_lookahead, "planner.rejoin_lookahead");
  if (planner.max_iterations < 1) fail("planner.max_iterations must be at least 1");
  positive(sim.dt, "sim.dt");
  positive(sim.turn_rate, "sim.turn_rate_deg");
  positive(sim.accel, "sim.accel");
  positive(sim.waypoint_radius, "sim.waypoint_radius");
  positive(sim.max_range, "sim.max_range");
  if (sim.lines_per_rotation < 16) fail("sim.lines_per_rotation must be at least 16");
  if (!(sim.noise_p >= 0.0 && sim.noise_p <= 1.0)) fail("sim.noise_p must be in [0, 1]");
}

void set_config_value(Config& cfg, const std::string& key, std::string_view value, int line) {
  for (const auto& f : double_fields()) {
    if (key != f.key) continue;
    double v = 0.0;
    if (!textio::parse_double(value, v)) fail("malformed number for " + key, line);
    f.ref(cfg) = v * f.scale;
    return;
  }
  for (const auto& f : int_fields()) {
    if (key != f.key) continue;
    long long v = 0;
    if (!textio::parse_int(value, v)) fail("malformed integer for " + key, line);
    if (v < 0 || v > 1'000'000) fail(key + " out of range", line);
    f.set(cfg, v);
    return;
  }
  fail("unknown key '" + key + "'", line);
}

Config parse_config(std::istream& in) {
  Config cfg;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto body = textio::trim(textio::strip_comment(raw));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value'", line_no);
    set_config_value(cfg, std::string(textio::trim(body.substr(0, eq))), textio::trim(body.substr(eq + 1)), line_no);
  }
  cfg.validate();
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  return parse_config(in);
}

std::vector<std::pair<std::string, std::string>> config_entries(const Config& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  Config copy = cfg;
  for (const auto& f : double_fields()) out.emplace_back(f.key, textio::exact(f.ref(copy) / f.scale));
  for (const auto& f : int_fields()) out.emplace_back(f.key, std::to_string(f.get(cfg)));
  return out;
}

void write_config(std::ostream& out, const Config& cfg) {
  for (const auto& [k, v] : config_entries(cfg)) out << k << " = " << v << '\n';
}

}  // namespace asvnav
