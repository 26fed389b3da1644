#include "asvnav/asvnav.h"

#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "app.hpp"
#include "error.hpp"

struct asv_chart {
  asvnav::chart::Chart chart;
};

struct asv_config {
  asvnav::Config config;
};

struct asv_pipeline {
  std::unique_ptr<asvnav::Pipeline> pipeline;
  std::vector<asvnav::geometry::UtmPoint> waypoints;
};

namespace {

thread_local std::string g_last_error;

template <class F>
asv_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return ASV_OK;
  } catch (const asvnav::Error& e) {
    g_last_error = e.what();
    return static_cast<asv_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown failure";
  }
  return ASV_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) throw asvnav::Error(asvnav::ErrorCode::InvalidArgument, what);
}

const asvnav::Config& config_or_default(const asv_config* c) {
  static const asvnav::Config defaults;
  return c ? c->config : defaults;
}

}  // namespace

extern "C" {

const char* asv_last_error(void) { return g_last_error.c_str(); }

const char* asv_status_name(asv_status status) {
  switch (status) {
    case ASV_OK: return "ok";
    case ASV_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ASV_ERR_IO: return "i/o error";
    case ASV_ERR_CHART_PARSE: return "chart parse error";
    case ASV_ERR_CHART_VALIDATION: return "chart validation error";
    case ASV_ERR_LOG_PARSE: return "log parse error";
    case ASV_ERR_CONFIG_PARSE: return "config error";
    case ASV_ERR_SCENARIO_PARSE: return "scenario parse error";
    case ASV_ERR_DEGENERATE_SPLIT: return "degenerate split";
    case ASV_ERR_INCOMPLETE_ROTATION: return "incomplete rotation";
    case ASV_ERR_NON_POSITIVE_DT: return "non-positive time step";
    case ASV_ERR_SINGULAR_INNOVATION: return "singular innovation";
    case ASV_ERR_NO_SAFE_POINT: return "no safe point";
    case ASV_ERR_SCENARIO_DIVERGED: return "scenario diverged";
    case ASV_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

asv_status asv_chart_load(const char* path, asv_chart** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new asv_chart{asvnav::chart::load_chart(path)};
  });
}

asv_status asv_chart_straight_river(asv_chart** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new asv_chart{asvnav::sim::straight_river()};
  });
}

asv_status asv_chart_info(const asv_chart* chart, double* cell_size, int* width, int* height, size_t* land_polygons) {
  return guarded([&] {
    require(chart, "null chart");
    if (cell_size) *cell_size = chart->chart.grid.cell_size;
    if (width) *width = chart->chart.grid.width;
    if (height) *height = chart->chart.grid.height;
    if (land_polygons) *land_polygons = chart->chart.land_polygons.size();
  });
}

void asv_chart_free(asv_chart* chart) { delete chart; }

asv_status asv_config_default(asv_config** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new asv_config{};
  });
}

asv_status asv_config_load(const char* path, asv_config** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new asv_config{asvnav::load_config(path)};
  });
}

asv_status asv_config_set(asv_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config && key && value, "null argument");
    asvnav::Config next = config->config;
    asvnav::set_config_value(next, key, value);
    next.validate();
    config->config = next;
  });
}

asv_status asv_config_get(const asv_config* config, const char* key, char* buf, size_t cap, size_t* needed) {
  return guarded([&] {
    require(config && key, "null argument");
    for (const auto& [k, v] : asvnav::config_entries(config->config)) {
      if (k != key) continue;
      if (needed) *needed = v.size() + 1;
      if (buf && cap > v.size()) std::memcpy(buf, v.c_str(), v.size() + 1);
      return;
    }
    throw asvnav::Error(asvnav::ErrorCode::ConfigParse, std::string("unknown key '") + key + "'");
  });
}

void asv_config_free(asv_config* config) { delete config; }

asv_status asv_pipeline_create(const asv_chart* chart, const asv_config* config, const double* path_en, size_t n_points,
                               asv_pipeline** out) {
  return guarded([&] {
    require(chart && out && path_en, "null argument");
    require(n_points >= 2, "global path needs at least 2 waypoints");
    asvnav::planner::GlobalPath path;
    for (size_t i = 0; i < n_points; ++i) path.waypoints.points.push_back({path_en[2 * i], path_en[2 * i + 1]});
    auto p = std::make_unique<asv_pipeline>();
    p->pipeline = std::make_unique<asvnav::Pipeline>(chart->chart, config_or_default(config), std::move(path));
    *out = p.release();
  });
}

asv_status asv_pipeline_process(asv_pipeline* pipeline, const asv_scanline* lines, size_t n_lines,
                                const asv_ownship* odometry, size_t n_odometry, asv_frame_result* result) {
  return guarded([&] {
    require(pipeline && lines && odometry, "null argument");
    require(n_odometry > 0, "odometry is empty");
    std::vector<asvnav::radar::ScanLine> scans(n_lines);
    for (size_t i = 0; i < n_lines; ++i) {
      scans[i].timestamp = lines[i].timestamp;
      scans[i].bearing = lines[i].bearing;
      scans[i].max_range = lines[i].max_range;
      std::memcpy(scans[i].samples.data(), lines[i].samples, ASV_SAMPLES_PER_LINE);
    }
    asvnav::radar::OwnshipTrack track;
    for (size_t i = 0; i < n_odometry; ++i) {
      const auto& o = odometry[i];
      track.push({{o.easting, o.northing}, asvnav::geometry::wrap_two_pi(o.heading), o.speed, o.timestamp});
    }
    auto& pl = *pipeline->pipeline;
    const auto frame = asvnav::radar::assemble_frame(scans, track, pl.chart().grid, pl.config().radar);
    const auto snap = pl.process(frame, frame.ownship_at_start);
    pipeline->waypoints = snap.plan.waypoints.points;
    if (result) {
      result->time = snap.time;
      result->wall_seconds = snap.wall_seconds;
      result->track_count = snap.tracks.size();
      result->confirmed_count = 0;
      for (const auto& v : snap.tracks) result->confirmed_count += v.confirmed ? 1 : 0;
      result->waypoint_count = snap.plan.waypoints.points.size();
      result->plan_status = static_cast<asv_plan_status>(static_cast<int>(snap.plan.status));
    }
  });
}

asv_status asv_pipeline_waypoints(const asv_pipeline* pipeline, double* out_en, size_t cap_points, size_t* n_points) {
  return guarded([&] {
    require(pipeline, "null pipeline");
    const auto& w = pipeline->waypoints;
    if (n_points) *n_points = w.size();
    if (!out_en) return;
    for (size_t i = 0; i < w.size() && i < cap_points; ++i) {
      out_en[2 * i] = w[i].easting;
      out_en[2 * i + 1] = w[i].northing;
    }
  });
}

void asv_pipeline_free(asv_pipeline* pipeline) { delete pipeline; }

asv_status asv_replay(const char* chart_path, const char* log_path, const char* path_path, const asv_config* config,
                      const char* out_dir, int svg, size_t* frames) {
  return guarded([&] {
    require(chart_path && log_path && path_path && out_dir, "null argument");
    const auto& cfg = config_or_default(config);
    const auto chart = asvnav::chart::load_chart(chart_path);
    const auto path = asvnav::app::load_path(path_path);
    const auto log = asvnav::logio::load_log(log_path, cfg.sim.max_range);
    const auto summary = asvnav::app::replay(chart, log, path, cfg, out_dir, svg != 0);
    if (frames) *frames = summary.frames;
  });
}

size_t asv_preset_count(void) { return asvnav::sim::preset_names().size(); }

const char* asv_preset_name(size_t index) {
  static const std::vector<std::string> names = asvnav::sim::preset_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

asv_status asv_simulate(const char* scenario, const asv_config* config, const char* out_dir, int svg, int64_t seed,
                        const char* record, asv_report* report) {
  return guarded([&] {
    require(scenario && out_dir, "null argument");
    auto s = asvnav::app::resolve_scenario(scenario);
    if (seed >= 0) s.seed = static_cast<std::uint64_t>(seed);
    asvnav::app::SimulateOptions opts;
    opts.out_dir = out_dir;
    opts.svg = svg != 0;
    if (record) opts.record = std::filesystem::path(record);
    const auto r = asvnav::app::simulate(s, config_or_default(config), opts);
    if (report) {
      report->pass = r.report.pass ? 1 : 0;
      report->cpa_distance = r.report.cpa_distance;
      report->cpa_time = r.report.cpa_time;
      report->pass_side_port = r.report.pass_side == asvnav::sim::PassSide::Port ? 1 : 0;
      report->stand_on_deviation = r.report.stand_on_deviation;
      report->max_cross_track = r.report.max_cross_track;
      report->entered_ahead_pad = r.report.entered_ahead_pad ? 1 : 0;
      report->frames = r.frames;
    }
  });
}

}  // extern "C"
