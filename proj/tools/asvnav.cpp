// asvnav: replay recorded logs or run encounter scenarios.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "asvnav/asvnav.h"

namespace {

// 0 ok, 1 bad input, 2 runtime divergence or failed verdict.
int exit_code(asv_status s) {
  switch (s) {
    case ASV_OK: return 0;
    case ASV_ERR_INVALID_ARGUMENT:
    case ASV_ERR_IO:
    case ASV_ERR_CHART_PARSE:
    case ASV_ERR_CHART_VALIDATION:
    case ASV_ERR_LOG_PARSE:
    case ASV_ERR_CONFIG_PARSE:
    case ASV_ERR_SCENARIO_PARSE:
    case ASV_ERR_INCOMPLETE_ROTATION:
      return 1;
    default:
      return 2;
  }
}

int report_failure(asv_status s) {
  std::fprintf(stderr, "asvnav: %s: %s\n", asv_status_name(s), asv_last_error());
  return exit_code(s);
}

struct ConfigHandle {
  asv_config* ptr = nullptr;
  ~ConfigHandle() { asv_config_free(ptr); }
};

asv_status load_config(const std::string& path, ConfigHandle& cfg) {
  return path.empty() ? asv_config_default(&cfg.ptr) : asv_config_load(path.c_str(), &cfg.ptr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radar-based collision avoidance pipeline: replay logs, simulate encounters"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  bool svg = false;

  auto* replay = app.add_subcommand("replay", "Run the pipeline over a recorded SCAN/ODOM log");
  std::string chart_path, log_path, path_path;
  replay->add_option("--chart", chart_path, "Chart file")->required()->check(CLI::ExistingFile);
  replay->add_option("--log", log_path, "Radar and odometry log")->required()->check(CLI::ExistingFile);
  replay->add_option("--path", path_path, "Global path, one '<e> <n>' per line")->required()->check(CLI::ExistingFile);

  auto* simulate = app.add_subcommand("simulate", "Run a scenario preset or file and score it");
  std::string scenario;
  long long seed = -1;
  std::string record;
  auto* pos = simulate->add_option("name", scenario, "Preset name or scenario file");
  auto* flag = simulate->add_option("--scenario", scenario, "Preset name or scenario file");
  pos->excludes(flag);
  simulate->add_option("--seed", seed, "Override the scenario seed")->check(CLI::NonNegativeNumber);
  simulate->add_option("--record", record, "Also write the synthesized radar and odometry as a log");

  for (auto* sub : {replay, simulate}) {
    sub->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_flag("--svg", svg, "Write an SVG per frame");
  }

  auto* presets = app.add_subcommand("presets", "List scenario presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (presets->parsed()) {
    for (size_t i = 0; i < asv_preset_count(); ++i) std::printf("%s\n", asv_preset_name(i));
    return 0;
  }

  ConfigHandle cfg;
  if (auto s = load_config(config_path, cfg); s != ASV_OK) return report_failure(s);

  if (replay->parsed()) {
    size_t frames = 0;
    const auto s = asv_replay(chart_path.c_str(), log_path.c_str(), path_path.c_str(), cfg.ptr, out_dir.c_str(), svg ? 1 : 0,
                              &frames);
    if (s != ASV_OK) return report_failure(s);
    std::printf("replayed %zu frames into %s\n", frames, out_dir.c_str());
    return 0;
  }

  if (scenario.empty()) {
    std::fprintf(stderr, "asvnav: simulate needs a scenario; presets:");
    for (size_t i = 0; i < asv_preset_count(); ++i) std::fprintf(stderr, " %s", asv_preset_name(i));
    std::fprintf(stderr, "\n");
    return 1;
  }
  asv_report report{};
  const auto s = asv_simulate(scenario.c_str(), cfg.ptr, out_dir.c_str(), svg ? 1 : 0, seed,
                              record.empty() ? nullptr : record.c_str(), &report);
  if (s != ASV_OK) return report_failure(s);
  std::printf("%s: %s (cpa %.2f m at %.1f s, %s side, stand-on deviation %.2f m, %zu frames)\n", scenario.c_str(),
              report.pass ? "pass" : "fail", report.cpa_distance, report.cpa_time, report.pass_side_port ? "port" : "starboard",
              report.stand_on_deviation, report.frames);
  return report.pass ? 0 : 2;
}
