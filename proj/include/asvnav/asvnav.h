#ifndef ASVNAV_ASVNAV_H
#define ASVNAV_ASVNAV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ASVNAV_BUILDING)
#    define ASV_API __declspec(dllexport)
#  else
#    define ASV_API __declspec(dllimport)
#  endif
#else
#  define ASV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum asv_status {
  ASV_OK = 0,
  ASV_ERR_INVALID_ARGUMENT = 1,
  ASV_ERR_IO = 2,
  ASV_ERR_CHART_PARSE = 3,
  ASV_ERR_CHART_VALIDATION = 4,
  ASV_ERR_LOG_PARSE = 5,
  ASV_ERR_CONFIG_PARSE = 6,
  ASV_ERR_SCENARIO_PARSE = 7,
  ASV_ERR_DEGENERATE_SPLIT = 8,
  ASV_ERR_INCOMPLETE_ROTATION = 9,
  ASV_ERR_NON_POSITIVE_DT = 10,
  ASV_ERR_SINGULAR_INNOVATION = 11,
  ASV_ERR_NO_SAFE_POINT = 12,
  ASV_ERR_SCENARIO_DIVERGED = 13,
  ASV_ERR_INTERNAL = 99
} asv_status;

typedef struct asv_chart asv_chart;
typedef struct asv_config asv_config;
typedef struct asv_pipeline asv_pipeline;

#define ASV_SAMPLES_PER_LINE 512

typedef struct asv_scanline {
  double timestamp;
  double bearing; /* radians from the bow */
  double max_range;
  uint8_t samples[ASV_SAMPLES_PER_LINE];
} asv_scanline;

typedef struct asv_ownship {
  double easting;
  double northing;
  double heading; /* radians clockwise from north */
  double speed;
  double timestamp;
} asv_ownship;

typedef enum asv_plan_status { ASV_PLAN_OK = 0, ASV_PLAN_ESCAPED = 1, ASV_PLAN_STOP = 2 } asv_plan_status;

typedef struct asv_frame_result {
  double time;
  double wall_seconds;
  size_t track_count;
  size_t confirmed_count;
  size_t waypoint_count;
  asv_plan_status plan_status;
} asv_frame_result;

typedef struct asv_report {
  int pass;
  double cpa_distance;
  double cpa_time;
  int pass_side_port; /* 1 port, 0 starboard */
  double stand_on_deviation;
  double max_cross_track;
  int entered_ahead_pad;
  size_t frames;
} asv_report;

/* Message for the last failure on the calling thread; empty after success. */
ASV_API const char* asv_last_error(void);
ASV_API const char* asv_status_name(asv_status status);

ASV_API asv_status asv_chart_load(const char* path, asv_chart** out);
ASV_API asv_status asv_chart_straight_river(asv_chart** out);
ASV_API asv_status asv_chart_info(const asv_chart* chart, double* cell_size, int* width, int* height,
                                  size_t* land_polygons);
ASV_API void asv_chart_free(asv_chart* chart);

ASV_API asv_status asv_config_default(asv_config** out);
ASV_API asv_status asv_config_load(const char* path, asv_config** out);
/* Same key names and value syntax as the config file. */
ASV_API asv_status asv_config_set(asv_config* config, const char* key, const char* value);
/* Writes the value into buf (NUL-terminated) if it fits; *needed gets the
   full length including the terminator. */
ASV_API asv_status asv_config_get(const asv_config* config, const char* key, char* buf, size_t cap, size_t* needed);
ASV_API void asv_config_free(asv_config* config);

/* path_en holds n_points (easting, northing) pairs. */
ASV_API asv_status asv_pipeline_create(const asv_chart* chart, const asv_config* config, const double* path_en,
                                       size_t n_points, asv_pipeline** out);
/* Assembles one full rotation from lines, using the given odometry for
   per-line poses, then runs extraction, tracking, projection and planning
   from the pose nearest the rotation start. */
ASV_API asv_status asv_pipeline_process(asv_pipeline* pipeline, const asv_scanline* lines, size_t n_lines,
                                        const asv_ownship* odometry, size_t n_odometry, asv_frame_result* result);
/* Waypoints of the last processed frame as (easting, northing) pairs. */
ASV_API asv_status asv_pipeline_waypoints(const asv_pipeline* pipeline, double* out_en, size_t cap_points,
                                          size_t* n_points);
ASV_API void asv_pipeline_free(asv_pipeline* pipeline);

/* Full replay into out_dir. frames may be NULL. */
ASV_API asv_status asv_replay(const char* chart_path, const char* log_path, const char* path_path,
                              const asv_config* config, const char* out_dir, int svg, size_t* frames);

ASV_API size_t asv_preset_count(void);
ASV_API const char* asv_preset_name(size_t index);

/* scenario is a preset name or a scenario file. seed < 0 keeps the
   scenario's seed. record may be NULL. A fail verdict still returns ASV_OK
   with report->pass = 0. */
ASV_API asv_status asv_simulate(const char* scenario, const asv_config* config, const char* out_dir, int svg,
                                int64_t seed, const char* record, asv_report* report);

#ifdef __cplusplus
}
#endif

#endif
