#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "geometry.hpp"
#include "radar.hpp"

namespace asvnav::tracking {

using geometry::Polygon;
using geometry::UtmPoint;

using Vec2 = Eigen::Matrix<double, 2, 1>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat2 = Eigen::Matrix<double, 2, 2>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using Mat24 = Eigen::Matrix<double, 2, 4>;
using Mat42 = Eigen::Matrix<double, 4, 2>;

using TrackId = std::uint64_t;

// State [p_x, p_y, v_x, v_y] with covariance.
struct KfState {
  Vec4 x = Vec4::Zero();
  Mat4 P = Mat4::Identity();
};

struct KfParams {
  double sigma_ax = 0.5;
  double sigma_ay = 0.5;
  double sigma_px = 3.0;
  double sigma_py = 3.0;
  double init_pos_var = 9.0;
  double init_vel_var = 25.0;
};

struct TrackerParams {
  KfParams kf;
  double range_max = 25.0;
  double pdf_threshold = 1e-6;
  int max_misses = 2;
  int confirm_hits = 2;
};

struct Measurement {
  Vec2 z = Vec2::Zero();
  double timestamp = 0.0;
  Polygon source_polygon;
};

struct TrackPoint {
  double t = 0.0;
  UtmPoint p;
};

struct Track {
  TrackId id = 0;
  KfState state;
  double state_time = 0.0;   // time the state refers to
  double last_update = 0.0;  // time of the last incorporated measurement
  int misses = 0;
  int hits = 0;  // measurements incorporated, birth included
  std::vector<TrackPoint> history;
  Polygon latest_polygon;

  UtmPoint position() const { return {state.x(0), state.x(1)}; }
  UtmPoint velocity() const { return {state.x(2), state.x(3)}; }
};

struct Assignment {
  std::vector<std::pair<TrackId, std::size_t>> pairs;
  std::vector<TrackId> unmatched_tracks;
  std::vector<std::size_t> unmatched_measurements;
};

enum class AssociationMethod { Auto, Exhaustive, Hungarian };

Mat4 transition(double dt);
Mat42 noise_gain(double dt);
Mat4 process_noise(double dt, const KfParams& params);
Mat24 observation();
Mat2 measurement_noise(const KfParams& params);

Track kf_init(const Measurement& m, const KfParams& params, TrackId id);

// Throws Error(NonPositiveDt).
KfState kf_predict(const KfState& state, double dt, const KfParams& params);

// Throws Error(SingularInnovation) when cond(S) > 1e12.
KfState kf_update(const KfState& state, const Measurement& m, const KfParams& params);

// Innovation covariance S = H P H^T + R.
Mat2 innovation_covariance(const KfState& state, const KfParams& params);

// Bivariate normal density N(z; Hx, S).
double gaussian_density(const Vec2& residual, const Mat2& S);

// Density of m under the predicted state; 0 outside range_max or below
// pdf_threshold.
double gate_likelihood(const KfState& state, const Measurement& m, const TrackerParams& params);

// Gated likelihood table, rows follow tracks, columns measurements.
std::vector<std::vector<double>> likelihood_table(std::span<const Track> tracks, std::span<const Measurement> measurements,
                                                  const TrackerParams& params);

// Score of an assignment: log L per matched track, log(pdf_threshold) per
// unmatched track.
double assignment_score(const std::vector<std::vector<double>>& L, std::span<const int> match, double pdf_threshold);

// Optimal one-to-one assignment over gated pairs. match[i] is the measurement
// index for track i or -1.
std::vector<int> solve_exhaustive(const std::vector<std::vector<double>>& L, double pdf_threshold);
std::vector<int> solve_hungarian(const std::vector<std::vector<double>>& L, double pdf_threshold);

Assignment associate(std::span<const Track> tracks, std::span<const Measurement> measurements,
                     const TrackerParams& params, AssociationMethod method = AssociationMethod::Auto);

// Owns the track set of one session; ids are never reused.
class Tracker {
 public:
  explicit Tracker(const TrackerParams& params = {});

  // Predicts every track to frame_time, associates, updates, coasts, deletes
  // and spawns. Throws Error(NonPositiveDt) if frame_time does not advance.
  void step(std::span<const radar::TargetCandidate> candidates, double frame_time);
  void step_measurements(std::span<const Measurement> measurements, double frame_time);

  const std::vector<Track>& tracks() const { return tracks_; }
  std::vector<const Track*> confirmed() const;
  const TrackerParams& params() const { return params_; }
  TrackId next_id() const { return next_id_; }

 private:
  TrackerParams params_;
  std::vector<Track> tracks_;
  TrackId next_id_ = 1;
};

}  // namespace asvnav::tracking
