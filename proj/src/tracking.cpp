#include "tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace asvnav::tracking {

namespace {

constexpr double kMaxCondition = 1e12;

Vec2 to_vec(UtmPoint p) { return {p.easting, p.northing}; }

void symmetrize(Mat4& P) { P = 0.5 * (P + P.transpose()).eval(); }

// Pair weight relative to leaving the track unmatched.
double pair_weight(double likelihood, double pdf_threshold) {
  return std::log(likelihood) - std::log(pdf_threshold);
}

void exhaustive_search(const std::vector<std::vector<double>>& L, double thr, std::size_t row, std::vector<int>& current,
                       std::vector<bool>& used, double score, std::vector<int>& best, double& best_score) {
  if (row == L.size()) {
    if (best.empty() || score > best_score + 1e-12 * std::max(1.0, std::fabs(best_score))) {
      best_score = score;
      best = current;
    }
    return;
  }
  const std::size_t cols = L[row].size();
  for (std::size_t j = 0; j < cols; ++j) {
    if (used[j] || !(L[row][j] > 0.0)) continue;
    used[j] = true;
    current[row] = static_cast<int>(j);
    exhaustive_search(L, thr, row + 1, current, used, score + pair_weight(L[row][j], thr), best, best_score);
    used[j] = false;
  }
  current[row] = -1;
  exhaustive_search(L, thr, row + 1, current, used, score, best, best_score);
}

}  // namespace

Mat4 transition(double dt) {
  Mat4 F = Mat4::Identity();
  F(0, 2) = dt;
  F(1, 3) = dt;
  return F;
}

Mat42 noise_gain(double dt) {
  Mat42 G = Mat42::Zero();
  G(0, 0) = dt * dt / 2.0;
  G(1, 1) = dt * dt / 2.0;
  G(2, 0) = dt;
  G(3, 1) = dt;
  return G;
}

Mat4 process_noise(double dt, const KfParams& params) {
  Mat2 Qv = Mat2::Zero();
  Qv(0, 0) = params.sigma_ax * params.sigma_ax;
  Qv(1, 1) = params.sigma_ay * params.sigma_ay;
  const Mat42 G = noise_gain(dt);
  return G * Qv * G.transpose();
}

Mat24 observation() {
  Mat24 H = Mat24::Zero();
  H(0, 0) = 1.0;
  H(1, 1) = 1.0;
  return H;
}

Mat2 measurement_noise(const KfParams& params) {
  Mat2 R = Mat2::Zero();
  R(0, 0) = params.sigma_px * params.sigma_px;
  R(1, 1) = params.sigma_py * params.sigma_py;
  return R;
}

Track kf_init(const Measurement& m, const KfParams& params, TrackId id) {
  Track t;
  t.id = id;
  t.state.x << m.z(0), m.z(1), 0.0, 0.0;
  t.state.P = Vec4(params.init_pos_var, params.init_pos_var, params.init_vel_var, params.init_vel_var).asDiagonal();
  t.state_time = m.timestamp;
  t.last_update = m.timestamp;
  t.hits = 1;
  t.history.push_back({m.timestamp, {m.z(0), m.z(1)}});
  t.latest_polygon = m.source_polygon;
  return t;
}

KfState kf_predict(const KfState& state, double dt, const KfParams& params) {
  if (!(dt > 0.0)) throw Error(ErrorCode::NonPositiveDt, "prediction interval must be positive");
  const Mat4 F = transition(dt);
  KfState out;
  out.x = F * state.x;
  out.P = F * state.P * F.transpose() + process_noise(dt, params);
  symmetrize(out.P);
  return out;
}

Mat2 innovation_covariance(const KfState& state, const KfParams& params) {
  const Mat24 H = observation();
  return H * state.P * H.transpose() + measurement_noise(params);
}

KfState kf_update(const KfState& state, const Measurement& m, const KfParams& params) {
  const Mat24 H = observation();
  const Vec2 y = m.z - H * state.x;
  const Mat2 S = innovation_covariance(state, params);

  const Eigen::SelfAdjointEigenSolver<Mat2> eig(S, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues()(0), hi = eig.eigenvalues()(1);
  if (!(lo > 0.0) || hi / lo > kMaxCondition) {
    throw Error(ErrorCode::SingularInnovation, "innovation covariance is numerically singular");
  }

  const Mat42 K = state.P * H.transpose() * S.inverse();
  KfState out;
  out.x = state.x + K * y;
  out.P = (Mat4::Identity() - K * H) * state.P;
  symmetrize(out.P);
  return out;
}

double gaussian_density(const Vec2& residual, const Mat2& S) {
  const double det = S.determinant();
  if (!(det > 0.0)) return 0.0;
  const double m2 = residual.dot(S.inverse() * residual);
  return std::exp(-0.5 * m2) / (2.0 * geometry::kPi * std::sqrt(det));
}

double gate_likelihood(const KfState& state, const Measurement& m, const TrackerParams& params) {
  const Vec2 y = m.z - observation() * state.x;
  if (y.norm() > params.range_max) return 0.0;
  const double density = gaussian_density(y, innovation_covariance(state, params.kf));
  return density < params.pdf_threshold ? 0.0 : density;
}

std::vector<std::vector<double>> likelihood_table(std::span<const Track> tracks, std::span<const Measurement> measurements,
                                                  const TrackerParams& params) {
  std::vector<std::vector<double>> L(tracks.size(), std::vector<double>(measurements.size(), 0.0));
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    for (std::size_t j = 0; j < measurements.size(); ++j) L[i][j] = gate_likelihood(tracks[i].state, measurements[j], params);
  }
  return L;
}

double assignment_score(const std::vector<std::vector<double>>& L, std::span<const int> match, double pdf_threshold) {
  double s = 0.0;
  for (std::size_t i = 0; i < match.size(); ++i) {
    s += match[i] >= 0 ? std::log(L[i][static_cast<std::size_t>(match[i])]) : std::log(pdf_threshold);
  }
  return s;
}

std::vector<int> solve_exhaustive(const std::vector<std::vector<double>>& L, double pdf_threshold) {
  const std::size_t cols = L.empty() ? 0 : L.front().size();
  std::vector<int> current(L.size(), -1), best;
  std::vector<bool> used(cols, false);
  double best_score = 0.0;
  exhaustive_search(L, pdf_threshold, 0, current, used, 0.0, best, best_score);
  if (best.empty()) best.assign(L.size(), -1);
  return best;
}

std::vector<int> solve_hungarian(const std::vector<std::vector<double>>& L, double pdf_threshold) {
  // Rows are tracks; columns are the measurements followed by one null column
  // per track, so rows never outnumber columns.
  const std::size_t n = L.size();
  if (n == 0) return {};
  const std::size_t m_real = L.front().size();
  const std::size_t m = m_real + n;
  const double kBlocked = 1e15;

  auto cost = [&](std::size_t i, std::size_t j) {
    if (j >= m_real) return 0.0;
    const double l = L[i][j];
    return l > 0.0 ? -pair_weight(l, pdf_threshold) : kBlocked;
  };

  // Shortest augmenting path formulation with potentials, 1-based.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> match(n, -1);
  for (std::size_t j = 1; j <= m_real; ++j) {
    if (p[j] != 0 && L[p[j] - 1][j - 1] > 0.0) match[p[j] - 1] = static_cast<int>(j - 1);
  }
  return match;
}

Assignment associate(std::span<const Track> tracks, std::span<const Measurement> measurements,
                     const TrackerParams& params, AssociationMethod method) {
  const auto L = likelihood_table(tracks, measurements, params);
  if (method == AssociationMethod::Auto) {
    method = tracks.size() <= 5 && measurements.size() <= 5 ? AssociationMethod::Exhaustive : AssociationMethod::Hungarian;
  }
  const std::vector<int> match = method == AssociationMethod::Exhaustive ? solve_exhaustive(L, params.pdf_threshold)
                                                                        : solve_hungarian(L, params.pdf_threshold);
  Assignment a;
  std::vector<bool> taken(measurements.size(), false);
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    if (match[i] >= 0) {
      a.pairs.emplace_back(tracks[i].id, static_cast<std::size_t>(match[i]));
      taken[static_cast<std::size_t>(match[i])] = true;
    } else {
      a.unmatched_tracks.push_back(tracks[i].id);
    }
  }
  for (std::size_t j = 0; j < measurements.size(); ++j) {
    if (!taken[j]) a.unmatched_measurements.push_back(j);
  }
  return a;
}

Tracker::Tracker(const TrackerParams& params) : params_(params) {}

void Tracker::step(std::span<const radar::TargetCandidate> candidates, double frame_time) {
  std::vector<Measurement> ms;
  ms.reserve(candidates.size());
  for (const auto& c : candidates) ms.push_back({to_vec(c.centroid), frame_time, c.polygon});
  step_measurements(ms, frame_time);
}

void Tracker::step_measurements(std::span<const Measurement> measurements, double frame_time) {
  for (auto& t : tracks_) {
    if (!(frame_time > t.state_time)) throw Error(ErrorCode::NonPositiveDt, "frame time must advance");
  }

  // Predict, remembering the displacement for coasted polygons.
  std::vector<UtmPoint> shift(tracks_.size());
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    Track& t = tracks_[i];
    const UtmPoint before = t.position();
    t.state = kf_predict(t.state, frame_time - t.state_time, params_.kf);
    t.state_time = frame_time;
    shift[i] = t.position() - before;
  }

  const Assignment a = associate(tracks_, measurements, params_);

  std::vector<int> match(tracks_.size(), -1);
  for (const auto& [id, j] : a.pairs) {
    for (std::size_t i = 0; i < tracks_.size(); ++i) {
      if (tracks_[i].id == id) match[i] = static_cast<int>(j);
    }
  }

  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    Track& t = tracks_[i];
    bool updated = false;
    if (match[i] >= 0) {
      const Measurement& m = measurements[static_cast<std::size_t>(match[i])];
      try {
        t.state = kf_update(t.state, m, params_.kf);
        t.latest_polygon = m.source_polygon;
        updated = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularInnovation) throw;
      }
    }
    if (updated) {
      t.misses = 0;
      ++t.hits;
      t.last_update = frame_time;
    } else {
      ++t.misses;
      t.latest_polygon = geometry::translated(t.latest_polygon, shift[i]);
    }
    t.history.push_back({frame_time, t.position()});
  }

  std::erase_if(tracks_, [&](const Track& t) { return t.misses > params_.max_misses; });

  for (const std::size_t j : a.unmatched_measurements) tracks_.push_back(kf_init(measurements[j], params_.kf, next_id_++));
}

std::vector<const Track*> Tracker::confirmed() const {
  std::vector<const Track*> out;
  for (const auto& t : tracks_) {
    if (t.hits >= params_.confirm_hits) out.push_back(&t);
  }
  return out;
}

}  // namespace asvnav::tracking
