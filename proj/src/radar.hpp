#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chart.hpp"
#include "grid.hpp"

namespace asvnav::radar {

using geometry::CellSet;
using geometry::GridMeta;
using geometry::Polygon;
using geometry::UtmPoint;

inline constexpr std::size_t kSamplesPerLine = 512;
inline constexpr double kRotationPeriod = 2.5;

struct ScanLine {
  double timestamp = 0.0;  // seconds, monotonic
  double bearing = 0.0;    // radians from the bow, [0, 2pi)
  std::array<std::uint8_t, kSamplesPerLine> samples{};
  double max_range = 0.0;  // meters

  // Range of the center of sample k.
  double range_of(std::size_t k) const { return (static_cast<double>(k) + 0.5) * max_range / kSamplesPerLine; }
};

struct OwnshipState {
  UtmPoint position;
  double heading = 0.0;  // radians clockwise from north, [0, 2pi)
  double speed = 0.0;    // m/s
  double timestamp = 0.0;
};

struct RadarParams {
  int intensity_threshold = 30;
  double max_dead_zone = 15.0;  // meters
  std::size_t min_target_cells = 3;
};

struct RadarFrame {
  double start_time = 0.0;
  double end_time = 0.0;
  CellSet occupied;
  OwnshipState ownship_at_start;
  std::size_t line_count = 0;
};

struct TargetCandidate {
  Polygon polygon;
  UtmPoint centroid;
  double frame_time = 0.0;
};

// Junction between the near-radar hump and real returns: the minimum over the
// samples whose centers lie within max_dead_zone, the largest index on ties.
// nullopt when that window is empty.
std::optional<std::size_t> dead_zone_junction(const ScanLine& line, double max_dead_zone);

// Copy of the line with samples 0..junction (inclusive) zeroed.
ScanLine filter_dead_zone(const ScanLine& line, double max_dead_zone);

// Cells hit by samples at or above the threshold. Sample k lands at
// ownship + range(k) * (sin t, cos t), t = heading + bearing.
CellSet overlay_scanline(const ScanLine& line, const OwnshipState& ownship, const GridMeta& meta, int intensity_threshold);

// Time-indexed ownship states with nearest-timestamp lookup.
class OwnshipTrack {
 public:
  OwnshipTrack() = default;
  explicit OwnshipTrack(std::vector<OwnshipState> states);

  void push(const OwnshipState& state);
  bool empty() const { return states_.empty(); }
  const OwnshipState& nearest(double t) const;
  const std::vector<OwnshipState>& states() const { return states_; }

 private:
  std::vector<OwnshipState> states_;
};

// Streaming rotation assembly. A rotation ends where the bearing wraps; it
// becomes a frame only if its lines cover the full circle.
class FrameAssembler {
 public:
  FrameAssembler(const GridMeta& meta, const RadarParams& params, const OwnshipTrack& ownship);

  // Returns the completed frame when this line starts a new rotation.
  std::optional<RadarFrame> push(const ScanLine& line);
  // Closes the pending rotation.
  std::optional<RadarFrame> flush();

  std::size_t dropped_rotations() const { return dropped_; }

 private:
  std::optional<RadarFrame> close();

  GridMeta meta_;
  RadarParams params_;
  const OwnshipTrack& ownship_;
  CellSet cells_;
  double first_bearing_ = 0.0, last_bearing_ = 0.0;
  double start_time_ = 0.0, end_time_ = 0.0;
  std::size_t count_ = 0;
  std::size_t dropped_ = 0;
};

// Angular coverage of time-ordered lines within one rotation: bearing span
// plus one mean line spacing.
double bearing_coverage(double first_bearing, double last_bearing, std::size_t count);

// All complete rotations in the input. Throws Error(IncompleteRotation) if
// there is none.
std::vector<RadarFrame> assemble_frames(std::span<const ScanLine> lines, const OwnshipTrack& ownship,
                                        const GridMeta& meta, const RadarParams& params);

// Exactly one rotation's worth of lines. Throws Error(IncompleteRotation).
RadarFrame assemble_frame(std::span<const ScanLine> lines, const OwnshipTrack& ownship, const GridMeta& meta,
                          const RadarParams& params);

struct Extraction {
  std::vector<TargetCandidate> candidates;
  std::vector<Polygon> land_objects;
};

// Components of the frame traced to polygons; those touching land are land
// objects, the rest targets. Components below min_target_cells are dropped.
Extraction extract_targets(const RadarFrame& frame, const chart::Chart& chart, const RadarParams& params);

}  // namespace asvnav::radar
