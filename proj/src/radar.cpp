#include "radar.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace asvnav::radar {

using geometry::kTwoPi;

std::optional<std::size_t> dead_zone_junction(const ScanLine& line, double max_dead_zone) {
  std::optional<std::size_t> junction;
  for (std::size_t k = 0; k < kSamplesPerLine && line.range_of(k) <= max_dead_zone; ++k) {
    if (!junction || line.samples[k] <= line.samples[*junction]) junction = k;
  }
  return junction;
}

ScanLine filter_dead_zone(const ScanLine& line, double max_dead_zone) {
  ScanLine out = line;
  if (const auto j = dead_zone_junction(line, max_dead_zone)) {
    std::fill(out.samples.begin(), out.samples.begin() + static_cast<std::ptrdiff_t>(*j + 1), 0);
  }
  return out;
}

CellSet overlay_scanline(const ScanLine& line, const OwnshipState& ownship, const GridMeta& meta, int intensity_threshold) {
  CellSet cells;
  const double theta = ownship.heading + line.bearing;
  const double se = std::sin(theta), cn = std::cos(theta);
  for (std::size_t k = 0; k < kSamplesPerLine; ++k) {
    if (line.samples[k] < intensity_threshold) continue;
    const double r = line.range_of(k);
    const UtmPoint p{ownship.position.easting + r * se, ownship.position.northing + r * cn};
    if (const auto c = meta.cell_of(p)) cells.push_back(meta.index(*c));
  }
  geometry::normalize(cells);
  return cells;
}

OwnshipTrack::OwnshipTrack(std::vector<OwnshipState> states) : states_(std::move(states)) {
  std::stable_sort(states_.begin(), states_.end(),
                   [](const OwnshipState& a, const OwnshipState& b) { return a.timestamp < b.timestamp; });
}

void OwnshipTrack::push(const OwnshipState& state) {
  if (!states_.empty() && state.timestamp < states_.back().timestamp) {
    throw Error(ErrorCode::InvalidArgument, "ownship states must be time-ordered");
  }
  states_.push_back(state);
}

const OwnshipState& OwnshipTrack::nearest(double t) const {
  if (states_.empty()) throw Error(ErrorCode::InvalidArgument, "no ownship state available");
  const auto it = std::lower_bound(states_.begin(), states_.end(), t,
                                   [](const OwnshipState& s, double v) { return s.timestamp < v; });
  if (it == states_.begin()) return *it;
  if (it == states_.end()) return states_.back();
  const auto prev = std::prev(it);
  // Earlier state wins ties.
  return (t - prev->timestamp) <= (it->timestamp - t) ? *prev : *it;
}

double bearing_coverage(double first_bearing, double last_bearing, std::size_t count) {
  if (count < 2) return 0.0;
  const double span = last_bearing - first_bearing;
  return span + span / static_cast<double>(count - 1);
}

FrameAssembler::FrameAssembler(const GridMeta& meta, const RadarParams& params, const OwnshipTrack& ownship)
    : meta_(meta), params_(params), ownship_(ownship) {}

std::optional<RadarFrame> FrameAssembler::push(const ScanLine& line) {
  std::optional<RadarFrame> done;
  if (count_ > 0 && line.bearing < last_bearing_) done = close();

  const OwnshipState& pose = ownship_.nearest(line.timestamp);
  if (count_ == 0) {
    first_bearing_ = line.bearing;
    start_time_ = line.timestamp;
  }
  last_bearing_ = line.bearing;
  end_time_ = line.timestamp;
  ++count_;

  const ScanLine filtered = filter_dead_zone(line, params_.max_dead_zone);
  const CellSet hit = overlay_scanline(filtered, pose, meta_, params_.intensity_threshold);
  cells_.insert(cells_.end(), hit.begin(), hit.end());
  return done;
}

std::optional<RadarFrame> FrameAssembler::flush() { return close(); }

std::optional<RadarFrame> FrameAssembler::close() {
  if (count_ == 0) return std::nullopt;
  std::optional<RadarFrame> frame;
  // Tolerance absorbs rounding in evenly spaced bearings.
  if (bearing_coverage(first_bearing_, last_bearing_, count_) >= kTwoPi - 1e-6) {
    RadarFrame f;
    f.start_time = start_time_;
    f.end_time = end_time_;
    f.ownship_at_start = ownship_.nearest(start_time_);
    f.line_count = count_;
    geometry::normalize(cells_);
    f.occupied = std::move(cells_);
    frame = std::move(f);
  } else {
    ++dropped_;
  }
  cells_ = {};
  count_ = 0;
  return frame;
}

std::vector<RadarFrame> assemble_frames(std::span<const ScanLine> lines, const OwnshipTrack& ownship,
                                        const GridMeta& meta, const RadarParams& params) {
  FrameAssembler assembler(meta, params, ownship);
  std::vector<RadarFrame> frames;
  for (const auto& line : lines) {
    if (auto f = assembler.push(line)) frames.push_back(std::move(*f));
  }
  if (auto f = assembler.flush()) frames.push_back(std::move(*f));
  if (frames.empty()) throw Error(ErrorCode::IncompleteRotation, "scanlines do not cover a full rotation");
  return frames;
}

RadarFrame assemble_frame(std::span<const ScanLine> lines, const OwnshipTrack& ownship, const GridMeta& meta,
                          const RadarParams& params) {
  auto frames = assemble_frames(lines, ownship, meta, params);
  if (frames.size() != 1) throw Error(ErrorCode::InvalidArgument, "scanlines span more than one rotation");
  return std::move(frames.front());
}

Extraction extract_targets(const RadarFrame& frame, const chart::Chart& chart, const RadarParams& params) {
  Extraction out;
  std::vector<geometry::BoundingBox> land_boxes;
  land_boxes.reserve(chart.land_polygons.size());
  for (const auto& land : chart.land_polygons) land_boxes.push_back(geometry::bounds(land));

  for (const auto& component : geometry::connected_components(chart.grid, frame.occupied)) {
    if (component.size() < params.min_target_cells) continue;
    Polygon poly = geometry::trace_contour(component, chart.grid);
    const auto box = geometry::bounds(poly);
    bool touches_land = false;
    for (std::size_t i = 0; i < chart.land_polygons.size() && !touches_land; ++i) {
      touches_land = land_boxes[i].overlaps(box) && geometry::polygons_intersect(poly, chart.land_polygons[i]);
    }
    if (touches_land) {
      out.land_objects.push_back(std::move(poly));
    } else {
      TargetCandidate c;
      c.centroid = geometry::vertex_mean(poly);
      c.polygon = std::move(poly);
      c.frame_time = frame.start_time;
      out.candidates.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace asvnav::radar
