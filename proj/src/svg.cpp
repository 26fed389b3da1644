#include "svg.hpp"

#include <algorithm>

#include "textio.hpp"

namespace asvnav::svg {

namespace {

class Canvas {
 public:
  explicit Canvas(const geometry::BoundingBox& box) : box_(box) {}

  std::string x(double e) const { return textio::fixed(e - box_.min_e, 2); }
  std::string y(double n) const { return textio::fixed(box_.max_n - n, 2); }
  std::string pt(geometry::UtmPoint p) const { return x(p.easting) + "," + y(p.northing); }

  std::string points(const std::vector<geometry::UtmPoint>& pts) const {
    std::string s;
    for (const auto& p : pts) {
      if (!s.empty()) s += ' ';
      s += pt(p);
    }
    return s;
  }

 private:
  geometry::BoundingBox box_;
};

void polygon(std::string& out, const Canvas& c, const geometry::Polygon& p) {
  out += "<polygon points=\"" + c.points(p.ring) + "\"/>\n";
}

void open_layer(std::string& out, const char* id, const std::string& style) {
  out += "<g id=\"";
  out += id;
  out += "\" ";
  out += style;
  out += ">\n";
}

}  // namespace

std::string render_frame(const chart::Chart& chart, const Snapshot& snap) {
  const auto& meta = chart.grid;
  const auto box = meta.extent();
  const Canvas c(box);
  const double w = box.max_e - box.min_e;
  const double h = box.max_n - box.min_n;
  const double stroke = std::max(0.5, std::max(w, h) / 800.0);
  const std::string sw = textio::fixed(stroke, 2);

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + textio::fixed(w, 2) + " " + textio::fixed(h, 2) +
         "\" width=\"" + textio::fixed(std::min(w, 1200.0), 0) + "\">\n";
  out += "<title>frame " + std::to_string(snap.frame_index) + " t=" + textio::fixed(snap.time, 2) + "</title>\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + textio::fixed(w, 2) + "\" height=\"" + textio::fixed(h, 2) +
         "\" fill=\"#f4f6f8\"/>\n";

  open_layer(out, "land", "fill=\"#333333\" stroke=\"none\"");
  for (const auto& p : chart.land_polygons) polygon(out, c, p);
  out += "</g>\n";

  if (!snap.radar_cells.empty()) {
    const std::string cs = textio::fixed(meta.cell_size, 2);
    open_layer(out, "radar", "fill=\"#7f8c8d\"");
    for (auto idx : snap.radar_cells) {
      const auto corner = meta.corner(meta.coord(idx).col, meta.coord(idx).row + 1);
      out += "<rect x=\"" + c.x(corner.easting) + "\" y=\"" + c.y(corner.northing) + "\" width=\"" + cs +
             "\" height=\"" + cs + "\"/>\n";
    }
    out += "</g>\n";
  }

  if (!snap.candidates.empty()) {
    open_layer(out, "targets", "fill=\"#e74c3c\" stroke=\"#c0392b\" stroke-width=\"" + sw + "\"");
    for (const auto& t : snap.candidates) polygon(out, c, t.polygon);
    out += "</g>\n";
  }

  if (!snap.projections.empty()) {
    open_layer(out, "projections", "fill=\"#3498db\" fill-opacity=\"0.35\" stroke=\"#2471a3\" stroke-width=\"" + sw + "\"");
    for (const auto& p : snap.projections) polygon(out, c, p.polygon);
    out += "</g>\n";
  }

  if (!snap.tracks.empty()) {
    open_layer(out, "tracks", "fill=\"none\" stroke=\"#8e44ad\" stroke-width=\"" + sw + "\"");
    for (const auto& v : snap.tracks) {
      std::vector<geometry::UtmPoint> trail;
      for (const auto& h : v.track.history) trail.push_back(h.p);
      out += "<polyline class=\"trail\" data-id=\"" + std::to_string(v.track.id) + "\" points=\"" + c.points(trail) + "\"/>\n";
    }
    out += "</g>\n";
  }

  if (!snap.plan.waypoints.points.empty()) {
    open_layer(out, "plan", "fill=\"none\" stroke=\"#f1c40f\" stroke-width=\"" + textio::fixed(2 * stroke, 2) + "\"");
    out += "<polyline points=\"" + c.points(snap.plan.waypoints.points) + "\"/>\n";
    out += "</g>\n";
    out += "<circle id=\"ownship\" cx=\"" + c.x(snap.ownship.position.easting) + "\" cy=\"" +
           c.y(snap.ownship.position.northing) + "\" r=\"" + textio::fixed(4 * stroke, 2) + "\" fill=\"#27ae60\"/>\n";
  }

  out += "</svg>\n";
  return out;
}

}  // namespace asvnav::svg
