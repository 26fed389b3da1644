#include "logio.hpp"

#include <fstream>
#include <limits>
#include <string>

#include "error.hpp"
#include "textio.hpp"

namespace asvnav::logio {

Log parse_log(std::istream& in, double max_range) {
  Log log;
  std::string raw;
  int line_no = 0;
  double last_t = -std::numeric_limits<double>::infinity();
  auto fail = [&](const std::string& why) { throw Error(ErrorCode::LogParse, why, line_no); };
  auto num = [&](std::string_view tok, const char* what) {
    double v = 0.0;
    if (!textio::parse_double(tok, v)) fail(std::string("malformed ") + what + " '" + std::string(tok) + "'");
    return v;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const auto body = textio::trim(raw);
    if (body.empty()) continue;
    const auto f = textio::split(body, ',');
    const auto kind = textio::trim(f[0]);
    double t = 0.0;
    if (kind == "SCAN") {
      if (f.size() != 3 + radar::kSamplesPerLine) {
        fail("SCAN expects " + std::to_string(2 + radar::kSamplesPerLine) + " fields, got " + std::to_string(f.size() - 1));
      }
      radar::ScanLine s;
      t = s.timestamp = num(f[1], "timestamp");
      s.bearing = num(f[2], "bearing");
      if (s.bearing < 0.0 || s.bearing >= geometry::kTwoPi) fail("bearing outside [0, 2pi)");
      s.max_range = max_range;
      for (std::size_t k = 0; k < radar::kSamplesPerLine; ++k) {
        long long v = 0;
        if (!textio::parse_int(f[3 + k], v)) fail("malformed intensity '" + std::string(f[3 + k]) + "'");
        if (v < 0 || v > 255) fail("intensity " + std::to_string(v) + " outside 0-255");
        s.samples[k] = static_cast<std::uint8_t>(v);
      }
      log.scans.push_back(s);
    } else if (kind == "ODOM") {
      if (f.size() != 6) fail("ODOM expects 5 fields, got " + std::to_string(f.size() - 1));
      radar::OwnshipState o;
      t = o.timestamp = num(f[1], "timestamp");
      o.position = {num(f[2], "easting"), num(f[3], "northing")};
      o.heading = geometry::wrap_two_pi(num(f[4], "heading"));
      o.speed = num(f[5], "speed");
      if (o.speed < 0.0) fail("negative speed");
      log.odometry.push_back(o);
    } else {
      fail("unknown record '" + std::string(kind) + "'");
    }
    if (t < last_t) fail("timestamp goes backwards");
    last_t = t;
  }
  return log;
}

Log load_log(const std::filesystem::path& path, double max_range) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open log " + path.string());
  return parse_log(in, max_range);
}

void write_scan(std::ostream& out, const radar::ScanLine& line) {
  std::string s = "SCAN," + textio::exact(line.timestamp) + "," + textio::exact(line.bearing);
  for (auto v : line.samples) {
    s += ',';
    s += std::to_string(v);
  }
  s += '\n';
  out << s;
}

void write_odom(std::ostream& out, const radar::OwnshipState& state) {
  out << "ODOM," << textio::exact(state.timestamp) << ',' << textio::exact(state.position.easting) << ','
      << textio::exact(state.position.northing) << ',' << textio::exact(state.heading) << ','
      << textio::exact(state.speed) << '\n';
}

}  // namespace asvnav::logio
