#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "radar.hpp"

namespace asvnav::logio {

// SCAN,<t>,<bearing_rad>,<i0>,...,<i511>
// ODOM,<t>,<easting>,<northing>,<heading_rad>,<speed>
struct Log {
  std::vector<radar::ScanLine> scans;
  std::vector<radar::OwnshipState> odometry;
};

// Scan max_range is not in the record, so it is supplied here.
// Throws Error(LogParse) with the line number.
Log parse_log(std::istream& in, double max_range);
Log load_log(const std::filesystem::path& path, double max_range);

void write_scan(std::ostream& out, const radar::ScanLine& line);
void write_odom(std::ostream& out, const radar::OwnshipState& state);

}  // namespace asvnav::logio
