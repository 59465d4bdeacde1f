#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "mdnuc/error.hpp"
#include "mdnuc/planner.hpp"

namespace mdnuc {

namespace {

constexpr const char* kPathHeader = "x,y,theta_deg,region_id,switch_flag";

}  // namespace

void write_path_csv(std::ostream& out, const CoveragePath& path) {
  std::vector<char> flag(path.waypoints.size(), 0);
  for (const std::size_t i : path.angle_switches) flag[i] = 1;
  out << kPathHeader << '\n';
  char buf[160];
  for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
    const auto& wp = path.waypoints[i];
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%u,%d\n", wp.position.x, wp.position.y, wp.theta_deg,
                  static_cast<unsigned>(wp.region), flag[i]);
    out << buf;
  }
}

CoveragePath read_path_csv(std::istream& in, bool closed) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw FormatError("empty path file", 0);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kPathHeader) throw FormatError("unexpected path header '" + line + "'", 1);
  CoveragePath path;
  path.closed = closed;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double v[5];
    std::size_t start = 0;
    for (int k = 0; k < 5; ++k) {
      const std::size_t end = k < 4 ? line.find(',', start) : line.size();
      if (end == std::string::npos) throw FormatError("expected 5 comma-separated fields", line_no);
      const char* first = line.data() + start;
      const char* last = line.data() + end;
      const auto [ptr, ec] = std::from_chars(first, last, v[k]);
      if (ec != std::errc() || ptr != last) throw FormatError("non-numeric field", line_no);
      start = end + 1;
    }
    if (v[3] < 0 || v[3] != static_cast<double>(static_cast<RegionId>(v[3]))) {
      throw FormatError("region_id must be a non-negative integer", line_no);
    }
    path.waypoints.push_back({{v[0], v[1]}, v[2], static_cast<RegionId>(v[3])});
  }
  path.update_switches();
  return path;
}

void write_path_geojson(std::ostream& out, const CoveragePath& path) {
  using nlohmann::ordered_json;
  ordered_json coords = ordered_json::array();
  ordered_json theta = ordered_json::array();
  ordered_json region = ordered_json::array();
  for (const auto& wp : path.waypoints) {
    coords.push_back({wp.position.x, wp.position.y});
    theta.push_back(wp.theta_deg);
    region.push_back(wp.region);
  }
  if (path.closed && !path.waypoints.empty()) {
    coords.push_back({path.waypoints.front().position.x, path.waypoints.front().position.y});
  }
  ordered_json feature = {
      {"type", "Feature"},
      {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
      {"properties",
       {{"planner", path.planner},
        {"closed", path.closed},
        {"theta_deg", theta},
        {"region_id", region},
        {"angle_switches", path.angle_switches}}},
  };
  out << feature.dump(1) << '\n';
}

}  // namespace mdnuc
