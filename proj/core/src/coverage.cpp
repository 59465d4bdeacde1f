#include "mdnuc/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <tuple>

#include <json.hpp>

#include "mdnuc/error.hpp"

namespace mdnuc {

CoverageGrid::CoverageGrid(const Heightfield& hf, const RoiPolygon& roi, double resolution) : resolution_(resolution) {
  if (!(resolution > 0.0)) throw SimulationError("evaluation resolution must be > 0");
  const Box2 box = roi.bounds();
  const Vec2 o = hf.origin();
  origin_ = {o.x + std::floor((box.lo.x - o.x) / resolution) * resolution,
             o.y + std::floor((box.lo.y - o.y) / resolution) * resolution};
  nx_ = static_cast<std::size_t>(std::max(1.0, std::ceil((box.hi.x - origin_.x) / resolution)));
  ny_ = static_cast<std::size_t>(std::max(1.0, std::ceil((box.hi.y - origin_.y) / resolution)));
  if (nx_ * ny_ > 400'000'000ULL) throw SimulationError("coverage grid too large; use a coarser resolution");
  hits_.assign(nx_ * ny_, 0);
  mask_.assign(nx_ * ny_, 0);
  // Scanline fill: a cell is in the mask when its center is inside the ROI.
  const auto ring = roi.vertices();
  std::vector<double> xs;
  for (std::size_t j = 0; j < ny_; ++j) {
    const double y = origin_.y + (static_cast<double>(j) + 0.5) * resolution_;
    xs.clear();
    for (std::size_t k = 0; k < ring.size(); ++k) {
      const Vec2 a = ring[k];
      const Vec2 b = ring[(k + 1) % ring.size()];
      if ((a.y > y) == (b.y > y)) continue;
      xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      // Cell centers strictly left of the crossing are inside.
      const double first = std::ceil((xs[k] - origin_.x) / resolution_ - 0.5);
      const double last = std::ceil((xs[k + 1] - origin_.x) / resolution_ - 0.5) - 1.0;
      for (double i = std::max(first, 0.0); i <= std::min(last, static_cast<double>(nx_) - 1.0); i += 1.0) {
        const auto idx = j * nx_ + static_cast<std::size_t>(i);
        if (!mask_[idx]) {
          mask_[idx] = 1;
          ++mask_cells_;
        }
      }
    }
  }
}

Vec2 CoverageGrid::cell_center(std::size_t i, std::size_t j) const {
  return {origin_.x + (static_cast<double>(i) + 0.5) * resolution_,
          origin_.y + (static_cast<double>(j) + 0.5) * resolution_};
}

long CoverageGrid::cell_index(Vec2 p) const {
  const double fx = std::floor((p.x - origin_.x) / resolution_);
  const double fy = std::floor((p.y - origin_.y) / resolution_);
  if (fx < 0.0 || fy < 0.0 || fx >= static_cast<double>(nx_) || fy >= static_cast<double>(ny_)) return -1;
  return static_cast<long>(static_cast<std::size_t>(fy) * nx_ + static_cast<std::size_t>(fx));
}

void CoverageGrid::add_hit(Vec2 p) {
  const long k = cell_index(p);
  if (k >= 0) ++hits_[static_cast<std::size_t>(k)];
}

SimulationResult simulate(const Heightfield& hf, const RoiPolygon& roi, std::span<const CoveragePath> paths,
                          const SonarConfig& sonar, const SimulationOptions& options) {
  const double spacing = options.ping_spacing > 0.0 ? options.ping_spacing : options.eval_resolution;
  if (!(options.noise_std >= 0.0)) throw SimulationError("noise_std must be >= 0");
  SimulationResult result{CoverageGrid(hf, roi, options.eval_resolution)};
  const RayCaster caster(hf, sonar);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> noise(0.0, options.noise_std > 0.0 ? options.noise_std : 1.0);

  for (const auto& path : paths) {
    if (path.waypoints.size() < 2) throw SimulationError("cannot simulate an empty path");
    const CoveragePath samples = resample(path, spacing);
    const auto& wps = samples.waypoints;
    const std::size_t n = wps.size();
    for (std::size_t i = 0; i < n; ++i) {
      const bool has_next = samples.closed || i + 1 < n;
      const std::size_t next = (i + 1) % n;
      if (!options.sweep_connectors && !samples.connector.empty()) {
        const std::size_t seg = has_next ? i : i - 1;
        if (samples.connector[seg]) continue;
      }
      const Vec2 heading = has_next ? wps[next].position - wps[i].position : wps[i].position - wps[i - 1].position;
      Vec2 at = wps[i].position;
      if (options.noise_std > 0.0) at = at + perp_left(heading / norm(heading)) * noise(rng);
      if (!hf.contains(at)) {
        ++result.skipped_pings;
        continue;
      }
      const auto fire = [&](Vec2 dir) {
        const Ping p = ping(caster, at, dir, wps[i].theta_deg);
        ++result.pings;
        result.hits += p.hits.size();
        for (const Vec2 h : p.hits) result.grid.add_hit(h);
      };
      fire(heading);
      // At a corner the heading rotates from the incoming to the outgoing
      // direction; extra pings keep the outer beam spacing near ping_spacing.
      const bool has_prev = samples.closed || i > 0;
      if (options.sweep_turns && has_next && has_prev) {
        const Vec2 incoming = wps[i].position - wps[(i + n - 1) % n].position;
        const double turn = std::atan2(cross(incoming, heading), dot(incoming, heading));
        if (std::abs(turn) > 1e-9) {
          const double half = hf.max_depth() * std::tan(0.5 * wps[i].theta_deg * std::numbers::pi / 180.0);
          const auto steps = static_cast<std::size_t>(std::ceil(std::abs(turn) * half / spacing));
          const double a0 = std::atan2(incoming.y, incoming.x);
          for (std::size_t k = 1; k < steps; ++k) {
            const double a = a0 + turn * static_cast<double>(k) / static_cast<double>(steps);
            fire({std::cos(a), std::sin(a)});
          }
        }
      }
    }
  }
  return result;
}

Report evaluate(const CoverageGrid& grid, std::span<const CoveragePath> paths) {
  if (grid.mask_cells() == 0) throw SimulationError("coverage mask is empty");
  Report r;
  r.resolution = grid.resolution();
  std::size_t total = 0;
  const auto hits = grid.hits();
  const auto mask = grid.mask();
  for (std::size_t k = 0; k < hits.size(); ++k) {
    if (!mask[k]) continue;
    if (hits[k] > 0) ++r.covered_cells;
    total += hits[k];
  }
  r.mask_cells = grid.mask_cells();
  r.coverage_pct = 100.0 * static_cast<double>(r.covered_cells) / static_cast<double>(r.mask_cells);
  r.redundancy = r.covered_cells > 0 ? static_cast<double>(total) / static_cast<double>(r.covered_cells) : 0.0;
  for (const auto& p : paths) {
    r.path_length += p.length();
    r.angle_switch_count += p.angle_switches.size();
    if (r.planner.empty()) r.planner = p.planner;
  }
  return r;
}

std::string report_to_json(const Report& report) {
  nlohmann::ordered_json j = {
      {"scenario", report.scenario},
      {"planner", report.planner},
      {"resolution", report.resolution},
      {"coverage_pct", report.coverage_pct},
      {"covered_cells", report.covered_cells},
      {"mask_cells", report.mask_cells},
      {"path_length", report.path_length},
      {"angle_switch_count", report.angle_switch_count},
      {"redundancy", report.redundancy},
      {"pings", report.pings},
      {"skipped_pings", report.skipped_pings},
      {"config_hash", report.config_hash},
  };
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report is not valid JSON: ") + e.what(), 0);
  }
  try {
    Report r;
    r.scenario = j.at("scenario").get<std::string>();
    r.planner = j.at("planner").get<std::string>();
    r.resolution = j.at("resolution").get<double>();
    r.coverage_pct = j.at("coverage_pct").get<double>();
    r.covered_cells = j.value("covered_cells", std::size_t{0});
    r.mask_cells = j.value("mask_cells", std::size_t{0});
    r.path_length = j.value("path_length", 0.0);
    r.angle_switch_count = j.value("angle_switch_count", std::size_t{0});
    r.redundancy = j.value("redundancy", 0.0);
    r.pings = j.value("pings", std::size_t{0});
    r.skipped_pings = j.value("skipped_pings", std::size_t{0});
    r.config_hash = j.value("config_hash", std::string{});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report is missing a field: ") + e.what(), 0);
  }
}

void write_report_text(std::ostream& out, const Report& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "scenario      %s\nplanner       %s\nresolution    %.2f m\ncoverage      %.2f %%\n"
                "path length   %.1f m\nangle switch  %zu\nredundancy    %.3f\npings         %zu (%zu skipped)\n"
                "wall time     %.2f s\n",
                r.scenario.c_str(), r.planner.c_str(), r.resolution, r.coverage_pct, r.path_length,
                r.angle_switch_count, r.redundancy, r.pings, r.skipped_pings, r.wall_time);
  out << buf;
}

namespace {

double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

ComparisonTable compare(std::span<const Report> reports) {
  if (reports.empty()) throw ParameterError("compare needs at least one report");
  ComparisonTable table;
  const std::vector<std::string> canonical{"bf", "mdbf", "nuc", "mdnuc"};
  for (const auto& name : canonical) {
    if (std::any_of(reports.begin(), reports.end(), [&](const Report& r) { return r.planner == name; })) {
      table.planners.push_back(name);
    }
  }
  for (const auto& r : reports) {
    if (std::find(table.planners.begin(), table.planners.end(), r.planner) == table.planners.end()) {
      table.planners.push_back(r.planner);
    }
  }
  std::map<std::pair<std::string, double>, std::vector<double>> rows;
  for (const auto& r : reports) {
    auto& row = rows[{r.scenario, r.resolution}];
    row.resize(table.planners.size(), std::nan(""));
    const auto col = std::find(table.planners.begin(), table.planners.end(), r.planner) - table.planners.begin();
    auto& cell = row[static_cast<std::size_t>(col)];
    if (!std::isnan(cell)) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%g", r.resolution * 100.0);
      table.warnings.push_back("duplicate report for " + r.scenario + " at " + buf + " cm, planner " + r.planner +
                               "; keeping the later one");
    }
    cell = r.coverage_pct;
  }
  for (auto& [key, values] : rows) {
    ComparisonRow row{key.first, key.second, values, std::vector<char>(values.size(), 0)};
    double best = -1.0;
    for (const double v : values) {
      if (!std::isnan(v)) best = std::max(best, round2(v));
    }
    for (std::size_t k = 0; k < values.size(); ++k) row.best[k] = !std::isnan(values[k]) && round2(values[k]) == best;
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_comparison_csv(std::ostream& out, const ComparisonTable& table) {
  out << "scenario,resolution_cm";
  for (const auto& p : table.planners) out << ',' << p;
  out << '\n';
  char buf[64];
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof buf, "%g", row.resolution * 100.0);
    out << row.scenario << ',' << buf;
    for (const double v : row.coverage) {
      out << ',';
      if (!std::isnan(v)) {
        std::snprintf(buf, sizeof buf, "%.2f", v);
        out << buf;
      }
    }
    out << '\n';
  }
}

void write_comparison_text(std::ostream& out, const ComparisonTable& table) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"Seafloor", "Resolution"};
  for (const auto& p : table.planners) header.push_back(p == "bf" ? "B&F" : p == "mdbf" ? "MDB&F" : p == "nuc" ? "NUC" : p == "mdnuc" ? "MDNUC" : p);
  cells.push_back(header);
  char buf[64];
  for (const auto& row : table.rows) {
    std::vector<std::string> line{row.scenario};
    std::snprintf(buf, sizeof buf, "%g cm", row.resolution * 100.0);
    line.emplace_back(buf);
    for (std::size_t k = 0; k < row.coverage.size(); ++k) {
      if (std::isnan(row.coverage[k])) {
        line.emplace_back("-");
        continue;
      }
      std::snprintf(buf, sizeof buf, row.best[k] ? "**%.2f**" : "%.2f", row.coverage[k]);
      line.emplace_back(buf);
    }
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t k = 0; k < line.size(); ++k) width[k] = std::max(width[k], line[k].size());
  }
  for (const auto& line : cells) {
    for (std::size_t k = 0; k < line.size(); ++k) {
      if (k > 0) out << "  ";
      const std::size_t pad = width[k] - line[k].size();
      if (k < 2) {
        out << line[k] << std::string(pad, ' ');
      } else {
        out << std::string(pad, ' ') << line[k];
      }
    }
    out << '\n';
  }
}

void write_pgm(std::ostream& out, const CoverageGrid& grid) {
  out << "P2\n" << grid.nx() << ' ' << grid.ny() << "\n255\n";
  for (std::size_t row = 0; row < grid.ny(); ++row) {
    const std::size_t j = grid.ny() - 1 - row;
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      const unsigned v = grid.in_mask(i, j) ? std::min<std::uint32_t>(grid.hit_count(i, j), 255) : 0;
      out << v << ((i + 1) % 17 == 0 || i + 1 == grid.nx() ? '\n' : ' ');
    }
  }
}

std::string grid_to_rle_json(const CoverageGrid& grid) {
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  const auto hits = grid.hits();
  const auto mask = grid.mask();
  int state = -1;
  std::size_t count = 0;
  for (std::size_t k = 0; k < hits.size(); ++k) {
    const int s = !mask[k] ? 0 : hits[k] > 0 ? 2 : 1;
    if (s == state) {
      ++count;
      continue;
    }
    if (count > 0) runs.push_back({state, count});
    state = s;
    count = 1;
  }
  if (count > 0) runs.push_back({state, count});
  nlohmann::ordered_json j = {{"nx", grid.nx()},
                              {"ny", grid.ny()},
                              {"resolution", grid.resolution()},
                              {"origin", {grid.origin().x, grid.origin().y}},
                              {"states", "0 outside mask, 1 uncovered, 2 covered"},
                              {"runs", runs}};
  return j.dump() + "\n";
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mdnuc
