#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mdnuc/planner.hpp"
#include "mdnuc/sonar.hpp"
#include "mdnuc/terrain.hpp"

namespace mdnuc {

/// Hit-count raster aligned with the heightfield origin, covering the ROI
/// bounding box. A cell belongs to the mask when its center is inside the ROI.
class CoverageGrid {
 public:
  CoverageGrid(const Heightfield& hf, const RoiPolygon& roi, double resolution);

  double resolution() const { return resolution_; }
  Vec2 origin() const { return origin_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }

  std::span<const std::uint32_t> hits() const { return hits_; }
  std::span<std::uint32_t> hits() { return hits_; }
  std::span<const std::uint8_t> mask() const { return mask_; }

  std::uint32_t hit_count(std::size_t i, std::size_t j) const { return hits_[j * nx_ + i]; }
  bool in_mask(std::size_t i, std::size_t j) const { return mask_[j * nx_ + i] != 0; }
  Vec2 cell_center(std::size_t i, std::size_t j) const;

  /// Linear index of the cell containing p, or -1 outside the grid.
  long cell_index(Vec2 p) const;
  void add_hit(Vec2 p);

  std::size_t mask_cells() const { return mask_cells_; }

 private:
  double resolution_;
  Vec2 origin_;
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::vector<std::uint32_t> hits_;
  std::vector<std::uint8_t> mask_;
  std::size_t mask_cells_ = 0;
};

struct SimulationOptions {
  double eval_resolution = 0.10;
  /// Defaults to eval_resolution when <= 0.
  double ping_spacing = 0.0;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
  /// Whether the non-survey connectors of an open path are swept.
  bool sweep_connectors = true;
  /// Rotate the heading through each corner with extra pings instead of
  /// switching it instantaneously.
  bool sweep_turns = true;
};

struct SimulationResult {
  CoverageGrid grid;
  std::size_t pings = 0;
  std::size_t skipped_pings = 0;
  std::size_t hits = 0;
};

/// Resamples every path at ping_spacing and fires a ping at each sample with
/// the sample's theta. Throws SimulationError on an empty path.
SimulationResult simulate(const Heightfield& hf, const RoiPolygon& roi, std::span<const CoveragePath> paths,
                          const SonarConfig& sonar, const SimulationOptions& options);

struct Report {
  std::string scenario;
  std::string planner;
  double resolution = 0.0;
  double coverage_pct = 0.0;
  double path_length = 0.0;
  std::size_t angle_switch_count = 0;
  double redundancy = 0.0;
  std::size_t covered_cells = 0;
  std::size_t mask_cells = 0;
  std::size_t pings = 0;
  std::size_t skipped_pings = 0;
  std::string config_hash;
  /// Seconds; not part of the JSON form so reports stay reproducible.
  double wall_time = 0.0;
};

/// Throws SimulationError when the mask is empty.
Report evaluate(const CoverageGrid& grid, std::span<const CoveragePath> paths);

std::string report_to_json(const Report& report);
Report report_from_json(const std::string& text);
void write_report_text(std::ostream& out, const Report& report);

struct ComparisonRow {
  std::string scenario;
  double resolution = 0.0;
  /// Coverage per planner column; NaN when missing.
  std::vector<double> coverage;
  std::vector<char> best;
};

struct ComparisonTable {
  std::vector<std::string> planners;
  std::vector<ComparisonRow> rows;
  /// One entry per report that replaced an earlier one for the same cell.
  std::vector<std::string> warnings;
};

/// One row per (scenario, resolution), one column per planner in the canonical
/// order bf, mdbf, nuc, mdnuc followed by any others. Ties are all flagged.
/// When two reports share scenario, resolution and planner the later one wins.
ComparisonTable compare(std::span<const Report> reports);

void write_comparison_csv(std::ostream& out, const ComparisonTable& table);
/// Aligned plain text; best entries are wrapped in ** **.
void write_comparison_text(std::ostream& out, const ComparisonTable& table);

/// PGM (P2) with hit counts clamped to 255; cells outside the mask are 0.
void write_pgm(std::ostream& out, const CoverageGrid& grid);
/// Run-length JSON of covered/uncovered mask cells, row-major.
std::string grid_to_rle_json(const CoverageGrid& grid);

/// FNV-1a 64-bit hex digest.
std::string fnv1a_hex(std::string_view text);

}  // namespace mdnuc
