#pragma once

#include <string>
#include <vector>

#include <mdnuc/coverage.hpp>
#include <mdnuc/mesh.hpp>
#include <mdnuc/partition.hpp>
#include <mdnuc/planner.hpp>
#include <mdnuc/terrain.hpp>

#include "app/config.hpp"

namespace mdnuc::app {

Heightfield make_terrain(const RunConfig& config);
/// The configured ROI, or the whole terrain extent when none is given.
RoiPolygon make_roi(const RunConfig& config, const Heightfield& hf);

/// Terrain, ROI, mesh and depth partition shared by all planners of a run.
struct Workspace {
  RunConfig config;
  Heightfield terrain;
  RoiPolygon roi;
  RemeshResult remesh;
  DualGraph dual;
  Partition partition;
  double global_mean_depth = 0.0;

  const TriMesh& mesh() const { return remesh.mesh; }
  double footprint() const { return config.sonar.footprint(); }
};

Workspace prepare(const RunConfig& config);

bool planner_is_closed(const std::string& planner);

/// Paths of one planner; MDB&F yields one path per region.
std::vector<CoveragePath> plan(const Workspace& ws, const std::string& planner);

/// Summary JSON: mesh size, regions with their theta, gates, path length.
std::string plan_summary_json(const Workspace& ws, const std::string& planner,
                              const std::vector<CoveragePath>& paths);

struct SurveyOutcome {
  Report report;
  SimulationResult simulation;
};

SurveyOutcome survey(const Heightfield& hf, const RoiPolygon& roi, const RunConfig& config,
                     const std::string& planner, const std::vector<CoveragePath>& paths);

/// Concatenated CSV with one header; paths follow each other.
void write_paths_csv(std::ostream& out, const std::vector<CoveragePath>& paths);
/// Splits rows back into paths: a single closed path for NUC/MDNUC, one open
/// path per run of equal region ids otherwise.
std::vector<CoveragePath> read_paths_csv(std::istream& in, const std::string& planner);
/// A Feature for one path, a FeatureCollection for several.
void write_paths_geojson(std::ostream& out, const std::vector<CoveragePath>& paths);

}  // namespace mdnuc::app
