#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <mdnuc/mesh.hpp>
#include <mdnuc/partition.hpp>
#include <mdnuc/planner.hpp>
#include <mdnuc/sonar.hpp>
#include <mdnuc/terrain.hpp>

namespace mdnuc::app {

/// Invalid or unparseable configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TerrainConfig {
  /// shaft | saddle | channel | file
  std::string source = "shaft";
  double cell_size = 1.0;
  ShaftParams shaft;
  SaddleParams saddle;
  ChannelParams channel;
  std::string file;
  /// esri | xyz
  std::string format = "esri";
  bool values_are_elevation = false;
};

struct MeshConfig {
  double shrink = 0.05;
  DiagonalPattern diagonals = DiagonalPattern::Checkerboard;
  FaceId seed_face = 0;
  GateSlope gate_slope = GateSlope::CrossEdge;
};

struct SurveyConfig {
  /// Evaluation grid resolution; 0 means the sonar resolution.
  double eval_resolution = 0.0;
  /// 0 means the evaluation resolution.
  double ping_spacing = 0.0;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
  bool sweep_turns = true;
  bool sweep_connectors = true;
};

struct RunConfig {
  std::string scenario = "custom";
  TerrainConfig terrain;
  /// ROI vertices; empty means the whole terrain extent.
  std::vector<Vec2> roi;
  /// Empty means two equal ranges over the mesh face depth span.
  std::vector<DepthRange> depth_ranges;
  MeshConfig mesh;
  SonarConfig sonar;
  std::vector<std::string> planners{"bf", "mdbf", "nuc", "mdnuc"};
  BfOptions bf;
  SurveyConfig survey;
  std::string output_dir = "out";

  double eval_resolution() const { return survey.eval_resolution > 0.0 ? survey.eval_resolution : sonar.resolution; }
};

const std::vector<std::string>& preset_names();
/// Throws ConfigError listing the valid names.
RunConfig preset(const std::string& name);

const std::vector<std::string>& planner_names();

/// Strict parse: unknown keys and wrong types are rejected. Missing keys keep
/// their defaults.
RunConfig config_from_json(const std::string& text);
/// Canonical form: every field, fixed key order, 2-space indent.
std::string config_to_json(const RunConfig& config);
/// Digest of the canonical form without output_dir.
std::string config_hash(const RunConfig& config);

RunConfig load_config(const std::string& path);

/// Semantic checks beyond parsing (planner names, positive sizes, ...).
void validate(const RunConfig& config);

/// Parses "a,b,c" breakpoints into contiguous ranges [a,b), [b,c].
std::vector<DepthRange> parse_breakpoints(const std::string& text);

std::string to_string(DiagonalPattern p);
DiagonalPattern diagonals_from_string(const std::string& s);

}  // namespace mdnuc::app
