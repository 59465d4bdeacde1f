#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mdnuc/mesh.hpp"
#include "mdnuc/terrain.hpp"

namespace mdnuc {

using RegionId = std::uint32_t;
using RegionPair = std::pair<RegionId, RegionId>;  // first < second

struct RegionLabeling {
  /// Range index per face.
  std::vector<std::size_t> face_range;
  /// Region id per face.
  std::vector<RegionId> face_region;
  /// Range index per region.
  std::vector<std::size_t> region_range;
  std::vector<std::string> warnings;

  std::size_t region_count() const { return region_range.size(); }
};

/// Labels faces by depth range, then splits each range into connected
/// components. Region ids follow ascending smallest face id. Throws
/// ParameterError when a face depth lies outside every range.
RegionLabeling assign_regions(const TriMesh& mesh, const DualGraph& dual, std::span<const DepthRange> ranges);

using SharedEdges = std::map<RegionPair, std::vector<EdgeId>>;

SharedEdges find_shared_edges(const TriMesh& mesh, std::span<const RegionId> face_region);

enum class GateSlope {
  /// |difference of face mean depths| / distance between face centroids.
  CrossEdge,
  /// |difference of endpoint depths| / edge length.
  AlongEdge,
};

double edge_slope(const TriMesh& mesh, EdgeId e, GateSlope mode);

struct GateSelection {
  std::map<RegionPair, EdgeId> gates;
  std::vector<EdgeId> blocked;  // ascending
};

/// Lowest-slope shared edge per pair; ties go to the smaller edge id.
GateSelection select_gates(const TriMesh& mesh, const SharedEdges& shared, GateSlope mode = GateSlope::CrossEdge);

/// Area-weighted mean of face mean depths.
double region_mean_depth(const TriMesh& mesh, std::span<const FaceId> faces);

struct Region {
  RegionId id = 0;
  std::size_t range = 0;
  std::vector<FaceId> faces;  // ascending
  double mean_depth = 0.0;
  double area = 0.0;
};

class Partition {
 public:
  std::vector<DepthRange> ranges;
  std::vector<RegionId> face_region;
  std::vector<Region> regions;
  SharedEdges shared;
  std::map<RegionPair, EdgeId> gates;
  std::vector<EdgeId> blocked;
  std::vector<std::string> warnings;

  /// Blocked flag per mesh edge id.
  std::vector<char> blocked_mask(std::size_t edge_count) const;
  bool is_gate(EdgeId e) const;
};

struct PartitionOptions {
  GateSlope slope = GateSlope::CrossEdge;
};

/// Full pipeline: regions, shared edges, gates, region statistics. Asserts that
/// the dual graph stays connected once blocked links are removed.
Partition partition_mesh(const TriMesh& mesh, const DualGraph& dual, std::span<const DepthRange> ranges,
                         const PartitionOptions& options = {});

/// Partition with every face in region 0 and nothing blocked.
Partition single_region(const TriMesh& mesh);

/// Deterministic JSON text: ranges, face labels, regions, shared edges, gates,
/// blocked edges.
std::string partition_to_json(const Partition& partition);

}  // namespace mdnuc
