#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mdnuc/mesh.hpp"
#include "mdnuc/partition.hpp"
#include "mdnuc/sonar.hpp"
#include "mdnuc/terrain.hpp"

namespace mdnuc {

struct Waypoint {
  Vec2 position;
  double theta_deg = 0.0;
  RegionId region = 0;
};

struct CoveragePath {
  std::vector<Waypoint> waypoints;
  bool closed = false;
  /// Indices i where theta differs from the previous waypoint. For closed
  /// paths index 0 compares against the last waypoint.
  std::vector<std::size_t> angle_switches;
  /// connector[i] marks segment i -> i+1 (mod size for closed paths) as a
  /// transit leg between survey tracks. Empty when the path has none.
  std::vector<char> connector;
  std::string planner;
  std::vector<std::string> warnings;

  std::size_t size() const { return waypoints.size(); }
  /// Sum of segment lengths, including the closing segment of a closed path.
  double length() const;
  /// Recomputes angle_switches from the waypoint angles.
  void update_switches();
};

/// Spanning tree over the face-adjacency graph.
struct SkeletonTree {
  FaceId root = 0;
  std::vector<FaceId> parent;  // kNoFace for the root
  std::vector<EdgeId> edges;   // in discovery order
  std::vector<char> is_tree_edge;  // indexed by mesh edge id

  std::size_t face_count() const { return parent.size(); }
};

/// Breadth-first spanning tree rooted at seed, expanding neighbors in ascending
/// face id and skipping blocked links. Throws UnreachableRegionError when some
/// face cannot be reached; `face_region` (optional) names its region.
SkeletonTree build_skeleton(const DualGraph& dual, std::span<const char> blocked, FaceId seed,
                            std::span<const RegionId> face_region = {});

/// Quad visited by a circumnavigation step.
struct QuadRef {
  FaceId face;
  int corner;
};

/// Closed walk around the tree through the three quads of every face,
/// counter-clockwise around each face centroid. Returns the visit order; the
/// geometry is quads[face].quads[corner].centroid.
std::vector<QuadRef> circumnavigate_order(const TriMesh& mesh, const SkeletonTree& tree);

/// circumnavigate_order mapped to quad centroids; theta left at zero.
CoveragePath circumnavigate(const TriMesh& mesh, const SkeletonTree& tree, std::span<const FaceQuads> quads);

/// Post-processing hook applied to NUC/MDNUC skeletons before circumnavigation.
/// The default leaves the tree unchanged.
using SkeletonOptimizer = std::function<void(const TriMesh&, SkeletonTree&)>;

struct NucOptions {
  FaceId seed_face = 0;
  SkeletonOptimizer optimizer;
};

CoveragePath plan_nuc(const TriMesh& mesh, const DualGraph& dual, const SonarConfig& sonar, double global_mean_depth,
                      const NucOptions& options = {});

CoveragePath plan_mdnuc(const TriMesh& mesh, const DualGraph& dual, const Partition& partition,
                        const SonarConfig& sonar, const NucOptions& options = {});

/// Polygon with holes given as closed rings (no repeated closing vertex).
struct Outline {
  std::vector<std::vector<Vec2>> rings;

  bool contains(Vec2 p) const { return point_in_rings(rings, p); }
  Box2 bounds() const;
  double area() const;
};

Outline outline_of(const RoiPolygon& roi);

/// Boundary of the union of the given faces. Interior edges cancel and
/// collinear vertices are removed.
Outline region_outline(const TriMesh& mesh, std::span<const FaceId> faces);

enum class SweepAxis { Auto, X, Y };

struct BfOptions {
  SweepAxis axis = SweepAxis::Auto;
  /// Join consecutive track pieces along the outline boundary when possible.
  bool boundary_connectors = true;
};

/// Back-and-forth survey of an outline: tracks parallel to the sweep axis,
/// spaced w apart, the first inset w/2. Region id 0, constant theta.
CoveragePath plan_bf(const Outline& outline, double w, double theta_deg, const BfOptions& options = {});
CoveragePath plan_bf(const RoiPolygon& roi, double w, const SonarConfig& sonar, double global_mean_depth,
                     const BfOptions& options = {});

/// One back-and-forth path per region, each with the region's own theta.
std::vector<CoveragePath> plan_mdbf(const Partition& partition, const TriMesh& mesh, double w,
                                    const SonarConfig& sonar, const BfOptions& options = {});

/// Splits every segment into ceil(len / step) equal pieces. Corners are kept;
/// a sample inherits theta and region from the segment's start waypoint.
CoveragePath resample(const CoveragePath& path, double step);

/// CSV with header x,y,theta_deg,region_id,switch_flag and 6-decimal fields.
void write_path_csv(std::ostream& out, const CoveragePath& path);
CoveragePath read_path_csv(std::istream& in, bool closed);
/// GeoJSON Feature with a LineString and per-point properties.
void write_path_geojson(std::ostream& out, const CoveragePath& path);

}  // namespace mdnuc
