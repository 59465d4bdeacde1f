#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "mdnuc/geometry.hpp"
#include "mdnuc/terrain.hpp"

namespace mdnuc {

using FaceId = std::uint32_t;
using EdgeId = std::uint32_t;
using VertexId = std::uint32_t;

inline constexpr FaceId kNoFace = static_cast<FaceId>(-1);

struct MeshVertex {
  Vec2 position;
  double depth = 0.0;
};

struct MeshEdge {
  std::array<VertexId, 2> v{};
  /// faces[1] == kNoFace on the boundary.
  std::array<FaceId, 2> faces{kNoFace, kNoFace};

  bool is_boundary() const { return faces[1] == kNoFace; }
};

/// Planar triangle mesh with per-vertex depth. Faces are counter-clockwise.
/// Local edge k of a face joins its vertices k and k+1 (mod 3).
class TriMesh {
 public:
  /// Builds edges and caches. Throws MeshError when a face is degenerate or
  /// clockwise, or an edge is shared by more than two faces.
  TriMesh(std::vector<MeshVertex> vertices, std::vector<std::array<VertexId, 3>> faces);

  std::size_t face_count() const { return faces_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t vertex_count() const { return vertices_.size(); }

  std::span<const MeshVertex> vertices() const { return vertices_; }
  std::span<const std::array<VertexId, 3>> faces() const { return faces_; }
  std::span<const MeshEdge> edges() const { return edges_; }

  const std::array<EdgeId, 3>& face_edges(FaceId f) const { return face_edges_[f]; }
  Vec2 vertex_xy(VertexId v) const { return vertices_[v].position; }
  Vec2 corner(FaceId f, int k) const { return vertices_[faces_[f][static_cast<std::size_t>(k)]].position; }

  Vec2 face_centroid(FaceId f) const { return centroid_[f]; }
  double face_mean_depth(FaceId f) const { return mean_depth_[f]; }
  double face_area(FaceId f) const { return area_[f]; }

  /// Face across local edge k of f, or kNoFace.
  FaceId neighbor(FaceId f, int k) const;
  /// Local index (0..2) of edge e in face f; -1 when not incident.
  int local_edge(FaceId f, EdgeId e) const;
  /// Local index of vertex v in f; -1 when not incident.
  int local_vertex(FaceId f, VertexId v) const;

  double longest_edge(FaceId f) const;

 private:
  std::vector<MeshVertex> vertices_;
  std::vector<std::array<VertexId, 3>> faces_;
  std::vector<MeshEdge> edges_;
  std::vector<std::array<EdgeId, 3>> face_edges_;
  std::vector<Vec2> centroid_;
  std::vector<double> mean_depth_;
  std::vector<double> area_;
};

/// Footprint width covered by one swath: number of beams times resolution.
double footprint_target(int n_beams, double resolution);

enum class DiagonalPattern {
  /// Diagonal direction flips between neighboring squares.
  Checkerboard,
  /// Diagonal direction flips between lattice rows.
  AlternatingRows,
  /// Every square split along the same diagonal.
  Uniform,
};

struct RemeshOptions {
  /// Hypotenuse = 2 * w * (1 - shrink).
  double shrink = 0.05;
  DiagonalPattern diagonals = DiagonalPattern::Checkerboard;
};

struct RemeshResult {
  TriMesh mesh;
  double square_side = 0.0;
  double hypotenuse = 0.0;
  /// Lattice faces dropped because their centroid falls outside the ROI.
  std::size_t dropped_faces = 0;
};

/// Right-isosceles lattice remeshing of the ROI for footprint width w. The
/// lattice is anchored at the lower-left corner of the ROI bounding box; the
/// square diagonals follow options.diagonals. Vertex depths are sampled from
/// the heightfield, clamped to its extent.
RemeshResult remesh(const Heightfield& hf, const RoiPolygon& roi, double w, const RemeshOptions& options = {});

/// Face-adjacency graph. Links are interior mesh edges.
class DualGraph {
 public:
  struct Link {
    FaceId to;
    EdgeId edge;
  };

  explicit DualGraph(const TriMesh& mesh);

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t link_count() const { return link_count_; }
  /// Neighbors sorted by ascending face id.
  std::span<const Link> links(FaceId f) const { return adjacency_[f]; }

 private:
  std::vector<std::vector<Link>> adjacency_;
  std::size_t link_count_ = 0;
};

DualGraph build_dual(const TriMesh& mesh);

/// True when every face can reach face 0 through links not in `blocked`
/// (blocked is indexed by edge id; empty means nothing blocked).
bool is_connected(const DualGraph& dual, std::span<const char> blocked = {});

/// Quadrilateral at a face corner: (vertex, midpoint of the outgoing edge,
/// face centroid, midpoint of the incoming edge).
struct Quad {
  std::array<Vec2, 4> corners;
  Vec2 centroid;
  /// Local edge whose first half (from this vertex) the quad touches, and the
  /// local edge whose second half it touches.
  int outgoing_edge = 0;
  int incoming_edge = 0;

  double area() const;
};

struct FaceQuads {
  FaceId face = 0;
  std::array<Quad, 3> quads;
};

FaceQuads subdivide_quads(const TriMesh& mesh, FaceId face);
std::vector<FaceQuads> subdivide_all(const TriMesh& mesh);

/// OFF-style export: "OFF", counts line, "x y depth" vertex lines, "3 a b c"
/// face lines. Fixed 6-decimal formatting.
void write_off(std::ostream& out, const TriMesh& mesh);

}  // namespace mdnuc
