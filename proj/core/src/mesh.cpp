#include "mdnuc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <ostream>

#include "mdnuc/error.hpp"

namespace mdnuc {

TriMesh::TriMesh(std::vector<MeshVertex> vertices, std::vector<std::array<VertexId, 3>> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  const std::size_t nf = faces_.size();
  face_edges_.resize(nf);
  centroid_.resize(nf);
  mean_depth_.resize(nf);
  area_.resize(nf);

  std::map<std::pair<VertexId, VertexId>, EdgeId> lookup;
  for (FaceId f = 0; f < nf; ++f) {
    const auto& tri = faces_[f];
    for (const VertexId v : tri) {
      if (v >= vertices_.size()) throw MeshError("face " + std::to_string(f) + " references a missing vertex");
    }
    const Vec2 a = vertices_[tri[0]].position;
    const Vec2 b = vertices_[tri[1]].position;
    const Vec2 c = vertices_[tri[2]].position;
    const double twice = orient(a, b, c);
    if (!(twice > 0.0)) throw MeshError("face " + std::to_string(f) + " is degenerate or clockwise");
    area_[f] = 0.5 * twice;
    centroid_[f] = (a + b + c) / 3.0;
    mean_depth_[f] = (vertices_[tri[0]].depth + vertices_[tri[1]].depth + vertices_[tri[2]].depth) / 3.0;

    for (int k = 0; k < 3; ++k) {
      const VertexId u = tri[static_cast<std::size_t>(k)];
      const VertexId w = tri[static_cast<std::size_t>((k + 1) % 3)];
      const auto key = std::minmax(u, w);
      const auto it = lookup.find(key);
      if (it == lookup.end()) {
        const auto id = static_cast<EdgeId>(edges_.size());
        lookup.emplace(key, id);
        edges_.push_back({{u, w}, {f, kNoFace}});
        face_edges_[f][static_cast<std::size_t>(k)] = id;
        continue;
      }
      MeshEdge& e = edges_[it->second];
      if (!e.is_boundary()) {
        throw MeshError("edge (" + std::to_string(u) + ", " + std::to_string(w) + ") has more than two faces");
      }
      if (e.v[0] != w || e.v[1] != u) {
        throw MeshError("faces " + std::to_string(e.faces[0]) + " and " + std::to_string(f) +
                        " have inconsistent orientation");
      }
      e.faces[1] = f;
      face_edges_[f][static_cast<std::size_t>(k)] = it->second;
    }
  }
}

FaceId TriMesh::neighbor(FaceId f, int k) const {
  const MeshEdge& e = edges_[face_edges_[f][static_cast<std::size_t>(k)]];
  return e.faces[0] == f ? e.faces[1] : e.faces[0];
}

int TriMesh::local_edge(FaceId f, EdgeId e) const {
  for (int k = 0; k < 3; ++k) {
    if (face_edges_[f][static_cast<std::size_t>(k)] == e) return k;
  }
  return -1;
}

int TriMesh::local_vertex(FaceId f, VertexId v) const {
  for (int k = 0; k < 3; ++k) {
    if (faces_[f][static_cast<std::size_t>(k)] == v) return k;
  }
  return -1;
}

double TriMesh::longest_edge(FaceId f) const {
  double best = 0.0;
  for (int k = 0; k < 3; ++k) best = std::max(best, distance(corner(f, k), corner(f, (k + 1) % 3)));
  return best;
}

double footprint_target(int n_beams, double resolution) {
  if (n_beams < 2) throw ParameterError("n_beams must be >= 2");
  if (!(resolution > 0.0)) throw ParameterError("resolution must be > 0");
  return n_beams * resolution;
}

RemeshResult remesh(const Heightfield& hf, const RoiPolygon& roi, double w, const RemeshOptions& options) {
  if (!(w > 0.0)) throw ParameterError("footprint width must be > 0");
  if (!(options.shrink > 0.0 && options.shrink < 0.5)) throw ParameterError("shrink must lie in (0, 0.5)");
  require_roi_inside(hf, roi);

  const double hyp = 2.0 * w * (1.0 - options.shrink);
  const double side = hyp / std::sqrt(2.0);
  const Box2 box = roi.bounds();
  const auto cells = [&](double extent) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(extent / side - 1e-9)));
  };
  const std::size_t ni = cells(box.width());
  const std::size_t nj = cells(box.height());
  const std::size_t stride = ni + 1;
  const auto node = [&](std::size_t i, std::size_t j) { return static_cast<VertexId>(j * stride + i); };
  const auto position = [&](VertexId n) {
    return Vec2{box.lo.x + static_cast<double>(n % stride) * side, box.lo.y + static_cast<double>(n / stride) * side};
  };

  std::vector<std::array<VertexId, 3>> lattice_faces;
  std::size_t dropped = 0;
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t i = 0; i < ni; ++i) {
      const VertexId a = node(i, j);
      const VertexId b = node(i + 1, j);
      const VertexId c = node(i + 1, j + 1);
      const VertexId d = node(i, j + 1);
      std::array<std::array<VertexId, 3>, 2> tris;
      const bool rising = options.diagonals == DiagonalPattern::Uniform           ? true
                          : options.diagonals == DiagonalPattern::AlternatingRows ? j % 2 == 0
                                                                                  : (i + j) % 2 == 0;
      if (rising) {
        tris = {{{a, b, c}, {a, c, d}}};
      } else {
        tris = {{{a, b, d}, {b, c, d}}};
      }
      for (const auto& t : tris) {
        const Vec2 g = (position(t[0]) + position(t[1]) + position(t[2])) / 3.0;
        if (roi.contains(g)) {
          lattice_faces.push_back(t);
        } else {
          ++dropped;
        }
      }
    }
  }
  if (lattice_faces.empty()) {
    throw MeshError("ROI under-resolved: no face centroid lies inside the ROI; use a smaller footprint width");
  }

  // Keep only referenced lattice nodes, numbered in row-major order.
  std::vector<VertexId> remap((ni + 1) * (nj + 1), static_cast<VertexId>(-1));
  for (const auto& t : lattice_faces) {
    for (const VertexId v : t) remap[v] = 0;
  }
  std::vector<MeshVertex> vertices;
  const Vec2 lo = hf.origin();
  const Vec2 hi = hf.max_corner();
  for (VertexId n = 0; n < remap.size(); ++n) {
    if (remap[n] != 0) continue;
    remap[n] = static_cast<VertexId>(vertices.size());
    const Vec2 p = position(n);
    const Vec2 q{std::clamp(p.x, lo.x, hi.x), std::clamp(p.y, lo.y, hi.y)};
    vertices.push_back({p, hf.depth_at(q)});
  }
  for (auto& t : lattice_faces) {
    for (auto& v : t) v = remap[v];
  }

  RemeshResult result{TriMesh(std::move(vertices), std::move(lattice_faces)), side, hyp, dropped};
  if (!is_connected(build_dual(result.mesh))) {
    throw MeshError("fragmented ROI: the kept lattice faces form more than one connected piece");
  }
  return result;
}

DualGraph::DualGraph(const TriMesh& mesh) : adjacency_(mesh.face_count()) {
  const auto edges = mesh.edges();
  for (EdgeId e = 0; e < edges.size(); ++e) {
    if (edges[e].is_boundary()) continue;
    const FaceId a = edges[e].faces[0];
    const FaceId b = edges[e].faces[1];
    adjacency_[a].push_back({b, e});
    adjacency_[b].push_back({a, e});
    ++link_count_;
  }
  for (auto& links : adjacency_) {
    std::sort(links.begin(), links.end(), [](const Link& x, const Link& y) { return x.to < y.to; });
  }
}

DualGraph build_dual(const TriMesh& mesh) { return DualGraph(mesh); }

bool is_connected(const DualGraph& dual, std::span<const char> blocked) {
  const std::size_t n = dual.node_count();
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::deque<FaceId> queue{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const FaceId f = queue.front();
    queue.pop_front();
    for (const auto& link : dual.links(f)) {
      if (!blocked.empty() && blocked[link.edge]) continue;
      if (seen[link.to]) continue;
      seen[link.to] = 1;
      ++reached;
      queue.push_back(link.to);
    }
  }
  return reached == n;
}

double Quad::area() const { return signed_area(corners); }

FaceQuads subdivide_quads(const TriMesh& mesh, FaceId face) {
  if (face >= mesh.face_count()) throw ParameterError("face id out of range");
  FaceQuads out;
  out.face = face;
  const Vec2 g = mesh.face_centroid(face);
  for (int k = 0; k < 3; ++k) {
    const Vec2 v = mesh.corner(face, k);
    const Vec2 next = mesh.corner(face, (k + 1) % 3);
    const Vec2 prev = mesh.corner(face, (k + 2) % 3);
    Quad& q = out.quads[static_cast<std::size_t>(k)];
    q.corners = {v, midpoint(v, next), g, midpoint(prev, v)};
    q.centroid = (q.corners[0] + q.corners[1] + q.corners[2] + q.corners[3]) / 4.0;
    q.outgoing_edge = k;
    q.incoming_edge = (k + 2) % 3;
  }
  return out;
}

std::vector<FaceQuads> subdivide_all(const TriMesh& mesh) {
  std::vector<FaceQuads> out;
  out.reserve(mesh.face_count());
  for (FaceId f = 0; f < mesh.face_count(); ++f) out.push_back(subdivide_quads(mesh, f));
  return out;
}

void write_off(std::ostream& out, const TriMesh& mesh) {
  char buf[160];
  out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.face_count() << " 0\n";
  for (const auto& v : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "%.6f %.6f %.6f\n", v.position.x, v.position.y, v.depth);
    out << buf;
  }
  for (const auto& f : mesh.faces()) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

}  // namespace mdnuc
