#include "mdnuc/partition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "mdnuc/error.hpp"

namespace mdnuc {

namespace {

std::size_t range_of(double depth, std::span<const DepthRange> ranges) {
  for (std::size_t k = 0; k < ranges.size(); ++k) {
    const bool last = k + 1 == ranges.size();
    if (depth >= ranges[k].d_min && (depth < ranges[k].d_max || (last && depth <= ranges[k].d_max))) return k;
  }
  return ranges.size();
}

}  // namespace

RegionLabeling assign_regions(const TriMesh& mesh, const DualGraph& dual, std::span<const DepthRange> ranges) {
  validate_ranges(ranges);
  const std::size_t nf = mesh.face_count();
  RegionLabeling out;
  out.face_range.resize(nf);
  for (FaceId f = 0; f < nf; ++f) {
    const double d = mesh.face_mean_depth(f);
    const std::size_t k = range_of(d, ranges);
    if (k == ranges.size()) {
      throw ParameterError("uncovered depth: face " + std::to_string(f) + " has mean depth " + std::to_string(d) +
                           " outside every depth range");
    }
    out.face_range[f] = k;
  }

  constexpr auto unset = std::numeric_limits<RegionId>::max();
  out.face_region.assign(nf, unset);
  std::deque<FaceId> queue;
  for (FaceId seed = 0; seed < nf; ++seed) {
    if (out.face_region[seed] != unset) continue;
    const auto id = static_cast<RegionId>(out.region_range.size());
    const std::size_t range = out.face_range[seed];
    out.region_range.push_back(range);
    out.face_region[seed] = id;
    queue.push_back(seed);
    while (!queue.empty()) {
      const FaceId f = queue.front();
      queue.pop_front();
      for (const auto& link : dual.links(f)) {
        if (out.face_region[link.to] != unset || out.face_range[link.to] != range) continue;
        out.face_region[link.to] = id;
        queue.push_back(link.to);
      }
    }
  }

  std::vector<char> populated(ranges.size(), 0);
  for (const std::size_t k : out.region_range) populated[k] = 1;
  for (std::size_t k = 0; k < ranges.size(); ++k) {
    if (!populated[k]) {
      out.warnings.push_back("depth range " + std::to_string(k) + " [" + std::to_string(ranges[k].d_min) + ", " +
                             std::to_string(ranges[k].d_max) + "] contains no face");
    }
  }
  return out;
}

SharedEdges find_shared_edges(const TriMesh& mesh, std::span<const RegionId> face_region) {
  SharedEdges shared;
  const auto edges = mesh.edges();
  for (EdgeId e = 0; e < edges.size(); ++e) {
    if (edges[e].is_boundary()) continue;
    const RegionId a = face_region[edges[e].faces[0]];
    const RegionId b = face_region[edges[e].faces[1]];
    if (a == b) continue;
    shared[std::minmax(a, b)].push_back(e);
  }
  return shared;
}

double edge_slope(const TriMesh& mesh, EdgeId e, GateSlope mode) {
  const MeshEdge& edge = mesh.edges()[e];
  if (mode == GateSlope::AlongEdge) {
    const auto& a = mesh.vertices()[edge.v[0]];
    const auto& b = mesh.vertices()[edge.v[1]];
    return std::abs(a.depth - b.depth) / distance(a.position, b.position);
  }
  if (edge.is_boundary()) throw ParameterError("cross-edge slope needs an interior edge");
  const FaceId fa = edge.faces[0];
  const FaceId fb = edge.faces[1];
  return std::abs(mesh.face_mean_depth(fa) - mesh.face_mean_depth(fb)) /
         distance(mesh.face_centroid(fa), mesh.face_centroid(fb));
}

constexpr double kSlopeTie = 1e-12;

GateSelection select_gates(const TriMesh& mesh, const SharedEdges& shared, GateSlope mode) {
  GateSelection out;
  for (const auto& [pair, edges] : shared) {
    if (edges.empty()) throw ParameterError("region pair without shared edges");
    EdgeId best = edges.front();
    double best_slope = std::numeric_limits<double>::infinity();
    for (const EdgeId e : edges) {
      const double s = edge_slope(mesh, e, mode);
      // Slopes within kSlopeTie count as equal so symmetric terrain picks by id.
      if (s < best_slope - kSlopeTie || (std::abs(s - best_slope) <= kSlopeTie && e < best)) {
        best_slope = s;
        best = e;
      }
    }
    out.gates.emplace(pair, best);
    for (const EdgeId e : edges) {
      if (e != best) out.blocked.push_back(e);
    }
  }
  std::sort(out.blocked.begin(), out.blocked.end());
  return out;
}

double region_mean_depth(const TriMesh& mesh, std::span<const FaceId> faces) {
  if (faces.empty()) throw ParameterError("region_mean_depth of an empty region");
  double weighted = 0.0;
  double area = 0.0;
  for (const FaceId f : faces) {
    weighted += mesh.face_area(f) * mesh.face_mean_depth(f);
    area += mesh.face_area(f);
  }
  return weighted / area;
}

std::vector<char> Partition::blocked_mask(std::size_t edge_count) const {
  std::vector<char> mask(edge_count, 0);
  for (const EdgeId e : blocked) mask[e] = 1;
  return mask;
}

bool Partition::is_gate(EdgeId e) const {
  return std::any_of(gates.begin(), gates.end(), [e](const auto& kv) { return kv.second == e; });
}

namespace {

void fill_regions(const TriMesh& mesh, Partition& p, std::span<const std::size_t> region_range) {
  p.regions.resize(region_range.size());
  for (RegionId r = 0; r < region_range.size(); ++r) {
    p.regions[r].id = r;
    p.regions[r].range = region_range[r];
  }
  for (FaceId f = 0; f < p.face_region.size(); ++f) p.regions[p.face_region[f]].faces.push_back(f);
  for (auto& region : p.regions) {
    region.mean_depth = region_mean_depth(mesh, region.faces);
    region.area = 0.0;
    for (const FaceId f : region.faces) region.area += mesh.face_area(f);
  }
}

}  // namespace

Partition partition_mesh(const TriMesh& mesh, const DualGraph& dual, std::span<const DepthRange> ranges,
                         const PartitionOptions& options) {
  RegionLabeling labels = assign_regions(mesh, dual, ranges);
  Partition p;
  p.ranges.assign(ranges.begin(), ranges.end());
  p.face_region = std::move(labels.face_region);
  p.warnings = std::move(labels.warnings);
  fill_regions(mesh, p, labels.region_range);
  p.shared = find_shared_edges(mesh, p.face_region);
  GateSelection gates = select_gates(mesh, p.shared, options.slope);
  p.gates = std::move(gates.gates);
  p.blocked = std::move(gates.blocked);
  if (is_connected(dual) && !is_connected(dual, p.blocked_mask(mesh.edge_count()))) {
    throw std::logic_error("gating disconnected the face-adjacency graph");
  }
  return p;
}

Partition single_region(const TriMesh& mesh) {
  Partition p;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (FaceId f = 0; f < mesh.face_count(); ++f) {
    lo = std::min(lo, mesh.face_mean_depth(f));
    hi = std::max(hi, mesh.face_mean_depth(f));
  }
  p.ranges.push_back({lo, hi > lo ? hi : std::nextafter(lo, std::numeric_limits<double>::infinity())});
  p.face_region.assign(mesh.face_count(), 0);
  const std::vector<std::size_t> region_range{0};
  fill_regions(mesh, p, region_range);
  return p;
}

std::string partition_to_json(const Partition& partition) {
  using nlohmann::ordered_json;
  ordered_json j;
  ordered_json ranges = ordered_json::array();
  for (const auto& r : partition.ranges) ranges.push_back({r.d_min, r.d_max});
  j["ranges"] = ranges;
  ordered_json regions = ordered_json::array();
  for (const auto& r : partition.regions) {
    regions.push_back({{"id", r.id},
                       {"range", r.range},
                       {"face_count", r.faces.size()},
                       {"area", r.area},
                       {"mean_depth", r.mean_depth}});
  }
  j["regions"] = regions;
  j["face_region"] = partition.face_region;
  ordered_json shared = ordered_json::array();
  for (const auto& [pair, edges] : partition.shared) {
    shared.push_back({{"regions", {pair.first, pair.second}}, {"edges", edges}});
  }
  j["shared"] = shared;
  ordered_json gates = ordered_json::array();
  for (const auto& [pair, edge] : partition.gates) {
    gates.push_back({{"regions", {pair.first, pair.second}}, {"edge", edge}});
  }
  j["gates"] = gates;
  j["blocked"] = partition.blocked;
  return j.dump(2) + "\n";
}

}  // namespace mdnuc
