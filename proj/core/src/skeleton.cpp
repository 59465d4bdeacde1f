#include <deque>

#include "mdnuc/error.hpp"
#include "mdnuc/planner.hpp"

namespace mdnuc {

double CoveragePath::length() const {
  double total = 0.0;
  const std::size_t n = waypoints.size();
  for (std::size_t i = 0; i + 1 < n; ++i) total += distance(waypoints[i].position, waypoints[i + 1].position);
  if (closed && n > 1) total += distance(waypoints[n - 1].position, waypoints[0].position);
  return total;
}

void CoveragePath::update_switches() {
  angle_switches.clear();
  const std::size_t n = waypoints.size();
  if (n == 0) return;
  if (closed && n > 1 && waypoints[0].theta_deg != waypoints[n - 1].theta_deg) angle_switches.push_back(0);
  for (std::size_t i = 1; i < n; ++i) {
    if (waypoints[i].theta_deg != waypoints[i - 1].theta_deg) angle_switches.push_back(i);
  }
}

SkeletonTree build_skeleton(const DualGraph& dual, std::span<const char> blocked, FaceId seed,
                            std::span<const RegionId> face_region) {
  const std::size_t n = dual.node_count();
  if (seed >= n) throw ParameterError("seed face out of range");
  SkeletonTree tree;
  tree.root = seed;
  tree.parent.assign(n, kNoFace);
  std::vector<char> seen(n, 0);
  std::deque<FaceId> queue{seed};
  seen[seed] = 1;
  std::size_t max_edge = 0;
  while (!queue.empty()) {
    const FaceId f = queue.front();
    queue.pop_front();
    for (const auto& link : dual.links(f)) {
      if (!blocked.empty() && blocked[link.edge]) continue;
      if (seen[link.to]) continue;
      seen[link.to] = 1;
      tree.parent[link.to] = f;
      tree.edges.push_back(link.edge);
      max_edge = std::max<std::size_t>(max_edge, link.edge);
      queue.push_back(link.to);
    }
  }
  for (FaceId f = 0; f < n; ++f) {
    if (seen[f]) continue;
    std::string what = "unreachable region: face " + std::to_string(f);
    long region = -1;
    if (!face_region.empty()) {
      region = static_cast<long>(face_region[f]);
      what += " in region " + std::to_string(region) + " cannot be reached; region " + std::to_string(region) +
              " has no usable gate";
    } else {
      what += " cannot be reached from face " + std::to_string(seed);
    }
    throw UnreachableRegionError(what, f, region);
  }
  tree.is_tree_edge.assign(max_edge + 1, 0);
  for (const EdgeId e : tree.edges) tree.is_tree_edge[e] = 1;
  return tree;
}

std::vector<QuadRef> circumnavigate_order(const TriMesh& mesh, const SkeletonTree& tree) {
  const std::size_t nf = mesh.face_count();
  if (tree.face_count() != nf) throw ParameterError("skeleton does not match the mesh");
  const auto in_tree = [&](EdgeId e) { return e < tree.is_tree_edge.size() && tree.is_tree_edge[e]; };

  std::vector<QuadRef> order;
  order.reserve(3 * nf);
  std::vector<char> visited(3 * nf, 0);
  QuadRef cur{tree.root, 0};
  for (std::size_t step = 0; step < 3 * nf; ++step) {
    char& mark = visited[3 * cur.face + static_cast<std::size_t>(cur.corner)];
    if (mark) throw std::logic_error("circumnavigation revisited a quad; skeleton is not a tree");
    mark = 1;
    order.push_back(cur);
    const EdgeId e = mesh.face_edges(cur.face)[static_cast<std::size_t>(cur.corner)];
    if (in_tree(e)) {
      // Cross to the quad facing the first half of the edge.
      const FaceId next = mesh.neighbor(cur.face, cur.corner);
      const VertexId v = mesh.faces()[cur.face][static_cast<std::size_t>(cur.corner)];
      cur = {next, mesh.local_vertex(next, v)};
    } else {
      cur = {cur.face, (cur.corner + 1) % 3};
    }
  }
  if (cur.face != tree.root || cur.corner != 0) {
    throw std::logic_error("circumnavigation did not close; skeleton does not span the mesh");
  }
  return order;
}

CoveragePath circumnavigate(const TriMesh& mesh, const SkeletonTree& tree, std::span<const FaceQuads> quads) {
  CoveragePath path;
  path.closed = true;
  for (const QuadRef q : circumnavigate_order(mesh, tree)) {
    path.waypoints.push_back({quads[q.face].quads[static_cast<std::size_t>(q.corner)].centroid, 0.0, 0});
  }
  return path;
}

namespace {


CoveragePath tour(const TriMesh& mesh, const SkeletonTree& tree, std::vector<FaceId>& faces) {
  const auto quads = subdivide_all(mesh);
  CoveragePath path;
  path.closed = true;
  faces.clear();
  for (const QuadRef q : circumnavigate_order(mesh, tree)) {
    path.waypoints.push_back({quads[q.face].quads[static_cast<std::size_t>(q.corner)].centroid, 0.0, 0});
    faces.push_back(q.face);
  }
  return path;
}

}  // namespace

CoveragePath plan_nuc(const TriMesh& mesh, const DualGraph& dual, const SonarConfig& sonar, double global_mean_depth,
                      const NucOptions& options) {
  SkeletonTree tree = build_skeleton(dual, {}, options.seed_face);
  if (options.optimizer) options.optimizer(mesh, tree);
  std::vector<FaceId> faces;
  CoveragePath path = tour(mesh, tree, faces);
  const double theta = opening_angle(sonar.footprint(), global_mean_depth, sonar.theta_max_deg);
  for (auto& wp : path.waypoints) wp.theta_deg = theta;
  path.planner = "nuc";
  path.update_switches();
  return path;
}

CoveragePath plan_mdnuc(const TriMesh& mesh, const DualGraph& dual, const Partition& partition,
                        const SonarConfig& sonar, const NucOptions& options) {
  const auto blocked = partition.blocked_mask(mesh.edge_count());
  SkeletonTree tree = build_skeleton(dual, blocked, options.seed_face, partition.face_region);
  if (options.optimizer) options.optimizer(mesh, tree);
  std::vector<FaceId> faces;
  CoveragePath path = tour(mesh, tree, faces);
  std::vector<double> theta(partition.regions.size());
  for (const auto& r : partition.regions) {
    theta[r.id] = opening_angle(sonar.footprint(), r.mean_depth, sonar.theta_max_deg);
  }
  for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
    const RegionId r = partition.face_region[faces[i]];
    path.waypoints[i].region = r;
    path.waypoints[i].theta_deg = theta[r];
  }
  for (const auto& [pair, edge] : partition.gates) {
    if (edge >= tree.is_tree_edge.size() || !tree.is_tree_edge[edge]) {
      path.warnings.push_back("gate edge " + std::to_string(edge) + " between regions " + std::to_string(pair.first) +
                              " and " + std::to_string(pair.second) + " is unused by the skeleton");
    }
  }
  path.planner = "mdnuc";
  path.update_switches();
  return path;
}

}  // namespace mdnuc
