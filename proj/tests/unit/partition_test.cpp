#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>

#include <mdnuc/error.hpp>
#include <mdnuc/partition.hpp>

#include "support/oracles.hpp"

using namespace mdnuc;

namespace {

// Unit-square lattice of ni x nj squares, every square split along its rising
// diagonal. Square (i, j) holds faces 2*(j*ni+i) (lower) and +1 (upper).
TriMesh lattice(std::size_t ni, std::size_t nj, const std::function<double(std::size_t, std::size_t)>& depth) {
  std::vector<MeshVertex> v;
  for (std::size_t j = 0; j <= nj; ++j) {
    for (std::size_t i = 0; i <= ni; ++i) v.push_back({{double(i), double(j)}, depth(i, j)});
  }
  const auto id = [&](std::size_t i, std::size_t j) { return VertexId(j * (ni + 1) + i); };
  std::vector<std::array<VertexId, 3>> f;
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t i = 0; i < ni; ++i) {
      f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return TriMesh(std::move(v), std::move(f));
}

// Three shallow pockets around a deep body: two corner pockets of two faces
// and one isolated face near the top-right corner.
TriMesh pockets() {
  const std::set<std::pair<std::size_t, std::size_t>> shallow{{0, 0}, {1, 0}, {0, 1}, {0, 3}, {0, 4},
                                                               {1, 4}, {4, 3}, {4, 4}};
  return lattice(4, 4, [&](std::size_t i, std::size_t j) { return shallow.contains({i, j}) ? 5.0 : 20.0; });
}

const std::vector<DepthRange> kTwoRanges{{0.0, 12.0}, {12.0, 25.0}};

double slope_oracle(const TriMesh& m, EdgeId e) {
  const auto& edge = m.edges()[e];
  const auto centroid_and_depth = [&](FaceId f) {
    Vec2 c{};
    double d = 0.0;
    for (const VertexId v : m.faces()[f]) {
      c = c + m.vertices()[v].position;
      d += m.vertices()[v].depth;
    }
    return std::pair{c / 3.0, d / 3.0};
  };
  const auto [ca, da] = centroid_and_depth(edge.faces[0]);
  const auto [cb, db] = centroid_and_depth(edge.faces[1]);
  return std::abs(da - db) / std::hypot(ca.x - cb.x, ca.y - cb.y);
}

}  // namespace

TEST(Assign, ConstantDepthSingleRegion) {
  const TriMesh m = lattice(3, 2, [](auto, auto) { return 14.6; });
  const DualGraph d(m);
  const std::vector<DepthRange> one{{10.0, 20.0}};
  const RegionLabeling l = assign_regions(m, d, one);
  EXPECT_EQ(l.region_count(), 1u);
  for (const auto r : l.face_region) EXPECT_EQ(r, 0u);
  EXPECT_TRUE(find_shared_edges(m, l.face_region).empty());
}

TEST(Assign, FourPocketRegions) {
  const TriMesh m = pockets();
  const DualGraph d(m);
  const RegionLabeling l = assign_regions(m, d, kTwoRanges);
  ASSERT_EQ(l.region_count(), 4u);
  EXPECT_EQ(l.region_range, (std::vector<std::size_t>{0, 1, 0, 0}));
  EXPECT_EQ(l.face_region[0], 0u);
  EXPECT_EQ(l.face_region[1], 0u);
  EXPECT_EQ(l.face_region[2], 1u);
  EXPECT_EQ(l.face_region[24], 2u);
  EXPECT_EQ(l.face_region[25], 2u);
  EXPECT_EQ(l.face_region[30], 3u);
  EXPECT_EQ(std::count(l.face_region.begin(), l.face_region.end(), 3u), 1);
  EXPECT_EQ(std::count(l.face_region.begin(), l.face_region.end(), 1u), 32 - 5);
  // The single face touches no other shallow face.
  for (const auto& link : d.links(30)) EXPECT_EQ(l.face_range[link.to], 1u);
}

TEST(Assign, BoundaryConventionAndErrors) {
  const TriMesh m = lattice(1, 1, [](auto, auto) { return 15.0; });
  const DualGraph d(m);
  const std::vector<DepthRange> split{{3.26, 15.0}, {15.0, 25.96}};
  EXPECT_EQ(assign_regions(m, d, split).face_range[0], 1u);
  const std::vector<DepthRange> closed{{3.26, 10.0}, {10.0, 15.0}};
  EXPECT_EQ(assign_regions(m, d, closed).face_range[0], 1u);
  const std::vector<DepthRange> shallow{{1.0, 10.0}};
  EXPECT_THROW(assign_regions(m, d, shallow), ParameterError);
}

TEST(Assign, EmptyRangeWarnsOnly) {
  const TriMesh m = lattice(2, 2, [](auto, auto) { return 8.0; });
  const DualGraph d(m);
  const std::vector<DepthRange> three{{0.0, 10.0}, {10.0, 20.0}, {20.0, 30.0}};
  const RegionLabeling l = assign_regions(m, d, three);
  EXPECT_EQ(l.region_count(), 1u);
  EXPECT_EQ(l.warnings.size(), 2u);
}

TEST(Shared, HalfPlaneSplitMatchesBruteForce) {
  const std::size_t ni = 6;
  const TriMesh m = lattice(ni, 5, [](auto, std::size_t j) { return j <= 2 ? 5.0 : 20.0; });
  const DualGraph d(m);
  const RegionLabeling l = assign_regions(m, d, kTwoRanges);
  ASSERT_EQ(l.region_count(), 2u);
  const SharedEdges shared = find_shared_edges(m, l.face_region);
  ASSERT_EQ(shared.size(), 1u);
  std::vector<EdgeId> brute;
  for (EdgeId e = 0; e < m.edge_count(); ++e) {
    const auto& edge = m.edges()[e];
    if (edge.faces[1] == kNoFace) continue;
    if (l.face_region[edge.faces[0]] != l.face_region[edge.faces[1]]) brute.push_back(e);
  }
  EXPECT_EQ(shared.begin()->second, brute);
  // Straddling row: ni diagonals plus ni - 1 verticals.
  EXPECT_EQ(brute.size(), 2 * ni - 1);
}

TEST(Gates, SingleSharedEdgeIsGate) {
  const TriMesh m = pockets();
  const DualGraph d(m);
  const Partition p = partition_mesh(m, d, kTwoRanges);
  ASSERT_EQ(p.gates.size(), 3u);
  for (const auto& [pair, edges] : p.shared) {
    ASSERT_TRUE(p.gates.contains(pair));
    EXPECT_NE(std::find(edges.begin(), edges.end(), p.gates.at(pair)), edges.end());
  }
  // blocked = shared minus gates
  std::vector<EdgeId> expect;
  for (const auto& [pair, edges] : p.shared) {
    for (const EdgeId e : edges) {
      if (e != p.gates.at(pair)) expect.push_back(e);
    }
  }
  std::sort(expect.begin(), expect.end());
  EXPECT_EQ(p.blocked, expect);
  EXPECT_TRUE(is_connected(d, p.blocked_mask(m.edge_count())));
}

TEST(Gates, TieGoesToSmallerEdgeId) {
  const TriMesh m = pockets();
  const DualGraph d(m);
  const Partition p = partition_mesh(m, d, kTwoRanges);
  const auto& edges = p.shared.at({0, 1});
  ASSERT_EQ(edges.size(), 2u);
  EXPECT_EQ(slope_oracle(m, edges[0]), slope_oracle(m, edges[1]));
  EXPECT_EQ(p.gates.at({0, 1}), std::min(edges[0], edges[1]));
  for (int k = 0; k < 3; ++k) EXPECT_EQ(partition_mesh(m, d, kTwoRanges).gates, p.gates);
}

TEST(Gates, IsolatedFacePicksLowerSlope) {
  const TriMesh m = pockets();
  const DualGraph d(m);
  const Partition p = partition_mesh(m, d, kTwoRanges);
  const EdgeId gate = p.gates.at({1, 3});
  const auto& edge = m.edges()[gate];
  const FaceId other = edge.faces[0] == 30 ? edge.faces[1] : edge.faces[0];
  EXPECT_EQ(other, 2u * (2 * 4 + 3) + 1);
}

TEST(Gates, ShaftExhaustiveArgmin) {
  ShaftParams sp;
  sp.cell_size = 1.0;
  const Heightfield hf = gen_shaft(sp);
  const RemeshResult r = remesh(hf, RoiPolygon::rectangle({10, 10}, {170, 170}), 12.0);
  const DualGraph d(r.mesh);
  const std::vector<DepthRange> ranges{{sp.plain_depth, 16.0}, {16.0, sp.pit_depth}};
  const Partition p = partition_mesh(r.mesh, d, ranges);
  ASSERT_GE(p.regions.size(), 2u);
  ASSERT_FALSE(p.gates.empty());
  for (const auto& [pair, edges] : p.shared) {
    EdgeId best = edges.front();
    double best_slope = slope_oracle(r.mesh, best);
    for (const EdgeId e : edges) {
      const double s = slope_oracle(r.mesh, e);
      if (s < best_slope - 1e-12 || (std::abs(s - best_slope) <= 1e-12 && e < best)) {
        best = e;
        best_slope = s;
      }
    }
    EXPECT_EQ(p.gates.at(pair), best);
    for (const EdgeId e : edges) EXPECT_GE(slope_oracle(r.mesh, e), best_slope - 1e-12);
  }
}

TEST(Gates, AlongEdgeSlope) {
  const TriMesh m = lattice(1, 1, [](std::size_t i, std::size_t j) { return 5.0 + 2.0 * double(i) + double(j); });
  // Edge 0 joins (0,0) and (1,0): depth 5 -> 7 over 1 m.
  EXPECT_DOUBLE_EQ(edge_slope(m, 0, GateSlope::AlongEdge), 2.0);
  EXPECT_THROW(edge_slope(m, 0, GateSlope::CrossEdge), ParameterError);
}

TEST(RegionMean, Examples) {
  const TriMesh flat = lattice(2, 2, [](auto, auto) { return 14.6; });
  std::vector<FaceId> all(flat.face_count());
  for (FaceId f = 0; f < all.size(); ++f) all[f] = f;
  EXPECT_NEAR(region_mean_depth(flat, all), 14.6, 1e-12);

  std::vector<MeshVertex> v{{{0, 0}, 7}, {{1, 0}, 7}, {{0, 1}, 7}, {{3, 0}, 21}, {{4, 0}, 21}, {{3, 1}, 21}};
  const TriMesh two(std::move(v), {{{0, 1, 2}}, {{3, 4, 5}}});
  const std::vector<FaceId> both{0, 1};
  EXPECT_DOUBLE_EQ(region_mean_depth(two, both), 14.0);
  EXPECT_THROW(region_mean_depth(two, {}), ParameterError);
}

TEST(RegionMean, RandomRegionsMatchShoelaceOracle) {
  SaddleParams sp;
  const Heightfield hf = gen_saddle(sp);
  const RemeshResult r = remesh(hf, RoiPolygon({{5, 5}, {175, 20}, {160, 170}, {20, 160}}), 9.0);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<FaceId> faces;
    for (FaceId f = 0; f < r.mesh.face_count(); ++f) {
      if (rng() % 3 == 0) faces.push_back(f);
    }
    if (faces.empty()) continue;
    double num = 0.0;
    double den = 0.0;
    for (const FaceId f : faces) {
      std::vector<Vec2> ring;
      double d = 0.0;
      for (const VertexId id : r.mesh.faces()[f]) {
        ring.push_back(r.mesh.vertices()[id].position);
        d += r.mesh.vertices()[id].depth / 3.0;
      }
      const double a = oracle::shoelace(ring);
      num += a * d;
      den += a;
    }
    const double expect = num / den;
    EXPECT_NEAR(region_mean_depth(r.mesh, faces), expect, 1e-12 * expect);
  }
}

TEST(PartitionMesh, RegionMeansStayInHull) {
  ShaftParams sp;
  const Heightfield hf = gen_shaft(sp);
  const RemeshResult r = remesh(hf, RoiPolygon::rectangle({10, 10}, {170, 170}), 10.0);
  const DualGraph d(r.mesh);
  const Partition p = partition_mesh(r.mesh, d, equal_ranges(sp.plain_depth, sp.pit_depth, 3));
  for (const auto& region : p.regions) {
    double lo = 1e9;
    double hi = -1e9;
    for (const FaceId f : region.faces) {
      lo = std::min(lo, r.mesh.face_mean_depth(f));
      hi = std::max(hi, r.mesh.face_mean_depth(f));
    }
    EXPECT_GE(region.mean_depth, lo - 1e-12);
    EXPECT_LE(region.mean_depth, hi + 1e-12);
  }
  EXPECT_TRUE(is_connected(d, p.blocked_mask(r.mesh.edge_count())));
}

TEST(PartitionMesh, SerializationIsDeterministic) {
  const TriMesh m = pockets();
  const DualGraph d(m);
  const std::string a = partition_to_json(partition_mesh(m, d, kTwoRanges));
  const std::string b = partition_to_json(partition_mesh(m, d, kTwoRanges));
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("\"gates\""), std::string::npos);
  EXPECT_NE(a.find("\"blocked\""), std::string::npos);
}

TEST(PartitionMesh, SingleRegion) {
  const TriMesh m = pockets();
  const Partition p = single_region(m);
  EXPECT_EQ(p.regions.size(), 1u);
  EXPECT_TRUE(p.gates.empty());
  EXPECT_TRUE(p.blocked.empty());
  EXPECT_EQ(p.regions[0].faces.size(), m.face_count());
}
