#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include <mdnuc/planner.hpp>

#include "support/audit.hpp"
#include "support/scenes.hpp"

using namespace mdnuc;

TEST(TourProperty, HundredRandomScenes) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240611);
  int retries = 0;
  int multi_region = 0;
  for (int k = 0; k < 100; ++k) {
    const oracle::RandomScene s = oracle::random_scene(rng, &retries);
    NucOptions opts;
    opts.seed_face = s.seed;
    const CoveragePath path = plan_mdnuc(s.rm.mesh, s.dual, s.partition, SonarConfig{}, opts);
    const auto audit = oracle::audit_tour(s.rm.mesh, s.dual, &s.partition, path, s.seed);
    ASSERT_TRUE(audit.ok()) << "scene " << k << " (" << s.label << "): " << audit.detail;
    EXPECT_EQ(path.angle_switches.size(), 2 * audit.tree_gate_edges) << s.label;
    EXPECT_EQ(audit.gate_crossings, 2 * audit.tree_gate_edges) << s.label;
    if (s.partition.regions.size() > 1) ++multi_region;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 60.0);
  EXPECT_GT(multi_region, 50);
  RecordProperty("retries", retries);
}
