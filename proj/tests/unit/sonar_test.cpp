#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <mdnuc/error.hpp>
#include <mdnuc/sonar.hpp>

#include "support/oracles.hpp"

using namespace mdnuc;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Heightfield flat(double depth, double extent, double cell = 1.0) {
  const auto n = static_cast<std::size_t>(std::round(extent / cell)) + 1;
  return Heightfield({0.0, 0.0}, cell, n, n, std::vector<double>(n * n, depth));
}

// Fine fixed-step march with bisection, written against the bilinear oracle.
std::optional<double> march_oracle(const Heightfield& hf, Vec3 o, Vec3 d, double step, double max_range) {
  const auto gap = [&](double t) { return oracle::bilinear(hf, o.x + d.x * t, o.y + d.y * t) - (o.z + d.z * t); };
  const auto inside = [&](double t) {
    const double x = o.x + d.x * t;
    const double y = o.y + d.y * t;
    return x >= hf.origin().x && y >= hf.origin().y && x <= hf.max_corner().x && y <= hf.max_corner().y;
  };
  double prev = 0.0;
  for (double t = 0.0; t <= max_range && inside(t); t += step) {
    if (gap(t) <= 0.0) {
      double lo = prev;
      double hi = t;
      for (int k = 0; k < 60; ++k) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) > 0.0 ? lo : hi) = mid;
      }
      return hi;
    }
    prev = t;
  }
  return std::nullopt;
}

}  // namespace

TEST(OpeningAngle, FootprintsAtMeanDepth) {
  EXPECT_NEAR(opening_angle(25.6, 14.6), 82.44, 0.10);
  EXPECT_NEAR(opening_angle(64.0, 14.6), 130.95, 0.10);
  EXPECT_NEAR(opening_angle(20.0, 10.0), 90.0, 1e-12);
  EXPECT_THROW(opening_angle(25.6, 0.0), DomainError);
  EXPECT_THROW(opening_angle(25.6, -3.0), DomainError);
}

TEST(OpeningAngle, MonotoneAndClamped) {
  for (double w = 5.0; w <= 80.0; w += 5.0) {
    for (double d = 14.0; d <= 60.0; d += 0.5) {
      EXPECT_GT(opening_angle(w, d), opening_angle(w, d + 0.5));
      EXPECT_LT(opening_angle(w, d), opening_angle(w + 5.0, d));
    }
  }
  for (const double d : {1e-9, 1e-3, 0.5, 2.0}) {
    EXPECT_EQ(opening_angle(64.0, d), 160.0);
    EXPECT_EQ(opening_angle(64.0, d, 120.0), 120.0);
  }
}

TEST(FootprintWidth, InverseOfOpeningAngle) {
  EXPECT_NEAR(footprint_width(90.0, 7.5), 15.0, 1e-12);
  EXPECT_THROW(footprint_width(180.0, 5.0), DomainError);
  EXPECT_THROW(footprint_width(60.0, 0.0), DomainError);
  for (double w = 5.0; w <= 80.0; w += 7.0) {
    for (double d = 12.0; d <= 40.0; d += 3.0) EXPECT_NEAR(footprint_width(opening_angle(w, d), d), w, 1e-9);
  }
}

TEST(FootprintWidth, MeanDepthAnglesInvertToSameDepth) {
  const double d10 = 25.6 / footprint_width(82.44, 1.0);
  const double d25 = 64.0 / footprint_width(130.95, 1.0);
  EXPECT_NEAR(d10, 14.61, 0.02);
  EXPECT_NEAR(d25, 14.61, 0.02);
}

TEST(FootprintWidth, RangeAnglesInvertToSameDepth) {
  const auto depth = [](double w, double theta) { return w / footprint_width(theta, 1.0); };
  const double shallow10 = depth(25.6, 122.65);
  const double shallow25 = depth(64.0, 155.32);
  const double deep10 = depth(25.6, 60.38);
  const double deep25 = depth(64.0, 110.98);
  EXPECT_NEAR(shallow10, shallow25, 0.02);
  EXPECT_NEAR(deep10, deep25, 0.02);
  EXPECT_NEAR(shallow10, 7.00, 0.02);
  EXPECT_NEAR(deep10, 22.00, 0.02);
}

TEST(Config, Validation) {
  SonarConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_DOUBLE_EQ(c.footprint(), 25.6);
  c.n_beams = 1;
  EXPECT_THROW(c.validate(), ParameterError);
  c = {};
  c.theta_max_deg = 180.0;
  EXPECT_THROW(c.validate(), ParameterError);
}

TEST(FanAngles, SpacingModes) {
  SonarConfig c;
  c.n_beams = 5;
  const auto eq = fan_angles(90.0, c);
  EXPECT_NEAR(eq.front(), -45.0 * kDeg, 1e-15);
  EXPECT_NEAR(eq[1], -22.5 * kDeg, 1e-15);
  EXPECT_EQ(eq[2], 0.0);
  c.spacing = BeamSpacing::Equidistant;
  const auto ed = fan_angles(90.0, c);
  EXPECT_NEAR(ed.back(), 45.0 * kDeg, 1e-15);
  EXPECT_NEAR(std::tan(ed[3]), 0.5, 1e-15);
}

TEST(CastRay, VerticalOverFlat) {
  const Heightfield hf = flat(5.0, 20.0);
  SonarConfig cfg;
  const auto hit = cast_ray(hf, {7.3, 4.1, 0.0}, {0, 0, 1}, cfg);
  ASSERT_TRUE(hit);
  EXPECT_NEAR(hit->x, 7.3, 1e-12);
  EXPECT_NEAR(hit->y, 4.1, 1e-12);
  EXPECT_NEAR(hit->z, 5.0, cfg.tolerance());
  const RayCaster caster(hf, cfg);
  const auto fast = caster.cast({7.3, 4.1, 0.0}, {0, 0, 1});
  ASSERT_TRUE(fast);
  EXPECT_NEAR(fast->z, 5.0, cfg.tolerance());
}

TEST(CastRay, FortyFiveDegrees) {
  const double d = 9.0;
  const Heightfield hf = flat(d, 40.0);
  SonarConfig cfg;
  const double s = std::sqrt(0.5);
  for (const double res : {0.10, 0.25}) {
    cfg.resolution = res;
    const auto hit = cast_ray(hf, {10.0, 20.0, 0.0}, {s, 0.0, s}, cfg);
    ASSERT_TRUE(hit);
    EXPECT_NEAR(hit->x - 10.0, d, res / 10.0);
    const auto fast = RayCaster(hf, cfg).cast({10.0, 20.0, 0.0}, {s, 0.0, s});
    ASSERT_TRUE(fast);
    EXPECT_NEAR(fast->x - 10.0, d, res / 10.0);
  }
}

TEST(CastRay, MissesAndErrors) {
  const Heightfield hf = flat(5.0, 20.0);
  SonarConfig cfg;
  const double s = std::sqrt(0.5);
  EXPECT_FALSE(cast_ray(hf, {19.0, 10.0, 0.0}, {s, 0, s}, cfg));
  cfg.max_range = 4.0;
  EXPECT_FALSE(cast_ray(hf, {10.0, 10.0, 0.0}, {0, 0, 1}, cfg));
  EXPECT_FALSE(RayCaster(hf, cfg).cast({10.0, 10.0, 0.0}, {0, 0, 1}));
  EXPECT_THROW(cast_ray(hf, {10.0, 10.0, 0.0}, {1, 0, 0}, cfg), DomainError);
}

TEST(CastRay, ShaftWallAgainstFineMarch) {
  ShaftParams p;
  p.wall_smoothing = 2.0;
  const Heightfield hf = gen_shaft(p);
  SonarConfig cfg;
  const RayCaster caster(hf, cfg);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> rad(p.pit_radius - 15.0, p.pit_radius + 15.0);
  std::uniform_real_distribution<double> tilt(0.0, 60.0 * kDeg);
  int hits = 0;
  for (int k = 0; k < 1000; ++k) {
    const double a = ang(rng);
    const double r = rad(rng);
    const Vec3 o{p.pit_center.x + r * std::cos(a), p.pit_center.y + r * std::sin(a), 0.0};
    const double b = ang(rng);
    const double t = tilt(rng);
    const Vec3 d{std::sin(t) * std::cos(b), std::sin(t) * std::sin(b), std::cos(t)};
    const auto ref = march_oracle(hf, o, d, cfg.march_step() / 10.0, cfg.max_range);
    const auto slow = cast_ray(hf, o, d, cfg);
    const auto fast = caster.cast(o, d);
    ASSERT_EQ(ref.has_value(), slow.has_value()) << k;
    ASSERT_EQ(ref.has_value(), fast.has_value()) << k;
    if (!ref) continue;
    ++hits;
    for (const auto& h : {*slow, *fast}) {
      const double tl = std::sqrt((h.x - o.x) * (h.x - o.x) + (h.y - o.y) * (h.y - o.y) + h.z * h.z);
      EXPECT_NEAR(tl, *ref, cfg.tolerance() + 1e-6) << k;
      EXPECT_LE(std::abs(hf.depth_at(h.x, h.y) - h.z), cfg.tolerance()) << k;
    }
  }
  EXPECT_GT(hits, 900);
}

TEST(Ping, FlatBottomSwathWidth) {
  const double d = 14.6;
  const Heightfield hf = flat(d, 60.0);
  for (const auto spacing : {BeamSpacing::Equiangular, BeamSpacing::Equidistant}) {
    SonarConfig cfg;
    cfg.spacing = spacing;
    const double w = cfg.footprint();
    const Ping pg = ping(hf, {30.0, 30.0}, {1.0, 0.0}, opening_angle(w, d), cfg);
    ASSERT_EQ(pg.hits.size(), 256u);
    const double width = std::abs(pg.hits.back().y - pg.hits.front().y);
    EXPECT_NEAR(width, w, 0.01 * w);
    for (const Vec2 h : pg.hits) EXPECT_NEAR(h.x, 30.0, 1e-12);
  }
}

TEST(Ping, NadirBeamBelowOrigin) {
  const Heightfield hf = flat(11.0, 40.0);
  SonarConfig cfg;
  cfg.n_beams = 101;
  const Ping pg = ping(hf, {12.5, 17.25}, {0.3, 0.7}, 90.0, cfg);
  ASSERT_EQ(pg.hits.size(), 101u);
  EXPECT_NEAR(pg.hits[50].x, 12.5, 1e-12);
  EXPECT_NEAR(pg.hits[50].y, 17.25, 1e-12);
}

TEST(Ping, MirrorSymmetricOverSymmetricTerrain) {
  SaddleParams p;
  p.extent = {120.0, 120.0};
  p.cell_size = 0.5;
  const Heightfield hf = gen_saddle(p);
  SonarConfig cfg;
  cfg.n_beams = 64;
  const Ping pg = ping(hf, {40.0, 60.0}, {1.0, 0.0}, 120.0, cfg);
  ASSERT_EQ(pg.hits.size(), 64u);
  for (std::size_t i = 0; i < pg.hits.size(); ++i) {
    const Vec2 a = pg.hits[i];
    const Vec2 b = pg.hits[pg.hits.size() - 1 - i];
    EXPECT_NEAR(a.y - 60.0, 60.0 - b.y, 2.0 * cfg.tolerance());
  }
}

TEST(Ping, MissingRaysAreOmitted) {
  const Heightfield hf = flat(10.0, 30.0);
  SonarConfig cfg;
  const Ping pg = ping(hf, {1.0, 15.0}, {0.0, 1.0}, 120.0, cfg);
  EXPECT_LT(pg.hits.size(), 256u);
  EXPECT_GT(pg.hits.size(), 0u);
  for (const Vec2 h : pg.hits) EXPECT_TRUE(hf.contains(h));
}
