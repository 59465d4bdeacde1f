#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <mdnuc/error.hpp>
#include <mdnuc/terrain.hpp>

#include "support/oracles.hpp"

using namespace mdnuc;

TEST(Shaft, FarFromPitIsPlainDepth) {
  ShaftParams p;
  EXPECT_DOUBLE_EQ(shaft_depth(p, {5.0, 5.0}), p.plain_depth);
  const Heightfield hf = gen_shaft(p);
  EXPECT_DOUBLE_EQ(hf.depth_at(2.0, 3.0), p.plain_depth);
}

TEST(Shaft, PitCenterIsPitDepth) {
  ShaftParams p;
  EXPECT_DOUBLE_EQ(shaft_depth(p, p.pit_center), p.pit_depth);
  EXPECT_DOUBLE_EQ(gen_shaft(p).depth_at(p.pit_center), p.pit_depth);
}

TEST(Shaft, RimIsInsideWithoutSmoothing) {
  ShaftParams p;
  p.wall_smoothing = 0.0;
  const Vec2 rim = p.pit_center + Vec2{p.pit_radius, 0.0};
  EXPECT_DOUBLE_EQ(shaft_depth(p, rim), p.pit_depth);
  EXPECT_DOUBLE_EQ(shaft_depth(p, rim + Vec2{1e-9, 0.0}), p.plain_depth);
}

TEST(Shaft, RejectsBadParameters) {
  ShaftParams p;
  p.pit_depth = p.plain_depth;
  EXPECT_THROW(gen_shaft(p), ParameterError);
  p = {};
  p.plain_depth = 0.0;
  EXPECT_THROW(gen_shaft(p), ParameterError);
  p = {};
  p.pit_center = {10.0, 10.0};
  EXPECT_THROW(gen_shaft(p), ParameterError);
}

TEST(Saddle, AnalyticSamples) {
  SaddleParams p;
  const Vec2 c = p.origin + p.extent * 0.5;
  EXPECT_DOUBLE_EQ(saddle_depth(p, c), p.base_depth);
  EXPECT_DOUBLE_EQ(saddle_depth(p, p.origin + p.extent), p.base_depth);
  EXPECT_DOUBLE_EQ(saddle_depth(p, {p.origin.x + p.extent.x, c.y}), p.base_depth + p.amplitude);
  p.amplitude = p.base_depth;
  EXPECT_THROW(gen_saddle(p), ParameterError);
}

TEST(Saddle, MirroredPairsSumToTwiceBase) {
  SaddleParams p;
  p.cell_size = 2.0;
  const Heightfield hf = gen_saddle(p);
  ASSERT_EQ(hf.nx(), hf.ny());
  for (std::size_t j = 0; j < hf.ny(); ++j) {
    for (std::size_t i = 0; i < hf.nx(); ++i) {
      EXPECT_NEAR(hf.node(i, j) + hf.node(j, i), 2.0 * p.base_depth, 1e-9);
    }
  }
}

TEST(Channel, CenterDeepFarShallowAndExtremes) {
  ChannelParams p;
  const Vec2 c = p.origin + p.extent * 0.5;
  EXPECT_DOUBLE_EQ(channel_depth(p, c), p.deep_depth);
  // Perpendicular to a 30 degree axis, well outside the band.
  const double a = p.channel_axis_deg * 3.14159265358979323846 / 180.0;
  const Vec2 normal{-std::sin(a), std::cos(a)};
  EXPECT_DOUBLE_EQ(channel_depth(p, c + normal * (0.5 * p.channel_width + 30.0)), p.shallow_depth);
  const Heightfield hf = gen_channel(p);
  EXPECT_EQ(hf.min_depth(), 3.26);
  EXPECT_EQ(hf.max_depth(), 25.96);
}

TEST(Channel, SlopedBankInterpolatesFromShelf) {
  ChannelParams p;
  p.channel_axis_deg = 0.0;
  p.channel_center = Vec2{175.0, 100.0};
  p.channel_width = 100.0;
  p.bank_width = 40.0;
  p.shelf_depth = 13.26;
  EXPECT_DOUBLE_EQ(channel_depth(p, {50.0, 150.0}), 25.96);
  EXPECT_DOUBLE_EQ(channel_depth(p, {50.0, 150.0 + 1e-9}), 13.26 - 0.25e-9);
  EXPECT_DOUBLE_EQ(channel_depth(p, {50.0, 160.0}), 10.76);
  EXPECT_DOUBLE_EQ(channel_depth(p, {50.0, 170.0}), 8.26);
  EXPECT_DOUBLE_EQ(channel_depth(p, {50.0, 190.0}), 3.26);
  p.shelf_depth = 30.0;
  EXPECT_THROW(gen_channel(p), ParameterError);
}

TEST(Generators, ExtremesMatchFormula) {
  ShaftParams s;
  s.cell_size = 2.0;
  const Heightfield shaft = gen_shaft(s);
  EXPECT_NEAR(shaft.min_depth(), s.plain_depth, 1e-9);
  EXPECT_NEAR(shaft.max_depth(), s.pit_depth, 1e-9);
  SaddleParams d;
  d.cell_size = 2.0;
  const Heightfield saddle = gen_saddle(d);
  EXPECT_NEAR(saddle.min_depth(), d.base_depth - d.amplitude, 1e-9);
  EXPECT_NEAR(saddle.max_depth(), d.base_depth + d.amplitude, 1e-9);
  for (const double v : saddle.depths()) EXPECT_GT(v, 0.0);
}

TEST(Generators, NodeCountFollowsCellSize) {
  SaddleParams p;
  p.extent = {160.0, 100.0};
  p.cell_size = 0.5;
  const Heightfield hf = gen_saddle(p);
  EXPECT_EQ(hf.nx(), 321u);
  EXPECT_EQ(hf.ny(), 201u);
}

TEST(DepthAt, NodesAndCellCenter) {
  const Heightfield hf({0.0, 0.0}, 1.0, 2, 2, {1.0, 1.0, 3.0, 3.0});
  EXPECT_DOUBLE_EQ(hf.depth_at(0.5, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(hf.depth_at(0.0, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(hf.depth_at(1.0, 0.0), 1.0);
  EXPECT_THROW(hf.depth_at(1.5, 0.5), DomainError);
  EXPECT_THROW(hf.depth_at(-0.01, 0.5), DomainError);
}

TEST(DepthAt, RandomQueriesMatchBilinearOracle) {
  SaddleParams p;
  p.origin = {-40.0, 12.5};
  p.extent = {90.0, 60.0};
  p.cell_size = 1.5;
  const Heightfield hf = gen_saddle(p);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(hf.origin().x, hf.max_corner().x);
  std::uniform_real_distribution<double> uy(hf.origin().y, hf.max_corner().y);
  for (int k = 0; k < 1000; ++k) {
    const double x = ux(rng);
    const double y = uy(rng);
    const double expect = oracle::bilinear(hf, x, y);
    EXPECT_NEAR(hf.depth_at(x, y), expect, 1e-12 * std::abs(expect));
  }
}

TEST(DepthAt, ContinuousAcrossCellEdges) {
  ShaftParams p;
  p.cell_size = 3.0;
  const Heightfield hf = gen_shaft(p);
  for (std::size_t i = 1; i + 1 < hf.nx(); i += 7) {
    const double x = hf.node_position(i, 0).x;
    for (double y = 1.3; y < 170.0; y += 11.1) {
      const double left = hf.depth_at(std::nextafter(x, -1e9), y);
      const double right = hf.depth_at(x, y);
      EXPECT_NEAR(left, right, 1e-12 * right);
    }
  }
}

TEST(LoadGrid, XyzConstant) {
  std::istringstream in("0 0 5.0\n1 0 5.0\n0 1 5.0\n1 1 5.0\n");
  const Heightfield hf = load_grid(in, GridFormat::XyzAscii);
  EXPECT_EQ(hf.nx(), 2u);
  EXPECT_EQ(hf.ny(), 2u);
  for (const double v : hf.depths()) EXPECT_EQ(v, 5.0);
}

TEST(LoadGrid, XyzElevationIsNegated) {
  std::istringstream in("0 0 -5\n2 0 -6\n0 2 -7\n2 2 -8\n");
  GridReadOptions opts;
  opts.values_are_elevation = true;
  const Heightfield hf = load_grid(in, GridFormat::XyzAscii, opts);
  EXPECT_EQ(hf.cell_size(), 2.0);
  EXPECT_EQ(hf.node(1, 1), 8.0);
}

namespace {

std::size_t format_error_line(const std::string& text, GridFormat format, const GridReadOptions& opts = {}) {
  std::istringstream in(text);
  try {
    load_grid(in, format, opts);
  } catch (const FormatError& e) {
    return e.line();
  }
  ADD_FAILURE() << "expected a format error";
  return 0;
}

}  // namespace

TEST(LoadGrid, XyzErrorsCarryLineNumbers) {
  EXPECT_EQ(format_error_line("0 0 5\n1 0 abc\n0 1 5\n1 1 5\n", GridFormat::XyzAscii), 2u);
  EXPECT_EQ(format_error_line("0 0 5\n1 0 5\n0 1 -2\n1 1 5\n", GridFormat::XyzAscii), 3u);
  EXPECT_EQ(format_error_line("0 0 5\n1 0 5\n0 1 nan\n1 1 5\n", GridFormat::XyzAscii), 3u);
  EXPECT_EQ(format_error_line("0 0 5\n1 0 5\n2 0 5\n0 1 5\n1 1 5\n", GridFormat::XyzAscii), 5u);
}

namespace {

const char* kEsriWithNodata =
    "ncols 4\n"
    "nrows 3\n"
    "xllcorner 0\n"
    "yllcorner 0\n"
    "cellsize 10\n"
    "NODATA_value -9999\n"
    "5 5 5 -9999\n"
    "5 5 5 5\n"
    "5 5 5 5\n";

}  // namespace

TEST(LoadGrid, EsriNodataInsideRoiIsRejected) {
  // Node (3, 2) sits at (35, 25).
  EXPECT_EQ(format_error_line(kEsriWithNodata, GridFormat::EsriAscii), 7u);
  const RoiPolygon roi = RoiPolygon::rectangle({5, 5}, {35, 25});
  GridReadOptions opts;
  opts.roi = &roi;
  EXPECT_EQ(format_error_line(kEsriWithNodata, GridFormat::EsriAscii, opts), 7u);
}

TEST(LoadGrid, EsriNodataOutsideRoiIsFilled) {
  const RoiPolygon roi = RoiPolygon::rectangle({5, 5}, {12, 12});
  GridReadOptions opts;
  opts.roi = &roi;
  std::istringstream in(kEsriWithNodata);
  const Heightfield hf = load_grid(in, GridFormat::EsriAscii, opts);
  EXPECT_EQ(hf.nx(), 4u);
  EXPECT_EQ(hf.ny(), 3u);
  EXPECT_EQ(hf.origin(), (Vec2{5.0, 5.0}));
  EXPECT_EQ(hf.node(3, 2), 5.0);
}

TEST(LoadGrid, EsriRaggedGrid) {
  const std::string text = "ncols 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2 3\n4 5\n";
  std::istringstream in(text);
  EXPECT_THROW(load_grid(in, GridFormat::EsriAscii), FormatError);
}

TEST(LoadGrid, EsriRowsAreNorthUp) {
  std::istringstream in("ncols 2\nnrows 2\nxllcenter 0\nyllcenter 0\ncellsize 1\n1 2\n3 4\n");
  const Heightfield hf = load_grid(in, GridFormat::EsriAscii);
  EXPECT_EQ(hf.node(0, 1), 1.0);
  EXPECT_EQ(hf.node(1, 0), 4.0);
}

TEST(SaveGrid, RoundTripIsBitwise) {
  SaddleParams p;
  p.extent = {37.0, 23.0};
  p.cell_size = 0.37;
  const Heightfield hf = gen_saddle(p);
  for (const auto format : {GridFormat::EsriAscii, GridFormat::XyzAscii}) {
    std::stringstream io;
    save_grid(io, hf, format);
    const Heightfield back = load_grid(io, format);
    ASSERT_EQ(back.nx(), hf.nx());
    ASSERT_EQ(back.ny(), hf.ny());
    for (std::size_t k = 0; k < hf.depths().size(); ++k) ASSERT_EQ(back.depths()[k], hf.depths()[k]) << k;
  }
}

TEST(Roi, OrientationAndValidation) {
  const RoiPolygon cw({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  EXPECT_GT(cw.area(), 0.0);
  EXPECT_THROW(RoiPolygon({{0, 0}, {1, 1}}), ParameterError);
  EXPECT_THROW(RoiPolygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), ParameterError);
  EXPECT_THROW(RoiPolygon({{0, 0}, {1, 1}, {2, 2}}), ParameterError);
  const Heightfield hf({0.0, 0.0}, 1.0, 3, 3, std::vector<double>(9, 4.0));
  EXPECT_THROW(require_roi_inside(hf, RoiPolygon::rectangle({0, 0}, {3, 1})), ParameterError);
}

TEST(Ranges, EqualSplitAndValidation) {
  const auto r = equal_ranges(5.0, 25.0, 4);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r.front().d_min, 5.0);
  EXPECT_EQ(r.back().d_max, 25.0);
  EXPECT_NO_THROW(validate_ranges(r));
  const std::vector<DepthRange> gap{{1, 2}, {2.5, 3}};
  EXPECT_THROW(validate_ranges(gap), ParameterError);
}
