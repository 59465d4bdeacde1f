#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mdnuc/geometry.hpp"

namespace mdnuc {

/// Regular grid of seafloor depths in meters, positive down. Nodes sit at
/// origin + (i, j) * cell_size for i < nx, j < ny; depths are stored row-major
/// with x varying fastest. Immutable after construction.
class Heightfield {
 public:
  Heightfield(Vec2 origin, double cell_size, std::size_t nx, std::size_t ny, std::vector<double> depths);

  Vec2 origin() const { return origin_; }
  double cell_size() const { return cell_size_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::span<const double> depths() const { return depths_; }

  double node(std::size_t i, std::size_t j) const { return depths_[j * nx_ + i]; }
  Vec2 node_position(std::size_t i, std::size_t j) const;

  /// Upper corner of the covered extent.
  Vec2 max_corner() const;
  bool contains(Vec2 p) const;

  double min_depth() const { return min_depth_; }
  double max_depth() const { return max_depth_; }

  /// Bilinear interpolation of the four surrounding nodes. Throws DomainError
  /// outside the extent.
  double depth_at(Vec2 p) const;
  double depth_at(double x, double y) const { return depth_at(Vec2{x, y}); }

  /// depth_at without the extent check; p must be inside.
  double depth_at_unchecked(Vec2 p) const;

  /// Upper bound on the gradient magnitude of the interpolant within a cell.
  double cell_slope_bound(std::size_t i, std::size_t j) const;

 private:
  Vec2 origin_;
  double cell_size_;
  std::size_t nx_;
  std::size_t ny_;
  std::vector<double> depths_;
  double min_depth_ = 0.0;
  double max_depth_ = 0.0;
};

/// Simple counter-clockwise polygon delimiting the survey area.
class RoiPolygon {
 public:
  /// Clockwise input is reversed. Throws ParameterError on fewer than three
  /// vertices, zero area or self-intersection.
  explicit RoiPolygon(std::vector<Vec2> vertices);

  static RoiPolygon rectangle(Vec2 lo, Vec2 hi);

  std::span<const Vec2> vertices() const { return vertices_; }
  double area() const;
  Box2 bounds() const { return bounding_box(vertices_); }
  bool contains(Vec2 p) const { return point_in_ring(vertices_, p); }

 private:
  std::vector<Vec2> vertices_;
};

/// Depth interval [d_min, d_max); the last interval of a partition is closed.
struct DepthRange {
  double d_min = 0.0;
  double d_max = 0.0;
};

/// Checks that ranges are ordered, non-empty and contiguous.
void validate_ranges(std::span<const DepthRange> ranges);

/// Splits [lo, hi] into n equal-height ranges.
std::vector<DepthRange> equal_ranges(double lo, double hi, std::size_t n);

/// Checks containment of the ROI in the heightfield extent.
void require_roi_inside(const Heightfield& hf, const RoiPolygon& roi);

// Generators. `extent` is the size of the generated field; the field starts at
// `origin` and has round(extent / cell_size) + 1 nodes along each axis.

struct ShaftParams {
  Vec2 origin{0.0, 0.0};
  Vec2 extent{180.0, 180.0};
  double plain_depth = 8.0;
  double pit_depth = 24.0;
  Vec2 pit_center{90.0, 90.0};
  double pit_radius = 40.0;
  double wall_smoothing = 6.0;
  double cell_size = 1.0;
};

struct SaddleParams {
  Vec2 origin{0.0, 0.0};
  Vec2 extent{180.0, 180.0};
  double base_depth = 15.0;
  double amplitude = 10.0;
  double cell_size = 1.0;
};

struct ChannelParams {
  Vec2 origin{0.0, 0.0};
  Vec2 extent{350.0, 350.0};
  double shallow_depth = 3.26;
  double deep_depth = 25.96;
  /// Axis direction in degrees from +x; the axis passes through `channel_center`.
  double channel_axis_deg = 30.0;
  std::optional<Vec2> channel_center;  // defaults to the extent center
  double channel_width = 175.0;
  /// Sloped bank outside the wall: depth falls linearly from shelf_depth at
  /// the wall top to shallow_depth over bank_width. 0 keeps a flat shelf.
  double bank_width = 0.0;
  std::optional<double> shelf_depth;  // defaults to shallow_depth
  double cell_size = 1.0;
};

/// Analytic shaft depth at a point (smoothstep rim, inclusive inside).
double shaft_depth(const ShaftParams& p, Vec2 q);
double saddle_depth(const SaddleParams& p, Vec2 q);
double channel_depth(const ChannelParams& p, Vec2 q);

Heightfield gen_shaft(const ShaftParams& p);
Heightfield gen_saddle(const SaddleParams& p);
Heightfield gen_channel(const ChannelParams& p);

// Grid files.

enum class GridFormat { XyzAscii, EsriAscii };

struct GridReadOptions {
  /// When true the file stores elevations (positive up) and values are negated.
  bool values_are_elevation = false;
  /// Optional ROI; NODATA cells are only rejected inside it. Without an ROI
  /// every NODATA cell is rejected.
  const RoiPolygon* roi = nullptr;
};

Heightfield load_grid(std::istream& in, GridFormat format, const GridReadOptions& options = {});

/// Writes with 17 significant digits so that load_grid reproduces the depth
/// array bit for bit.
void save_grid(std::ostream& out, const Heightfield& hf, GridFormat format);

}  // namespace mdnuc
