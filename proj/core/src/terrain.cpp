#include "mdnuc/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mdnuc/error.hpp"

namespace mdnuc {

Heightfield::Heightfield(Vec2 origin, double cell_size, std::size_t nx, std::size_t ny, std::vector<double> depths)
    : origin_(origin), cell_size_(cell_size), nx_(nx), ny_(ny), depths_(std::move(depths)) {
  if (!(cell_size_ > 0.0) || !std::isfinite(cell_size_)) throw ParameterError("heightfield cell_size must be > 0");
  if (nx_ < 2 || ny_ < 2) throw ParameterError("heightfield needs at least 2x2 nodes");
  if (depths_.size() != nx_ * ny_) throw ParameterError("heightfield depth array does not match nx*ny");
  min_depth_ = std::numeric_limits<double>::infinity();
  max_depth_ = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < depths_.size(); ++k) {
    const double d = depths_[k];
    if (!std::isfinite(d) || d <= 0.0) {
      throw ParameterError("heightfield depth at node (" + std::to_string(k % nx_) + ", " + std::to_string(k / nx_) +
                           ") is not a finite positive depth");
    }
    min_depth_ = std::min(min_depth_, d);
    max_depth_ = std::max(max_depth_, d);
  }
}

Vec2 Heightfield::node_position(std::size_t i, std::size_t j) const {
  return {origin_.x + static_cast<double>(i) * cell_size_, origin_.y + static_cast<double>(j) * cell_size_};
}

Vec2 Heightfield::max_corner() const { return node_position(nx_ - 1, ny_ - 1); }

bool Heightfield::contains(Vec2 p) const {
  const Vec2 hi = max_corner();
  return p.x >= origin_.x && p.y >= origin_.y && p.x <= hi.x && p.y <= hi.y;
}

double Heightfield::depth_at(Vec2 p) const {
  if (!contains(p)) {
    throw DomainError("depth query (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                      ") outside heightfield extent");
  }
  return depth_at_unchecked(p);
}

double Heightfield::depth_at_unchecked(Vec2 p) const {
  const double fx = (p.x - origin_.x) / cell_size_;
  const double fy = (p.y - origin_.y) / cell_size_;
  const std::size_t i = std::min(static_cast<std::size_t>(std::max(fx, 0.0)), nx_ - 2);
  const std::size_t j = std::min(static_cast<std::size_t>(std::max(fy, 0.0)), ny_ - 2);
  const double tx = fx - static_cast<double>(i);
  const double ty = fy - static_cast<double>(j);
  const double* row0 = depths_.data() + j * nx_ + i;
  const double* row1 = row0 + nx_;
  const double bottom = row0[0] + (row0[1] - row0[0]) * tx;
  const double top = row1[0] + (row1[1] - row1[0]) * tx;
  return bottom + (top - bottom) * ty;
}

double Heightfield::cell_slope_bound(std::size_t i, std::size_t j) const {
  const double d00 = node(i, j);
  const double d10 = node(i + 1, j);
  const double d01 = node(i, j + 1);
  const double d11 = node(i + 1, j + 1);
  const double gx = std::max(std::abs(d10 - d00), std::abs(d11 - d01));
  const double gy = std::max(std::abs(d01 - d00), std::abs(d11 - d10));
  return std::hypot(gx, gy) / cell_size_;
}

RoiPolygon::RoiPolygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) throw ParameterError("ROI polygon needs at least 3 vertices");
  for (const Vec2 v : vertices_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw ParameterError("ROI vertex is not finite");
  }
  const double a = signed_area(vertices_);
  if (a == 0.0) throw ParameterError("ROI polygon has zero area");
  if (a < 0.0) std::reverse(vertices_.begin(), vertices_.end());
  if (!is_simple_ring(vertices_)) throw ParameterError("ROI polygon is not simple");
}

RoiPolygon RoiPolygon::rectangle(Vec2 lo, Vec2 hi) {
  return RoiPolygon({{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}});
}

double RoiPolygon::area() const { return signed_area(vertices_); }

void validate_ranges(std::span<const DepthRange> ranges) {
  if (ranges.empty()) throw ParameterError("at least one depth range is required");
  for (std::size_t k = 0; k < ranges.size(); ++k) {
    const auto& r = ranges[k];
    if (!(r.d_min < r.d_max)) throw ParameterError("depth range " + std::to_string(k) + " has d_min >= d_max");
    if (k > 0 && ranges[k - 1].d_max != r.d_min) {
      throw ParameterError("depth ranges " + std::to_string(k - 1) + " and " + std::to_string(k) +
                           " are not contiguous");
    }
  }
}

std::vector<DepthRange> equal_ranges(double lo, double hi, std::size_t n) {
  if (n == 0 || !(lo < hi)) throw ParameterError("equal_ranges needs n >= 1 and lo < hi");
  std::vector<DepthRange> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = k == 0 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n);
    const double b = k + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(k + 1) / static_cast<double>(n);
    out.push_back({a, b});
  }
  return out;
}

void require_roi_inside(const Heightfield& hf, const RoiPolygon& roi) {
  for (const Vec2 v : roi.vertices()) {
    if (!hf.contains(v)) throw ParameterError("ROI vertex lies outside the heightfield extent");
  }
}

namespace {

std::size_t node_count(double extent, double cell) {
  if (!(cell > 0.0)) throw ParameterError("cell_size must be > 0");
  if (!(extent > 0.0)) throw ParameterError("extent must be > 0");
  const double n = std::round(extent / cell);
  if (n < 1.0) throw ParameterError("extent smaller than one cell");
  if (n > 1e5) throw ParameterError("grid too large");
  return static_cast<std::size_t>(n) + 1;
}

template <class Fn>
Heightfield sample(Vec2 origin, Vec2 extent, double cell, Fn&& fn) {
  const std::size_t nx = node_count(extent.x, cell);
  const std::size_t ny = node_count(extent.y, cell);
  std::vector<double> depths(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const Vec2 q{origin.x + static_cast<double>(i) * cell, origin.y + static_cast<double>(j) * cell};
      depths[j * nx + i] = fn(q);
    }
  }
  return Heightfield(origin, cell, nx, ny, std::move(depths));
}

double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

}  // namespace

double shaft_depth(const ShaftParams& p, Vec2 q) {
  const double r = distance(q, p.pit_center);
  if (p.wall_smoothing <= 0.0) return r <= p.pit_radius ? p.pit_depth : p.plain_depth;
  const double t = (r - (p.pit_radius - 0.5 * p.wall_smoothing)) / p.wall_smoothing;
  return p.pit_depth + (p.plain_depth - p.pit_depth) * smoothstep(t);
}

double saddle_depth(const SaddleParams& p, Vec2 q) {
  const double u = 2.0 * (q.x - p.origin.x) / p.extent.x - 1.0;
  const double v = 2.0 * (q.y - p.origin.y) / p.extent.y - 1.0;
  return p.base_depth + p.amplitude * (u * u - v * v);
}

namespace {

Vec2 channel_center(const ChannelParams& p) {
  return p.channel_center.value_or(Vec2{p.origin.x + 0.5 * p.extent.x, p.origin.y + 0.5 * p.extent.y});
}

}  // namespace

double channel_depth(const ChannelParams& p, Vec2 q) {
  const double a = p.channel_axis_deg * std::numbers::pi / 180.0;
  const Vec2 dir{std::cos(a), std::sin(a)};
  const double offset = std::abs(cross(dir, q - channel_center(p)));
  if (offset <= 0.5 * p.channel_width) return p.deep_depth;
  const double u = offset - 0.5 * p.channel_width;
  if (u >= p.bank_width) return p.shallow_depth;
  const double shelf = p.shelf_depth.value_or(p.shallow_depth);
  return shelf + (p.shallow_depth - shelf) * (u / p.bank_width);
}

Heightfield gen_shaft(const ShaftParams& p) {
  if (!(p.plain_depth > 0.0)) throw ParameterError("shaft plain_depth must be > 0");
  if (!(p.pit_depth > p.plain_depth)) throw ParameterError("shaft pit_depth must exceed plain_depth");
  if (!(p.pit_radius > 0.0)) throw ParameterError("shaft pit_radius must be > 0");
  if (!(p.wall_smoothing >= 0.0)) throw ParameterError("shaft wall_smoothing must be >= 0");
  const double reach = p.pit_radius + 0.5 * p.wall_smoothing;
  if (p.pit_center.x - reach < p.origin.x || p.pit_center.y - reach < p.origin.y ||
      p.pit_center.x + reach > p.origin.x + p.extent.x || p.pit_center.y + reach > p.origin.y + p.extent.y) {
    throw ParameterError("shaft pit does not fit inside the extent");
  }
  return sample(p.origin, p.extent, p.cell_size, [&](Vec2 q) { return shaft_depth(p, q); });
}

Heightfield gen_saddle(const SaddleParams& p) {
  if (!(p.base_depth > 0.0)) throw ParameterError("saddle base_depth must be > 0");
  if (!(p.amplitude >= 0.0)) throw ParameterError("saddle amplitude must be >= 0");
  if (!(p.base_depth - p.amplitude > 0.0)) throw ParameterError("saddle amplitude must be < base_depth");
  return sample(p.origin, p.extent, p.cell_size, [&](Vec2 q) { return saddle_depth(p, q); });
}

Heightfield gen_channel(const ChannelParams& p) {
  if (!(p.shallow_depth > 0.0)) throw ParameterError("channel shallow_depth must be > 0");
  if (!(p.deep_depth > p.shallow_depth)) throw ParameterError("channel deep_depth must exceed shallow_depth");
  if (!(p.channel_width > 0.0)) throw ParameterError("channel_width must be > 0");
  if (!(p.bank_width >= 0.0)) throw ParameterError("channel bank_width must be >= 0");
  if (p.shelf_depth && !(*p.shelf_depth >= p.shallow_depth && *p.shelf_depth < p.deep_depth)) {
    throw ParameterError("channel shelf_depth must lie in [shallow_depth, deep_depth)");
  }
  const Vec2 c = channel_center(p);
  if (c.x < p.origin.x || c.y < p.origin.y || c.x > p.origin.x + p.extent.x || c.y > p.origin.y + p.extent.y) {
    throw ParameterError("channel center lies outside the extent");
  }
  return sample(p.origin, p.extent, p.cell_size, [&](Vec2 q) { return channel_depth(p, q); });
}

}  // namespace mdnuc
