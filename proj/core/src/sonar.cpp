#include "mdnuc/sonar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mdnuc/error.hpp"

namespace mdnuc {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

void SonarConfig::validate() const {
  if (n_beams < 2) throw ParameterError("n_beams must be >= 2");
  if (!(resolution > 0.0)) throw ParameterError("sonar resolution must be > 0");
  if (!(theta_max_deg > 0.0 && theta_max_deg < 180.0)) throw ParameterError("theta_max must lie in (0, 180)");
  if (!(max_range > 0.0)) throw ParameterError("max_range must be > 0");
  if (!(march_step_fraction > 0.0) || !(tolerance_fraction > 0.0)) {
    throw ParameterError("march step and tolerance fractions must be > 0");
  }
}

double opening_angle(double w, double d, double theta_max_deg) {
  if (!(d > 0.0)) throw DomainError("opening_angle needs depth > 0");
  if (!(w > 0.0)) throw DomainError("opening_angle needs footprint width > 0");
  return std::min(2.0 * std::atan(w / (2.0 * d)) / kDeg, theta_max_deg);
}

double footprint_width(double theta_deg, double d) {
  if (!(theta_deg > 0.0 && theta_deg < 180.0)) throw DomainError("footprint_width needs 0 < theta < 180");
  if (!(d > 0.0)) throw DomainError("footprint_width needs depth > 0");
  return 2.0 * d * std::tan(0.5 * theta_deg * kDeg);
}

namespace {

// Refines a bracket [lo, hi] with gap(lo) > 0 >= gap(hi).
template <class Gap>
double refine(Gap&& gap, double lo, double hi, double tol) {
  for (int iter = 0; iter < 200; ++iter) {
    if (hi - lo <= tol && std::abs(gap(hi)) <= tol) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (gap(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

Vec3 along(Vec3 o, Vec3 d, double t) { return {o.x + d.x * t, o.y + d.y * t, o.z + d.z * t}; }

}  // namespace

std::optional<Vec3> cast_ray(const Heightfield& hf, Vec3 origin, Vec3 direction, const SonarConfig& cfg) {
  if (!(direction.z > 0.0)) throw DomainError("ray direction must point down");
  const double step = cfg.march_step();
  const auto gap = [&](double t) {
    const Vec3 p = along(origin, direction, t);
    return hf.depth_at_unchecked({p.x, p.y}) - p.z;
  };
  double prev = 0.0;
  for (double t = 0.0;; t += step) {
    if (t > cfg.max_range) return std::nullopt;
    const Vec3 p = along(origin, direction, t);
    if (!hf.contains({p.x, p.y})) return std::nullopt;
    if (gap(t) <= 0.0) {
      const double hit = t == 0.0 ? 0.0 : refine(gap, prev, t, cfg.tolerance());
      return along(origin, direction, hit);
    }
    prev = t;
  }
}

RayCaster::RayCaster(const Heightfield& hf, const SonarConfig& cfg) : hf_(&hf), cfg_(cfg) {
  cfg_.validate();
  const std::size_t cells_x = hf.nx() - 1;
  const std::size_t cells_y = hf.ny() - 1;
  tiles_x_ = (cells_x + tile_cells_ - 1) / tile_cells_;
  tiles_y_ = (cells_y + tile_cells_ - 1) / tile_cells_;
  tiles_.resize(tiles_x_ * tiles_y_, {std::numeric_limits<double>::infinity(), 0.0});
  for (std::size_t j = 0; j < cells_y; ++j) {
    for (std::size_t i = 0; i < cells_x; ++i) {
      Tile& tile = tiles_[(j / tile_cells_) * tiles_x_ + i / tile_cells_];
      tile.min_depth = std::min({tile.min_depth, hf.node(i, j), hf.node(i + 1, j), hf.node(i, j + 1),
                                 hf.node(i + 1, j + 1)});
      tile.slope = std::max(tile.slope, hf.cell_slope_bound(i, j));
    }
  }
}

const RayCaster::Tile& RayCaster::tile_at(Vec2 p) const {
  const double span = static_cast<double>(tile_cells_) * hf_->cell_size();
  const auto ti = std::min(static_cast<std::size_t>(std::max((p.x - hf_->origin().x) / span, 0.0)), tiles_x_ - 1);
  const auto tj = std::min(static_cast<std::size_t>(std::max((p.y - hf_->origin().y) / span, 0.0)), tiles_y_ - 1);
  return tiles_[tj * tiles_x_ + ti];
}

std::optional<Vec3> RayCaster::cast(Vec3 origin, Vec3 direction) const {
  if (!(direction.z > 0.0)) throw DomainError("ray direction must point down");
  const Heightfield& hf = *hf_;
  const double step = cfg_.march_step();
  const double horizontal = std::hypot(direction.x, direction.y);
  const double span = static_cast<double>(tile_cells_) * hf.cell_size();
  const Vec2 o = hf.origin();
  const auto gap = [&](double t) {
    const Vec3 p = along(origin, direction, t);
    return hf.depth_at_unchecked({p.x, p.y}) - p.z;
  };

  // Nothing can be hit above the shallowest node.
  double t = std::max(0.0, (hf.min_depth() - origin.z) / direction.z);
  double prev = t;
  bool first = true;
  while (true) {
    if (t > cfg_.max_range) return std::nullopt;
    const Vec3 p = along(origin, direction, t);
    const Vec2 xy{p.x, p.y};
    if (!hf.contains(xy)) return std::nullopt;
    const double g = hf.depth_at_unchecked(xy) - p.z;
    if (g <= 0.0) {
      const double hit = first ? t : refine(gap, prev, t, cfg_.tolerance());
      return along(origin, direction, hit);
    }
    first = false;

    const Tile& tile = tile_at(xy);
    double safe = g / (direction.z + tile.slope * horizontal);
    if (p.z < tile.min_depth) safe = std::max(safe, (tile.min_depth - p.z) / direction.z);
    double exit = std::numeric_limits<double>::infinity();
    if (horizontal > 0.0) {
      const double tx = std::floor((xy.x - o.x) / span);
      const double ty = std::floor((xy.y - o.y) / span);
      if (direction.x > 0.0) exit = std::min(exit, (o.x + (tx + 1.0) * span - xy.x) / direction.x);
      if (direction.x < 0.0) exit = std::min(exit, (o.x + tx * span - xy.x) / direction.x);
      if (direction.y > 0.0) exit = std::min(exit, (o.y + (ty + 1.0) * span - xy.y) / direction.y);
      if (direction.y < 0.0) exit = std::min(exit, (o.y + ty * span - xy.y) / direction.y);
      exit += 1e-9;
    }
    prev = t;
    t += std::max(std::min(safe, exit), step);
  }
}

std::vector<double> fan_angles(double theta_deg, const SonarConfig& cfg) {
  const double half = 0.5 * theta_deg * kDeg;
  const auto n = static_cast<std::size_t>(cfg.n_beams);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = cfg.spacing == BeamSpacing::Equiangular ? u * half : std::atan(u * std::tan(half));
  }
  return out;
}

Ping ping(const RayCaster& caster, Vec2 origin_xy, Vec2 heading, double theta_deg) {
  const double len = norm(heading);
  if (!(len > 0.0)) throw DomainError("ping heading must be non-zero");
  Ping out;
  out.origin = {origin_xy.x, origin_xy.y, 0.0};
  out.heading = heading / len;
  out.theta_deg = theta_deg;
  const Vec2 across = perp_left(out.heading);
  const auto angles = fan_angles(theta_deg, caster.config());
  out.hits.reserve(angles.size());
  for (const double phi : angles) {
    const double s = std::sin(phi);
    const Vec3 dir{across.x * s, across.y * s, std::cos(phi)};
    if (const auto hit = caster.cast(out.origin, dir)) out.hits.push_back({hit->x, hit->y});
  }
  return out;
}

Ping ping(const Heightfield& hf, Vec2 origin_xy, Vec2 heading, double theta_deg, const SonarConfig& cfg) {
  return ping(RayCaster(hf, cfg), origin_xy, heading, theta_deg);
}

}  // namespace mdnuc
