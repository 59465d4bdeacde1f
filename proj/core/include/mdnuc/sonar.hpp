#pragma once

#include <optional>
#include <vector>

#include "mdnuc/geometry.hpp"
#include "mdnuc/terrain.hpp"

namespace mdnuc {

enum class BeamSpacing {
  /// Fan angles uniformly spaced on [-theta/2, theta/2].
  Equiangular,
  /// Fan angles chosen so flat-bottom hits are uniformly spaced.
  Equidistant,
};

struct SonarConfig {
  int n_beams = 256;
  /// Target sounding spacing in meters.
  double resolution = 0.10;
  double theta_max_deg = 160.0;
  double max_range = 200.0;
  BeamSpacing spacing = BeamSpacing::Equiangular;
  /// March step and refinement tolerance as fractions of `resolution`.
  double march_step_fraction = 0.25;
  double tolerance_fraction = 0.10;

  double footprint() const { return n_beams * resolution; }
  double march_step() const { return resolution * march_step_fraction; }
  double tolerance() const { return resolution * tolerance_fraction; }
  void validate() const;
};

/// Flat-bottom opening angle in degrees: min(2 atan(w / 2d), theta_max).
double opening_angle(double w, double d, double theta_max_deg = 160.0);

/// Flat-bottom footprint width: 2 d tan(theta / 2).
double footprint_width(double theta_deg, double d);

/// Ray caster over a heightfield. Keeps per-tile depth bounds so that rays can
/// skip open water quickly; results match a fixed-step march with the
/// configured step.
class RayCaster {
 public:
  RayCaster(const Heightfield& hf, const SonarConfig& cfg);

  /// First crossing of the ray with the seafloor, or nullopt when the ray
  /// leaves the heightfield or exceeds max_range. direction.z must be > 0.
  std::optional<Vec3> cast(Vec3 origin, Vec3 direction) const;

  const Heightfield& heightfield() const { return *hf_; }
  const SonarConfig& config() const { return cfg_; }

 private:
  struct Tile {
    double min_depth;
    double slope;
  };

  const Tile& tile_at(Vec2 p) const;

  const Heightfield* hf_;
  SonarConfig cfg_;
  std::size_t tile_cells_ = 8;
  std::size_t tiles_x_ = 0;
  std::size_t tiles_y_ = 0;
  std::vector<Tile> tiles_;
};

/// Reference fixed-step march (step = cfg.march_step(), bisection refine).
std::optional<Vec3> cast_ray(const Heightfield& hf, Vec3 origin, Vec3 direction, const SonarConfig& cfg);

struct Ping {
  Vec3 origin;
  Vec2 heading;
  double theta_deg = 0.0;
  std::vector<Vec2> hits;
};

/// Fan angles (radians, across-track) for one ping.
std::vector<double> fan_angles(double theta_deg, const SonarConfig& cfg);

/// Fires n_beams rays in the vertical plane perpendicular to heading. Misses
/// are omitted from hits.
Ping ping(const RayCaster& caster, Vec2 origin_xy, Vec2 heading, double theta_deg);
Ping ping(const Heightfield& hf, Vec2 origin_xy, Vec2 heading, double theta_deg, const SonarConfig& cfg);

}  // namespace mdnuc
