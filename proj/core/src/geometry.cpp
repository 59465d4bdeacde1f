#include "mdnuc/geometry.hpp"

#include <algorithm>
#include <limits>

namespace mdnuc {

double signed_area(std::span<const Vec2> ring) {
  double twice = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = ring[i];
    const Vec2 b = ring[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

bool point_in_ring(std::span<const Vec2> ring, Vec2 p) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = ring[i];
    const Vec2 b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool point_in_rings(std::span<const std::vector<Vec2>> rings, Vec2 p) {
  bool inside = false;
  for (const auto& ring : rings) {
    if (point_in_ring(ring, p)) inside = !inside;
  }
  return inside;
}

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = sign(orient(a, b, c));
  const int o2 = sign(orient(a, b, d));
  const int o3 = sign(orient(c, d, a));
  const int o4 = sign(orient(c, d, b));
  return o1 * o2 < 0 && o3 * o4 < 0;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

bool is_simple_ring(std::span<const Vec2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = ring[i];
    const Vec2 b = ring[(i + 1) % n];
    if (a == b) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      const Vec2 c = ring[j];
      const Vec2 d = ring[(j + 1) % n];
      if (segments_cross(a, b, c, d)) return false;
      // Touching or collinear contact between non-adjacent edges.
      if (point_segment_distance(c, a, b) == 0.0 || point_segment_distance(d, a, b) == 0.0 ||
          point_segment_distance(a, c, d) == 0.0 || point_segment_distance(b, c, d) == 0.0) {
        return false;
      }
    }
  }
  return true;
}

Box2 bounding_box(std::span<const Vec2> points) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Box2 box{{inf, inf}, {-inf, -inf}};
  for (const Vec2 p : points) {
    box.lo.x = std::min(box.lo.x, p.x);
    box.lo.y = std::min(box.lo.y, p.y);
    box.hi.x = std::max(box.hi.x, p.x);
    box.hi.y = std::max(box.hi.y, p.y);
  }
  return box;
}

}  // namespace mdnuc
