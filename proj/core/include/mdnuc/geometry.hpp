#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace mdnuc {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }
constexpr Vec2 midpoint(Vec2 a, Vec2 b) { return {(a.x + b.x) * 0.5, (a.y + b.y) * 0.5}; }
constexpr Vec2 perp_left(Vec2 a) { return {-a.y, a.x}; }

/// Twice the signed area of triangle (a, b, c); positive when counter-clockwise.
constexpr double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

/// Signed shoelace area; positive for counter-clockwise rings.
double signed_area(std::span<const Vec2> ring);

/// Even-odd ray-crossing test. Points on the boundary may go either way.
bool point_in_ring(std::span<const Vec2> ring, Vec2 p);

/// Even-odd test over several rings (outer boundary plus holes).
bool point_in_rings(std::span<const std::vector<Vec2>> rings, Vec2 p);

/// True when open segments [a, b] and [c, d] cross at a single interior point
/// of both. Touching at an endpoint and collinear overlap do not count.
bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// Euclidean distance from p to segment [a, b].
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

/// True when ring has no two non-adjacent edges that intersect.
bool is_simple_ring(std::span<const Vec2> ring);

struct Box2 {
  Vec2 lo{};
  Vec2 hi{};

  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
};

Box2 bounding_box(std::span<const Vec2> points);

}  // namespace mdnuc
