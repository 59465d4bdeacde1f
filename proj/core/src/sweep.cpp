#include <algorithm>
#include <cmath>
#include <map>

#include "mdnuc/error.hpp"
#include "mdnuc/planner.hpp"

namespace mdnuc {

Box2 Outline::bounds() const {
  std::vector<Vec2> all;
  for (const auto& r : rings) all.insert(all.end(), r.begin(), r.end());
  return bounding_box(all);
}

double Outline::area() const {
  double a = 0.0;
  for (const auto& r : rings) a += signed_area(r);
  return a;
}

Outline outline_of(const RoiPolygon& roi) {
  Outline o;
  o.rings.emplace_back(roi.vertices().begin(), roi.vertices().end());
  return o;
}

namespace {

std::vector<Vec2> drop_collinear(std::vector<Vec2> ring) {
  bool changed = true;
  while (changed && ring.size() > 3) {
    changed = false;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Vec2 prev = ring[(i + ring.size() - 1) % ring.size()];
      const Vec2 next = ring[(i + 1) % ring.size()];
      const double scale = distance(prev, ring[i]) * distance(ring[i], next);
      if (std::abs(orient(prev, ring[i], next)) <= 1e-12 * scale) {
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return ring;
}

}  // namespace

Outline region_outline(const TriMesh& mesh, std::span<const FaceId> faces) {
  std::vector<char> member(mesh.face_count(), 0);
  for (const FaceId f : faces) member[f] = 1;
  // Directed boundary edges keep the face orientation: outer rings come out
  // counter-clockwise, holes clockwise.
  std::multimap<VertexId, VertexId> next;
  for (const FaceId f : faces) {
    for (int k = 0; k < 3; ++k) {
      const FaceId g = mesh.neighbor(f, k);
      if (g != kNoFace && member[g]) continue;
      next.emplace(mesh.faces()[f][static_cast<std::size_t>(k)], mesh.faces()[f][static_cast<std::size_t>((k + 1) % 3)]);
    }
  }
  Outline out;
  while (!next.empty()) {
    const VertexId start = next.begin()->first;
    std::vector<Vec2> ring;
    VertexId cur = start;
    do {
      const auto it = next.find(cur);
      if (it == next.end()) throw std::logic_error("open boundary while tracing a region outline");
      ring.push_back(mesh.vertex_xy(cur));
      cur = it->second;
      next.erase(it);
    } while (cur != start);
    out.rings.push_back(drop_collinear(std::move(ring)));
  }
  return out;
}

namespace {

struct Crossing {
  double along;      // coordinate along the track
  std::size_t ring;
  std::size_t edge;  // ring edge index (edge k joins vertex k and k+1)
};

struct Piece {
  Vec2 a, b;
  Crossing ca, cb;
};

// Boundary walk from a point on ring edge ea to a point on ring edge eb,
// choosing the shorter direction. Returns the intermediate ring vertices.
std::vector<Vec2> boundary_walk(const std::vector<Vec2>& ring, Vec2 from, std::size_t ea, Vec2 to, std::size_t eb) {
  const std::size_t n = ring.size();
  if (ea == eb) return {};
  std::vector<Vec2> forward;
  double fwd_len = 0.0;
  {
    Vec2 last = from;
    for (std::size_t k = ea; k != eb; k = (k + 1) % n) {
      const Vec2 v = ring[(k + 1) % n];
      fwd_len += distance(last, v);
      forward.push_back(v);
      last = v;
    }
    fwd_len += distance(last, to);
  }
  std::vector<Vec2> backward;
  double back_len = 0.0;
  {
    Vec2 last = from;
    for (std::size_t k = ea; k != eb; k = (k + n - 1) % n) {
      const Vec2 v = ring[k];
      back_len += distance(last, v);
      backward.push_back(v);
      last = v;
    }
    back_len += distance(last, to);
  }
  return back_len < fwd_len ? backward : forward;
}

void push_point(CoveragePath& path, Vec2 p, double theta, RegionId region, bool connector_before) {
  if (!path.waypoints.empty() && path.waypoints.back().position == p) return;
  if (!path.waypoints.empty()) path.connector.push_back(connector_before ? 1 : 0);
  path.waypoints.push_back({p, theta, region});
}

}  // namespace

CoveragePath plan_bf(const Outline& outline, double w, double theta_deg, const BfOptions& options) {
  if (!(w > 0.0)) throw ParameterError("track spacing must be > 0");
  if (outline.rings.empty()) throw ParameterError("empty outline");
  const Box2 box = outline.bounds();
  const bool along_x = options.axis == SweepAxis::X || (options.axis == SweepAxis::Auto && box.width() >= box.height());
  // Work in (along, across) coordinates.
  const auto to_local = [&](Vec2 p) { return along_x ? p : Vec2{p.y, p.x}; };
  const auto to_world = [&](Vec2 p) { return along_x ? p : Vec2{p.y, p.x}; };
  const double lo = along_x ? box.lo.y : box.lo.x;
  const double hi = along_x ? box.hi.y : box.hi.x;
  const double span = hi - lo;

  CoveragePath path;
  path.planner = "bf";

  std::vector<double> tracks;
  if (span < w) {
    tracks.push_back(0.5 * (lo + hi));
    path.warnings.push_back("footprint wider than the survey area; single track");
  } else {
    const auto n = static_cast<std::size_t>(std::ceil(span / w - 1e-9));
    for (std::size_t k = 0; k < n; ++k) tracks.push_back(std::min(lo + 0.5 * w + static_cast<double>(k) * w, hi - 0.5 * w));
  }

  std::vector<std::vector<Piece>> per_track;
  for (std::size_t k = 0; k < tracks.size(); ++k) {
    const double c = tracks[k];
    std::vector<Crossing> xs;
    for (std::size_t r = 0; r < outline.rings.size(); ++r) {
      const auto& ring = outline.rings[r];
      for (std::size_t e = 0; e < ring.size(); ++e) {
        const Vec2 a = to_local(ring[e]);
        const Vec2 b = to_local(ring[(e + 1) % ring.size()]);
        if ((a.y > c) == (b.y > c)) continue;
        xs.push_back({a.x + (c - a.y) * (b.x - a.x) / (b.y - a.y), r, e});
      }
    }
    std::sort(xs.begin(), xs.end(), [](const Crossing& p, const Crossing& q) { return p.along < q.along; });
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
      if (xs[i + 1].along - xs[i].along <= 1e-9) continue;
      pieces.push_back({to_world({xs[i].along, c}), to_world({xs[i + 1].along, c}), xs[i], xs[i + 1]});
    }
    if (k % 2 == 1) {
      std::reverse(pieces.begin(), pieces.end());
      for (auto& p : pieces) {
        std::swap(p.a, p.b);
        std::swap(p.ca, p.cb);
      }
    }
    if (!pieces.empty()) per_track.push_back(std::move(pieces));
  }

  if (per_track.empty()) {
    // Too narrow for any inset track: one pass along the center line.
    const double c = 0.5 * (lo + hi);
    const double a0 = along_x ? box.lo.x : box.lo.y;
    const double a1 = along_x ? box.hi.x : box.hi.y;
    path.warnings.push_back("survey area too small for a track; single pass over the center line");
    push_point(path, to_world({a0, c}), theta_deg, 0, false);
    push_point(path, to_world({a1, c}), theta_deg, 0, false);
    if (path.waypoints.size() < 2) throw ParameterError("degenerate survey area");
    return path;
  }

  bool have_prev = false;
  Piece prev{};
  for (const auto& pieces : per_track) {
    for (const Piece& p : pieces) {
      if (have_prev) {
        if (options.boundary_connectors && prev.cb.ring == p.ca.ring) {
          for (const Vec2 v : boundary_walk(outline.rings[p.ca.ring], prev.b, prev.cb.edge, p.a, p.ca.edge)) {
            push_point(path, v, theta_deg, 0, true);
          }
        }
        push_point(path, p.a, theta_deg, 0, true);
      } else {
        push_point(path, p.a, theta_deg, 0, false);
      }
      push_point(path, p.b, theta_deg, 0, false);
      prev = p;
      have_prev = true;
    }
  }
  if (path.waypoints.size() < 2) throw ParameterError("degenerate survey area");
  return path;
}

CoveragePath plan_bf(const RoiPolygon& roi, double w, const SonarConfig& sonar, double global_mean_depth,
                     const BfOptions& options) {
  return plan_bf(outline_of(roi), w, opening_angle(w, global_mean_depth, sonar.theta_max_deg), options);
}

std::vector<CoveragePath> plan_mdbf(const Partition& partition, const TriMesh& mesh, double w,
                                    const SonarConfig& sonar, const BfOptions& options) {
  std::vector<CoveragePath> paths;
  for (const auto& region : partition.regions) {
    const double theta = opening_angle(w, region.mean_depth, sonar.theta_max_deg);
    CoveragePath p = plan_bf(region_outline(mesh, region.faces), w, theta, options);
    for (auto& wp : p.waypoints) wp.region = region.id;
    p.planner = "mdbf";
    for (auto& msg : p.warnings) msg = "region " + std::to_string(region.id) + ": " + msg;
    paths.push_back(std::move(p));
  }
  return paths;
}

CoveragePath resample(const CoveragePath& path, double step) {
  if (!(step > 0.0)) throw ParameterError("resample step must be > 0");
  CoveragePath out;
  out.closed = path.closed;
  out.planner = path.planner;
  out.warnings = path.warnings;
  const std::size_t n = path.waypoints.size();
  if (n < 2) {
    out.waypoints = path.waypoints;
    out.update_switches();
    return out;
  }
  const bool has_connectors = !path.connector.empty();
  const std::size_t segments = path.closed ? n : n - 1;
  for (std::size_t i = 0; i < segments; ++i) {
    const Waypoint& a = path.waypoints[i];
    const Waypoint& b = path.waypoints[(i + 1) % n];
    const double len = distance(a.position, b.position);
    const auto pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / step - 1e-9)));
    const char conn = has_connectors && i < path.connector.size() ? path.connector[i] : 0;
    for (std::size_t k = 0; k < pieces; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(pieces);
      out.waypoints.push_back({k == 0 ? a.position : a.position + (b.position - a.position) * t, a.theta_deg, a.region});
      if (has_connectors) out.connector.push_back(conn);
    }
  }
  if (!path.closed) out.waypoints.push_back(path.waypoints.back());
  out.update_switches();
  return out;
}

}  // namespace mdnuc
