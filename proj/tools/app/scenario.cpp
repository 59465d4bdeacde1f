#include "app/scenario.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <mdnuc/error.hpp>
#include <mdnuc/sonar.hpp>

namespace mdnuc::app {

using json = nlohmann::ordered_json;

Heightfield make_terrain(const RunConfig& config) {
  const auto& t = config.terrain;
  if (t.source == "shaft") {
    ShaftParams p = t.shaft;
    p.cell_size = t.cell_size;
    return gen_shaft(p);
  }
  if (t.source == "saddle") {
    SaddleParams p = t.saddle;
    p.cell_size = t.cell_size;
    return gen_saddle(p);
  }
  if (t.source == "channel") {
    ChannelParams p = t.channel;
    p.cell_size = t.cell_size;
    return gen_channel(p);
  }
  if (t.source == "file") {
    std::ifstream in(t.file);
    if (!in) throw ParameterError("cannot open terrain file " + t.file);
    GridReadOptions opts;
    opts.values_are_elevation = t.values_are_elevation;
    std::optional<RoiPolygon> roi;
    if (!config.roi.empty()) roi.emplace(config.roi);
    opts.roi = roi ? &*roi : nullptr;
    return load_grid(in, t.format == "xyz" ? GridFormat::XyzAscii : GridFormat::EsriAscii, opts);
  }
  throw ConfigError("unknown terrain source '" + t.source + "'");
}

RoiPolygon make_roi(const RunConfig& config, const Heightfield& hf) {
  if (!config.roi.empty()) return RoiPolygon(config.roi);
  const Vec2 lo = hf.node_position(0, 0);
  return RoiPolygon::rectangle(lo, hf.max_corner());
}

namespace {

std::vector<DepthRange> resolve_ranges(const RunConfig& config, const TriMesh& mesh) {
  if (!config.depth_ranges.empty()) return config.depth_ranges;
  double lo = mesh.face_mean_depth(0);
  double hi = lo;
  for (FaceId f = 1; f < mesh.face_count(); ++f) {
    lo = std::min(lo, mesh.face_mean_depth(f));
    hi = std::max(hi, mesh.face_mean_depth(f));
  }
  if (hi <= lo) return {{lo, lo + 1.0}};
  return equal_ranges(lo, hi, 2);
}

}  // namespace

Workspace prepare(const RunConfig& config) {
  Heightfield hf = make_terrain(config);
  RoiPolygon roi = make_roi(config, hf);
  require_roi_inside(hf, roi);
  RemeshOptions ro;
  ro.shrink = config.mesh.shrink;
  ro.diagonals = config.mesh.diagonals;
  RemeshResult rm = remesh(hf, roi, config.sonar.footprint(), ro);
  DualGraph dual(rm.mesh);
  const auto ranges = resolve_ranges(config, rm.mesh);
  PartitionOptions po;
  po.slope = config.mesh.gate_slope;
  Partition part = partition_mesh(rm.mesh, dual, ranges, po);
  std::vector<FaceId> all(rm.mesh.face_count());
  for (FaceId f = 0; f < all.size(); ++f) all[f] = f;
  const double mean = region_mean_depth(rm.mesh, all);
  return Workspace{config, std::move(hf), std::move(roi), std::move(rm), std::move(dual), std::move(part), mean};
}

bool planner_is_closed(const std::string& planner) { return planner == "nuc" || planner == "mdnuc"; }

std::vector<CoveragePath> plan(const Workspace& ws, const std::string& planner) {
  const auto& c = ws.config;
  NucOptions nuc;
  nuc.seed_face = c.mesh.seed_face;
  if (planner == "bf") return {plan_bf(ws.roi, ws.footprint(), c.sonar, ws.global_mean_depth, c.bf)};
  if (planner == "mdbf") return plan_mdbf(ws.partition, ws.mesh(), ws.footprint(), c.sonar, c.bf);
  if (planner == "nuc") return {plan_nuc(ws.mesh(), ws.dual, c.sonar, ws.global_mean_depth, nuc)};
  if (planner == "mdnuc") return {plan_mdnuc(ws.mesh(), ws.dual, ws.partition, c.sonar, nuc)};
  throw ConfigError("unknown planner '" + planner + "'");
}

std::string plan_summary_json(const Workspace& ws, const std::string& planner,
                              const std::vector<CoveragePath>& paths) {
  const double w = ws.footprint();
  const double theta_max = ws.config.sonar.theta_max_deg;
  const bool multi = planner == "mdnuc" || planner == "mdbf";
  json regions = json::array();
  if (multi) {
    for (const auto& r : ws.partition.regions) {
      regions.push_back({{"id", r.id},
                         {"range", {ws.partition.ranges[r.range].d_min, ws.partition.ranges[r.range].d_max}},
                         {"faces", r.faces.size()},
                         {"area", r.area},
                         {"mean_depth", r.mean_depth},
                         {"theta_deg", opening_angle(w, r.mean_depth, theta_max)}});
    }
  } else {
    regions.push_back({{"id", 0},
                       {"faces", ws.mesh().face_count()},
                       {"mean_depth", ws.global_mean_depth},
                       {"theta_deg", opening_angle(w, ws.global_mean_depth, theta_max)}});
  }
  json gates = json::array();
  if (multi) {
    for (const auto& [pair, e] : ws.partition.gates) gates.push_back({{"regions", {pair.first, pair.second}}, {"edge", e}});
  }
  double length = 0.0;
  std::size_t waypoints = 0;
  std::size_t switches = 0;
  json warnings = json::array();
  for (const auto& p : paths) {
    length += p.length();
    waypoints += p.size();
    switches += p.angle_switches.size();
    for (const auto& w : p.warnings) warnings.push_back(w);
  }
  if (multi) {
    for (const auto& w : ws.partition.warnings) warnings.push_back(w);
  }
  json j;
  j["scenario"] = ws.config.scenario;
  j["planner"] = planner;
  j["footprint_m"] = w;
  j["faces"] = ws.mesh().face_count();
  j["square_side_m"] = ws.remesh.square_side;
  j["dropped_faces"] = ws.remesh.dropped_faces;
  j["region_count"] = regions.size();
  j["regions"] = regions;
  j["gate_count"] = gates.size();
  j["gates"] = gates;
  j["blocked_edges"] = multi ? ws.partition.blocked.size() : 0;
  j["paths"] = paths.size();
  j["waypoints"] = waypoints;
  j["path_length_m"] = length;
  j["angle_switches"] = switches;
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

SurveyOutcome survey(const Heightfield& hf, const RoiPolygon& roi, const RunConfig& config,
                     const std::string& planner, const std::vector<CoveragePath>& paths) {
  const auto t0 = std::chrono::steady_clock::now();
  SimulationOptions so;
  so.eval_resolution = config.eval_resolution();
  so.ping_spacing = config.survey.ping_spacing;
  so.noise_std = config.survey.noise_std;
  so.seed = config.survey.seed;
  so.sweep_turns = config.survey.sweep_turns;
  so.sweep_connectors = config.survey.sweep_connectors;
  SimulationResult sim = simulate(hf, roi, paths, config.sonar, so);
  Report report = evaluate(sim.grid, paths);
  report.scenario = config.scenario;
  report.planner = planner;
  report.config_hash = config_hash(config);
  report.pings = sim.pings;
  report.skipped_pings = sim.skipped_pings;
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(report), std::move(sim)};
}

void write_paths_csv(std::ostream& out, const std::vector<CoveragePath>& paths) {
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::ostringstream ss;
    write_path_csv(ss, paths[i]);
    std::string text = ss.str();
    if (i > 0) text.erase(0, text.find('\n') + 1);
    out << text;
  }
  if (paths.empty()) write_path_csv(out, CoveragePath{});
}

std::vector<CoveragePath> read_paths_csv(std::istream& in, const std::string& planner) {
  const bool closed = planner_is_closed(planner);
  CoveragePath all = read_path_csv(in, closed);
  all.planner = planner;
  if (closed || all.waypoints.empty()) return {all};
  std::vector<CoveragePath> paths;
  for (const auto& wp : all.waypoints) {
    if (paths.empty() || paths.back().waypoints.back().region != wp.region) {
      paths.emplace_back();
      paths.back().planner = planner;
    }
    paths.back().waypoints.push_back(wp);
  }
  for (auto& p : paths) p.update_switches();
  return paths;
}

void write_paths_geojson(std::ostream& out, const std::vector<CoveragePath>& paths) {
  if (paths.size() == 1) {
    write_path_geojson(out, paths.front());
    return;
  }
  json features = json::array();
  for (const auto& p : paths) {
    std::ostringstream ss;
    write_path_geojson(ss, p);
    features.push_back(json::parse(ss.str()));
  }
  out << json{{"type", "FeatureCollection"}, {"features", features}}.dump(1) << '\n';
}

}  // namespace mdnuc::app
