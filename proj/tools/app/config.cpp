#include "app/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <mdnuc/coverage.hpp>
#include <mdnuc/error.hpp>
#include <json.hpp>

namespace mdnuc::app {

using json = nlohmann::ordered_json;

namespace {

// Square ROI of n lattice squares per side, centered at c, so that the
// remeshing lattice (anchored at the ROI corner) tiles it exactly.
std::vector<Vec2> lattice_square(Vec2 c, int n, double w, double shrink) {
  const double side = n * 2.0 * w * (1.0 - shrink) / std::sqrt(2.0);
  const double h = side / 2.0;
  return {{c.x - h, c.y - h}, {c.x + h, c.y - h}, {c.x + h, c.y + h}, {c.x - h, c.y + h}};
}

RunConfig shaft_preset() {
  RunConfig c;
  c.scenario = "shaft";
  c.terrain.source = "shaft";
  c.terrain.shaft.extent = {160.0, 160.0};
  c.terrain.shaft.plain_depth = 7.0;
  c.terrain.shaft.pit_depth = 24.0;
  c.terrain.shaft.pit_center = {80.0, 80.0};
  c.terrain.shaft.pit_radius = 40.0;
  c.terrain.shaft.wall_smoothing = 6.0;
  c.mesh.shrink = 0.15;
  c.mesh.diagonals = DiagonalPattern::AlternatingRows;
  c.roi = lattice_square({80.0, 80.0}, 5, 25.6, c.mesh.shrink);
  c.depth_ranges = {{7.0, 15.5}, {15.5, 24.0}};
  return c;
}

RunConfig saddle_preset() {
  RunConfig c;
  c.scenario = "saddle";
  c.terrain.source = "saddle";
  c.terrain.saddle.extent = {160.0, 160.0};
  c.terrain.saddle.base_depth = 15.0;
  c.terrain.saddle.amplitude = 10.0;
  c.mesh.shrink = 0.15;
  c.mesh.diagonals = DiagonalPattern::AlternatingRows;
  c.roi = lattice_square({80.0, 80.0}, 5, 25.6, c.mesh.shrink);
  c.depth_ranges = equal_ranges(5.0, 25.0, 4);
  return c;
}

RunConfig channel_preset() {
  RunConfig c;
  c.scenario = "channel";
  c.terrain.source = "channel";
  c.terrain.channel.extent = {350.0, 350.0};
  // Channel along x with its wall half a meter below a lattice line shared by
  // the 10 cm and 25 cm meshes; the bank rises from 12 m to 3.26 m.
  c.terrain.channel.channel_axis_deg = 0.0;
  c.terrain.channel.channel_width = 300.0;
  c.terrain.channel.channel_center = Vec2{175.0, 24.5};
  c.terrain.channel.shelf_depth = 12.0;
  c.terrain.channel.bank_width = 140.0;
  c.sonar.spacing = BeamSpacing::Equidistant;
  c.mesh.shrink = 0.15;
  c.mesh.diagonals = DiagonalPattern::AlternatingRows;
  c.roi = lattice_square({175.0, 175.0}, 10, 25.6, c.mesh.shrink);
  c.depth_ranges = {{3.26, 15.0}, {15.0, 25.96}};
  return c;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where.empty() ? what : where + ": " + what);
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail(where, "unknown key '" + key + "'");
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->template get<T>();
  } catch (const json::exception&) {
    fail(where.empty() ? key : where + "." + key, "wrong type");
  }
}

void read_double(const json& j, const char* key, double& out, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_number()) fail(where + "." + key, "expected a number");
  out = it->get<double>();
}

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 vec_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(where, "expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

void read_vec(const json& j, const char* key, Vec2& out, const std::string& where) {
  auto it = j.find(key);
  if (it != j.end()) out = vec_from(*it, where + "." + key);
}

std::string spacing_name(BeamSpacing s) { return s == BeamSpacing::Equiangular ? "equiangular" : "equidistant"; }

BeamSpacing spacing_from(const std::string& s) {
  if (s == "equiangular") return BeamSpacing::Equiangular;
  if (s == "equidistant") return BeamSpacing::Equidistant;
  throw ConfigError("sonar.spacing: expected equiangular or equidistant, got '" + s + "'");
}

std::string axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::X: return "x";
    case SweepAxis::Y: return "y";
    default: return "auto";
  }
}

SweepAxis axis_from(const std::string& s) {
  if (s == "auto") return SweepAxis::Auto;
  if (s == "x") return SweepAxis::X;
  if (s == "y") return SweepAxis::Y;
  throw ConfigError("bf.axis: expected auto, x or y, got '" + s + "'");
}

std::string slope_name(GateSlope s) { return s == GateSlope::CrossEdge ? "cross_edge" : "along_edge"; }

GateSlope slope_from(const std::string& s) {
  if (s == "cross_edge") return GateSlope::CrossEdge;
  if (s == "along_edge") return GateSlope::AlongEdge;
  throw ConfigError("mesh.gate_slope: expected cross_edge or along_edge, got '" + s + "'");
}

json to_json(const RunConfig& c, bool with_output) {
  const auto& t = c.terrain;
  json terrain;
  terrain["source"] = t.source;
  terrain["cell_size"] = t.cell_size;
  terrain["shaft"] = {{"origin", vec_json(t.shaft.origin)},
                      {"extent", vec_json(t.shaft.extent)},
                      {"plain_depth", t.shaft.plain_depth},
                      {"pit_depth", t.shaft.pit_depth},
                      {"pit_center", vec_json(t.shaft.pit_center)},
                      {"pit_radius", t.shaft.pit_radius},
                      {"wall_smoothing", t.shaft.wall_smoothing}};
  terrain["saddle"] = {{"origin", vec_json(t.saddle.origin)},
                       {"extent", vec_json(t.saddle.extent)},
                       {"base_depth", t.saddle.base_depth},
                       {"amplitude", t.saddle.amplitude}};
  terrain["channel"] = {{"origin", vec_json(t.channel.origin)},
                        {"extent", vec_json(t.channel.extent)},
                        {"shallow_depth", t.channel.shallow_depth},
                        {"deep_depth", t.channel.deep_depth},
                        {"channel_axis_deg", t.channel.channel_axis_deg},
                        {"channel_center", t.channel.channel_center ? vec_json(*t.channel.channel_center) : json()},
                        {"channel_width", t.channel.channel_width},
                        {"bank_width", t.channel.bank_width},
                        {"shelf_depth", t.channel.shelf_depth ? json(*t.channel.shelf_depth) : json()}};
  terrain["file"] = {{"path", t.file}, {"format", t.format}, {"values_are_elevation", t.values_are_elevation}};

  json roi = json::array();
  for (const auto& v : c.roi) roi.push_back(vec_json(v));
  json ranges = json::array();
  for (const auto& r : c.depth_ranges) ranges.push_back(json::array({r.d_min, r.d_max}));

  json j;
  j["scenario"] = c.scenario;
  j["terrain"] = terrain;
  j["roi"] = roi;
  j["depth_ranges"] = ranges;
  j["mesh"] = {{"shrink", c.mesh.shrink},
               {"diagonals", to_string(c.mesh.diagonals)},
               {"seed_face", c.mesh.seed_face},
               {"gate_slope", slope_name(c.mesh.gate_slope)}};
  j["sonar"] = {{"n_beams", c.sonar.n_beams},
                {"resolution", c.sonar.resolution},
                {"theta_max_deg", c.sonar.theta_max_deg},
                {"max_range", c.sonar.max_range},
                {"spacing", spacing_name(c.sonar.spacing)}};
  j["planners"] = c.planners;
  j["bf"] = {{"axis", axis_name(c.bf.axis)}, {"boundary_connectors", c.bf.boundary_connectors}};
  j["survey"] = {{"eval_resolution", c.survey.eval_resolution},
                 {"ping_spacing", c.survey.ping_spacing},
                 {"noise_std", c.survey.noise_std},
                 {"seed", c.survey.seed},
                 {"sweep_turns", c.survey.sweep_turns},
                 {"sweep_connectors", c.survey.sweep_connectors}};
  if (with_output) j["output_dir"] = c.output_dir;
  return j;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"shaft", "saddle", "channel"};
  return names;
}

RunConfig preset(const std::string& name) {
  if (name == "shaft") return shaft_preset();
  if (name == "saddle") return saddle_preset();
  if (name == "channel") return channel_preset();
  throw ConfigError("unknown preset '" + name + "'; available presets: shaft, saddle, channel");
}

const std::vector<std::string>& planner_names() {
  static const std::vector<std::string> names{"bf", "mdbf", "nuc", "mdnuc"};
  return names;
}

std::string to_string(DiagonalPattern p) {
  switch (p) {
    case DiagonalPattern::AlternatingRows: return "alternating_rows";
    case DiagonalPattern::Uniform: return "uniform";
    default: return "checkerboard";
  }
}

DiagonalPattern diagonals_from_string(const std::string& s) {
  if (s == "checkerboard") return DiagonalPattern::Checkerboard;
  if (s == "alternating_rows") return DiagonalPattern::AlternatingRows;
  if (s == "uniform") return DiagonalPattern::Uniform;
  throw ConfigError("mesh.diagonals: expected checkerboard, alternating_rows or uniform, got '" + s + "'");
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  check_keys(j, "", {"scenario", "terrain", "roi", "depth_ranges", "mesh", "sonar", "planners", "bf", "survey",
                     "output_dir"});
  RunConfig c;
  read(j, "scenario", c.scenario, "");
  read(j, "output_dir", c.output_dir, "");

  if (auto it = j.find("terrain"); it != j.end()) {
    const json& t = *it;
    check_keys(t, "terrain", {"source", "cell_size", "shaft", "saddle", "channel", "file"});
    read(t, "source", c.terrain.source, "terrain");
    read_double(t, "cell_size", c.terrain.cell_size, "terrain");
    if (auto s = t.find("shaft"); s != t.end()) {
      check_keys(*s, "terrain.shaft",
                 {"origin", "extent", "plain_depth", "pit_depth", "pit_center", "pit_radius", "wall_smoothing"});
      auto& p = c.terrain.shaft;
      read_vec(*s, "origin", p.origin, "terrain.shaft");
      read_vec(*s, "extent", p.extent, "terrain.shaft");
      read_double(*s, "plain_depth", p.plain_depth, "terrain.shaft");
      read_double(*s, "pit_depth", p.pit_depth, "terrain.shaft");
      read_vec(*s, "pit_center", p.pit_center, "terrain.shaft");
      read_double(*s, "pit_radius", p.pit_radius, "terrain.shaft");
      read_double(*s, "wall_smoothing", p.wall_smoothing, "terrain.shaft");
    }
    if (auto s = t.find("saddle"); s != t.end()) {
      check_keys(*s, "terrain.saddle", {"origin", "extent", "base_depth", "amplitude"});
      auto& p = c.terrain.saddle;
      read_vec(*s, "origin", p.origin, "terrain.saddle");
      read_vec(*s, "extent", p.extent, "terrain.saddle");
      read_double(*s, "base_depth", p.base_depth, "terrain.saddle");
      read_double(*s, "amplitude", p.amplitude, "terrain.saddle");
    }
    if (auto s = t.find("channel"); s != t.end()) {
      check_keys(*s, "terrain.channel",
                 {"origin", "extent", "shallow_depth", "deep_depth", "channel_axis_deg", "channel_center",
                  "channel_width", "bank_width", "shelf_depth"});
      auto& p = c.terrain.channel;
      read_vec(*s, "origin", p.origin, "terrain.channel");
      read_vec(*s, "extent", p.extent, "terrain.channel");
      read_double(*s, "shallow_depth", p.shallow_depth, "terrain.channel");
      read_double(*s, "deep_depth", p.deep_depth, "terrain.channel");
      read_double(*s, "channel_axis_deg", p.channel_axis_deg, "terrain.channel");
      if (auto cc = s->find("channel_center"); cc != s->end()) {
        if (cc->is_null()) {
          p.channel_center.reset();
        } else {
          p.channel_center = vec_from(*cc, "terrain.channel.channel_center");
        }
      }
      read_double(*s, "channel_width", p.channel_width, "terrain.channel");
      read_double(*s, "bank_width", p.bank_width, "terrain.channel");
      if (auto sd = s->find("shelf_depth"); sd != s->end()) {
        if (sd->is_null()) {
          p.shelf_depth.reset();
        } else if (sd->is_number()) {
          p.shelf_depth = sd->get<double>();
        } else {
          fail("terrain.channel.shelf_depth", "expected a number or null");
        }
      }
    }
    if (auto f = t.find("file"); f != t.end()) {
      check_keys(*f, "terrain.file", {"path", "format", "values_are_elevation"});
      read(*f, "path", c.terrain.file, "terrain.file");
      read(*f, "format", c.terrain.format, "terrain.file");
      read(*f, "values_are_elevation", c.terrain.values_are_elevation, "terrain.file");
    }
  }

  if (auto it = j.find("roi"); it != j.end()) {
    if (!it->is_array()) fail("roi", "expected a list of [x, y]");
    c.roi.clear();
    for (const auto& v : *it) c.roi.push_back(vec_from(v, "roi"));
  }
  if (auto it = j.find("depth_ranges"); it != j.end()) {
    if (!it->is_array()) fail("depth_ranges", "expected a list of [d_min, d_max]");
    c.depth_ranges.clear();
    for (const auto& r : *it) {
      const Vec2 v = vec_from(r, "depth_ranges");
      c.depth_ranges.push_back({v.x, v.y});
    }
  }
  if (auto it = j.find("mesh"); it != j.end()) {
    check_keys(*it, "mesh", {"shrink", "diagonals", "seed_face", "gate_slope"});
    read_double(*it, "shrink", c.mesh.shrink, "mesh");
    std::string s = to_string(c.mesh.diagonals);
    read(*it, "diagonals", s, "mesh");
    c.mesh.diagonals = diagonals_from_string(s);
    read(*it, "seed_face", c.mesh.seed_face, "mesh");
    s = slope_name(c.mesh.gate_slope);
    read(*it, "gate_slope", s, "mesh");
    c.mesh.gate_slope = slope_from(s);
  }
  if (auto it = j.find("sonar"); it != j.end()) {
    check_keys(*it, "sonar", {"n_beams", "resolution", "theta_max_deg", "max_range", "spacing"});
    read(*it, "n_beams", c.sonar.n_beams, "sonar");
    read_double(*it, "resolution", c.sonar.resolution, "sonar");
    read_double(*it, "theta_max_deg", c.sonar.theta_max_deg, "sonar");
    read_double(*it, "max_range", c.sonar.max_range, "sonar");
    std::string s = spacing_name(c.sonar.spacing);
    read(*it, "spacing", s, "sonar");
    c.sonar.spacing = spacing_from(s);
  }
  read(j, "planners", c.planners, "");
  if (auto it = j.find("bf"); it != j.end()) {
    check_keys(*it, "bf", {"axis", "boundary_connectors"});
    std::string s = axis_name(c.bf.axis);
    read(*it, "axis", s, "bf");
    c.bf.axis = axis_from(s);
    read(*it, "boundary_connectors", c.bf.boundary_connectors, "bf");
  }
  if (auto it = j.find("survey"); it != j.end()) {
    check_keys(*it, "survey",
               {"eval_resolution", "ping_spacing", "noise_std", "seed", "sweep_turns", "sweep_connectors"});
    read_double(*it, "eval_resolution", c.survey.eval_resolution, "survey");
    read_double(*it, "ping_spacing", c.survey.ping_spacing, "survey");
    read_double(*it, "noise_std", c.survey.noise_std, "survey");
    read(*it, "seed", c.survey.seed, "survey");
    read(*it, "sweep_turns", c.survey.sweep_turns, "survey");
    read(*it, "sweep_connectors", c.survey.sweep_connectors, "survey");
  }
  return c;
}

std::string config_to_json(const RunConfig& config) { return to_json(config, true).dump(2) + "\n"; }

std::string config_hash(const RunConfig& config) { return fnv1a_hex(to_json(config, false).dump()); }

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

void validate(const RunConfig& c) {
  static const std::set<std::string> sources{"shaft", "saddle", "channel", "file"};
  if (!sources.count(c.terrain.source)) {
    throw ConfigError("terrain.source: expected shaft, saddle, channel or file, got '" + c.terrain.source + "'");
  }
  if (c.terrain.source == "file") {
    if (c.terrain.file.empty()) throw ConfigError("terrain.file.path is required when source is 'file'");
    if (c.terrain.format != "esri" && c.terrain.format != "xyz") {
      throw ConfigError("terrain.file.format: expected esri or xyz, got '" + c.terrain.format + "'");
    }
  }
  if (!(c.terrain.cell_size > 0.0)) throw ConfigError("terrain.cell_size must be > 0");
  if (!(c.mesh.shrink > 0.0 && c.mesh.shrink < 0.5)) throw ConfigError("mesh.shrink must lie in (0, 0.5)");
  if (c.planners.empty()) throw ConfigError("planners must not be empty");
  std::set<std::string> seen;
  for (const auto& p : c.planners) {
    const auto& names = planner_names();
    if (std::find(names.begin(), names.end(), p) == names.end()) {
      throw ConfigError("unknown planner '" + p + "'; available planners: bf, mdbf, nuc, mdnuc");
    }
    if (!seen.insert(p).second) throw ConfigError("planner '" + p + "' listed twice");
  }
  if (c.survey.eval_resolution < 0.0) throw ConfigError("survey.eval_resolution must be >= 0");
  if (c.survey.ping_spacing < 0.0) throw ConfigError("survey.ping_spacing must be >= 0");
  if (c.survey.noise_std < 0.0) throw ConfigError("survey.noise_std must be >= 0");
  if (c.output_dir.empty()) throw ConfigError("output_dir must not be empty");
  try {
    c.sonar.validate();
    if (!c.depth_ranges.empty()) validate_ranges(c.depth_ranges);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

std::vector<DepthRange> parse_breakpoints(const std::string& text) {
  std::vector<double> points;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      points.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("depth breakpoints: '" + item + "' is not a number");
    }
  }
  if (points.size() < 2) throw ConfigError("depth breakpoints: need at least two values");
  std::vector<DepthRange> ranges;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) ranges.push_back({points[i], points[i + 1]});
  return ranges;
}

}  // namespace mdnuc::app
