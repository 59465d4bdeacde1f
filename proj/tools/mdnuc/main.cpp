#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <mdnuc/coverage.hpp>
#include <mdnuc/error.hpp>

#include "app/config.hpp"
#include "app/scenario.hpp"

namespace fs = std::filesystem;
using namespace mdnuc;
using namespace mdnuc::app;

namespace {

enum Exit : int { kOk = 0, kConfig = 2, kGenerate = 3, kUnreachable = 4, kSimulation = 5 };

constexpr const char* kOutEnv = "MDNUC_OUT_DIR";

struct Overrides {
  std::string preset;
  std::vector<std::string> configs;
  std::string out;
  std::string scenario;
  double cell_size = 1.0;
  double resolution = 0.10;
  int n_beams = 256;
  double theta_max = 160.0;
  std::string beam_spacing = "equiangular";
  double shrink = 0.05;
  std::string diagonals = "checkerboard";
  std::string ranges;
  std::vector<std::string> planners{"bf", "mdbf", "nuc", "mdnuc"};
  double eval_resolution = 0.0;
  double ping_spacing = 0.0;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
  std::string terrain_file;
  std::string terrain_format = "esri";
  int jobs = 1;
  bool print_config = false;

  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> setters;
};

template <typename T>
CLI::Option* bind_option(CLI::App* cmd, Overrides& o, const std::string& name, T& field, const std::string& help,
                         std::function<void(RunConfig&)> apply) {
  CLI::Option* opt = cmd->add_option(name, field, help)->capture_default_str();
  o.setters.emplace_back(opt, std::move(apply));
  return opt;
}

void add_run_options(CLI::App* cmd, Overrides& o, bool survey_options) {
  auto* preset = cmd->add_option("--preset", o.preset, "Base scenario: shaft, saddle or channel")
                     ->default_str("none");
  auto* config = cmd->add_option("--config", o.configs, "Run config JSON file(s); one run per file")
                     ->default_str("none");
  preset->excludes(config);
  cmd->add_option("--out", o.out, "Output directory (overrides $MDNUC_OUT_DIR and output_dir)")
      ->default_str("$MDNUC_OUT_DIR, else output_dir (out)");
  bind_option(cmd, o, "--scenario", o.scenario, "Scenario name written to reports",
       [&o](RunConfig& c) { c.scenario = o.scenario; })
      ->default_str("preset name, else custom");
  bind_option(cmd, o, "--cell-size", o.cell_size, "Terrain grid cell size (m)",
       [&o](RunConfig& c) { c.terrain.cell_size = o.cell_size; });
  bind_option(cmd, o, "--terrain-file", o.terrain_file, "Load terrain from a grid file instead of a generator",
       [&o](RunConfig& c) {
         c.terrain.source = "file";
         c.terrain.file = o.terrain_file;
       })
      ->default_str("none");
  bind_option(cmd, o, "--terrain-format", o.terrain_format, "Grid file format: esri or xyz",
       [&o](RunConfig& c) { c.terrain.format = o.terrain_format; });
  bind_option(cmd, o, "--resolution", o.resolution, "Sonar sounding resolution (m); footprint = beams x resolution",
       [&o](RunConfig& c) { c.sonar.resolution = o.resolution; });
  bind_option(cmd, o, "--n-beams", o.n_beams, "Number of sonar beams", [&o](RunConfig& c) { c.sonar.n_beams = o.n_beams; });
  bind_option(cmd, o, "--theta-max", o.theta_max, "Maximum opening angle (deg)",
       [&o](RunConfig& c) { c.sonar.theta_max_deg = o.theta_max; });
  bind_option(cmd, o, "--beam-spacing", o.beam_spacing, "Beam fan layout: equiangular or equidistant",
       [&o](RunConfig& c) {
         if (o.beam_spacing == "equiangular") {
           c.sonar.spacing = BeamSpacing::Equiangular;
         } else if (o.beam_spacing == "equidistant") {
           c.sonar.spacing = BeamSpacing::Equidistant;
         } else {
           throw ConfigError("--beam-spacing: expected equiangular or equidistant");
         }
       });
  bind_option(cmd, o, "--shrink", o.shrink, "Lattice shrink fraction; hypotenuse = 2 w (1 - shrink)",
       [&o](RunConfig& c) { c.mesh.shrink = o.shrink; });
  bind_option(cmd, o, "--diagonals", o.diagonals, "Square split pattern: checkerboard, alternating_rows or uniform",
       [&o](RunConfig& c) { c.mesh.diagonals = diagonals_from_string(o.diagonals); });
  bind_option(cmd, o, "--ranges", o.ranges, "Depth breakpoints 'a,b,c' giving ranges [a,b) [b,c]; empty = 2 equal",
       [&o](RunConfig& c) { c.depth_ranges = parse_breakpoints(o.ranges); })
      ->default_str("from config");
  auto* planners = cmd->add_option("--planners", o.planners, "Planners to run: bf, mdbf, nuc, mdnuc")
                       ->delimiter(',')
                       ->capture_default_str();
  o.setters.emplace_back(planners, [&o](RunConfig& c) { c.planners = o.planners; });
  if (survey_options) {
    bind_option(cmd, o, "--eval-resolution", o.eval_resolution, "Coverage grid resolution (m); 0 = sonar resolution",
         [&o](RunConfig& c) { c.survey.eval_resolution = o.eval_resolution; });
    bind_option(cmd, o, "--ping-spacing", o.ping_spacing, "Along-track ping spacing (m); 0 = eval resolution",
         [&o](RunConfig& c) { c.survey.ping_spacing = o.ping_spacing; });
    bind_option(cmd, o, "--noise-std", o.noise_std, "Cross-track noise standard deviation (m)",
         [&o](RunConfig& c) { c.survey.noise_std = o.noise_std; });
    bind_option(cmd, o, "--seed", o.seed, "Noise seed", [&o](RunConfig& c) { c.survey.seed = o.seed; });
  }
  cmd->add_option("--jobs", o.jobs, "Parallel runs")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_flag("--print-config", o.print_config, "Print the resolved canonical config and exit")
      ->default_str("off");
}

struct Run {
  RunConfig config;
  std::string label;
};

std::vector<Run> resolve_runs(const Overrides& o) {
  std::vector<Run> runs;
  if (o.configs.empty()) {
    runs.push_back({o.preset.empty() ? RunConfig{} : preset(o.preset), o.preset.empty() ? "default" : o.preset});
  } else {
    for (const auto& path : o.configs) runs.push_back({load_config(path), fs::path(path).stem().string()});
  }
  const char* env = std::getenv(kOutEnv);
  for (auto& run : runs) {
    for (const auto& [opt, apply] : o.setters) {
      if (opt->count() > 0) apply(run.config);
    }
    std::string out = !o.out.empty() ? o.out : (env && *env ? env : "");
    if (!out.empty()) {
      run.config.output_dir = runs.size() > 1 ? (fs::path(out) / run.label).string() : out;
    }
    validate(run.config);
  }
  return runs;
}

// Runs tasks on up to `jobs` threads; results keep task order.
std::vector<int> run_tasks(std::size_t count, int jobs, const std::function<int(std::size_t)>& task) {
  std::vector<int> codes(count, kOk);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) codes[i] = task(i);
  };
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count);
  if (n <= 1) {
    worker();
    return codes;
  }
  std::vector<std::thread> threads;
  for (std::size_t k = 0; k < n; ++k) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return codes;
}

int first_failure(const std::vector<int>& codes) {
  for (int c : codes) {
    if (c != kOk) return c;
  }
  return kOk;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

template <typename Fn>
std::string capture(Fn&& fn) {
  std::ostringstream ss;
  fn(ss);
  return ss.str();
}

// Maps library errors of a planning step to exit codes.
int guarded(std::ostream& err, const std::function<int()>& body, int generic) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const UnreachableRegionError& e) {
    err << "unreachable region " << e.region() << " (face " << e.face() << "): " << e.what() << '\n';
    return kUnreachable;
  } catch (const SimulationError& e) {
    err << "simulation error: " << e.what() << '\n';
    return kSimulation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return generic;
  }
}

int cmd_gen(const Overrides& o, const std::string& format) {
  const auto runs = resolve_runs(o);
  if (o.print_config) {
    for (const auto& r : runs) std::cout << config_to_json(r.config);
    return kOk;
  }
  std::vector<std::string> lines(runs.size());
  std::vector<std::ostringstream> errs(runs.size());
  auto codes = run_tasks(runs.size(), o.jobs, [&](std::size_t i) {
    return guarded(errs[i], [&] {
      const RunConfig& c = runs[i].config;
      Heightfield hf = make_terrain(c);
      fs::create_directories(c.output_dir);
      const bool xyz = format == "xyz";
      const fs::path path = fs::path(c.output_dir) / (xyz ? "terrain.xyz" : "terrain.asc");
      write_file(path, capture([&](std::ostream& s) { save_grid(s, hf, xyz ? GridFormat::XyzAscii : GridFormat::EsriAscii); }));
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s: %zux%zu nodes, cell %g m, depth %.3f..%.3f m -> %s", c.scenario.c_str(),
                    hf.nx(), hf.ny(), hf.cell_size(), hf.min_depth(), hf.max_depth(), path.string().c_str());
      lines[i] = buf;
      return int{kOk};
    }, kGenerate);
  });
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!lines[i].empty()) std::cout << lines[i] << '\n';
    std::cerr << errs[i].str();
  }
  return first_failure(codes);
}

int cmd_plan(const Overrides& o) {
  const auto runs = resolve_runs(o);
  if (o.print_config) {
    for (const auto& r : runs) std::cout << config_to_json(r.config);
    return kOk;
  }
  std::vector<std::ostringstream> outs(runs.size());
  std::vector<std::ostringstream> errs(runs.size());
  auto codes = run_tasks(runs.size(), o.jobs, [&](std::size_t i) {
    return guarded(errs[i], [&] {
      const RunConfig& c = runs[i].config;
      Workspace ws = prepare(c);
      const fs::path dir = c.output_dir;
      fs::create_directories(dir);
      write_file(dir / "config.json", config_to_json(c));
      write_file(dir / "mesh.off", capture([&](std::ostream& s) { write_off(s, ws.mesh()); }));
      write_file(dir / "partition.json", partition_to_json(ws.partition));
      for (const auto& name : c.planners) {
        const auto paths = plan(ws, name);
        write_file(dir / ("path_" + name + ".csv"), capture([&](std::ostream& s) { write_paths_csv(s, paths); }));
        write_file(dir / ("path_" + name + ".geojson"),
                   capture([&](std::ostream& s) { write_paths_geojson(s, paths); }));
        write_file(dir / ("plan_" + name + ".json"), plan_summary_json(ws, name, paths));
        double length = 0.0;
        std::size_t switches = 0;
        for (const auto& p : paths) {
          length += p.length();
          switches += p.angle_switches.size();
        }
        const bool multi = name == "mdnuc" || name == "mdbf";
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s %-5s faces %zu regions %zu gates %zu length %.1f m switches %zu", c.scenario.c_str(),
                      name.c_str(), ws.mesh().face_count(), multi ? ws.partition.regions.size() : std::size_t{1},
                      multi ? ws.partition.gates.size() : std::size_t{0}, length, switches);
        outs[i] << buf << '\n';
      }
      return int{kOk};
    }, kGenerate);
  });
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::cout << outs[i].str();
    std::cerr << errs[i].str();
  }
  return first_failure(codes);
}

int cmd_survey(const Overrides& o, const std::string& path_file, bool inline_plan) {
  const auto runs = resolve_runs(o);
  if (o.print_config) {
    for (const auto& r : runs) std::cout << config_to_json(r.config);
    return kOk;
  }
  struct Task {
    std::size_t run;
    std::string planner;
  };
  std::vector<Task> tasks;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    for (const auto& p : runs[r].config.planners) tasks.push_back({r, p});
  }
  if (!path_file.empty() && tasks.size() != 1) {
    std::cerr << "config error: --path needs exactly one run and one planner\n";
    return kConfig;
  }
  std::vector<std::ostringstream> outs(tasks.size());
  std::vector<std::ostringstream> errs(tasks.size());
  auto codes = run_tasks(tasks.size(), o.jobs, [&](std::size_t i) {
    const Task& t = tasks[i];
    const RunConfig& c = runs[t.run].config;
    const fs::path dir = c.output_dir;
    std::vector<CoveragePath> paths;
    if (!inline_plan) {
      const fs::path file = path_file.empty() ? dir / ("path_" + t.planner + ".csv") : fs::path(path_file);
      std::ifstream in(file);
      if (!in) {
        errs[i] << "simulation error: missing path file " << file.string() << '\n';
        return int{kSimulation};
      }
      const int code = guarded(errs[i], [&] {
        paths = read_paths_csv(in, t.planner);
        return int{kOk};
      }, kSimulation);
      if (code != kOk) return code;
    }
    return guarded(errs[i], [&] {
      Heightfield hf = make_terrain(c);
      RoiPolygon roi = make_roi(c, hf);
      if (inline_plan) paths = plan(prepare(c), t.planner);
      for (auto& p : paths) p.planner = t.planner;
      SurveyOutcome s = survey(hf, roi, c, t.planner, paths);
      fs::create_directories(dir);
      write_file(dir / ("coverage_" + t.planner + ".pgm"),
                 capture([&](std::ostream& os) { write_pgm(os, s.simulation.grid); }));
      write_file(dir / ("report_" + t.planner + ".json"), report_to_json(s.report));
      write_file(dir / ("report_" + t.planner + ".txt"), capture([&](std::ostream& os) { write_report_text(os, s.report); }));
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s %-5s %.0f cm coverage %.2f %% length %.1f m switches %zu time %.1f s",
                    c.scenario.c_str(), t.planner.c_str(), s.report.resolution * 100.0, s.report.coverage_pct,
                    s.report.path_length, s.report.angle_switch_count, s.report.wall_time);
      outs[i] << buf << '\n';
      return int{kOk};
    }, kSimulation);
  });
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    std::cout << outs[i].str();
    std::cerr << errs[i].str();
  }
  return first_failure(codes);
}

int cmd_compare(const std::vector<std::string>& inputs, const std::string& out_flag) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      for (const auto& e : fs::recursive_directory_iterator(p)) {
        const auto name = e.path().filename().string();
        if (e.is_regular_file() && name.rfind("report_", 0) == 0 && e.path().extension() == ".json") {
          files.push_back(e.path());
        }
      }
    } else if (fs::is_regular_file(p)) {
      files.push_back(p);
    } else {
      std::cerr << "config error: no such report file or directory: " << in << '\n';
      return kConfig;
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "config error: no reports to compare\n";
    return kConfig;
  }
  std::vector<Report> reports;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      reports.push_back(report_from_json(ss.str()));
    } catch (const std::exception& e) {
      std::cerr << "config error: " << f.string() << ": " << e.what() << '\n';
      return kConfig;
    }
  }
  const ComparisonTable table = compare(reports);
  for (const auto& w : table.warnings) std::cerr << "warning: " << w << '\n';
  const char* env = std::getenv(kOutEnv);
  const fs::path dir = !out_flag.empty() ? fs::path(out_flag) : fs::path(env && *env ? env : "out");
  fs::create_directories(dir);
  write_file(dir / "comparison.csv", capture([&](std::ostream& s) { write_comparison_csv(s, table); }));
  const std::string text = capture([&](std::ostream& s) { write_comparison_text(s, table); });
  write_file(dir / "comparison.txt", text);
  std::cout << text;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depth-aware coverage path planning for multibeam surveys"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mdnuc 0.1.0");

  Overrides gen_o, plan_o, survey_o;
  std::string gen_format = "esri";
  auto* gen = app.add_subcommand("gen", "Generate a terrain grid file");
  add_run_options(gen, gen_o, false);
  gen->add_option("--format", gen_format, "Output grid format: esri or xyz")
      ->capture_default_str()
      ->check(CLI::IsMember({"esri", "xyz"}));

  auto* plan_cmd = app.add_subcommand("plan", "Mesh, partition and plan coverage paths");
  add_run_options(plan_cmd, plan_o, false);

  std::string path_file;
  bool inline_plan = false;
  auto* survey_cmd = app.add_subcommand("survey", "Simulate planned paths and evaluate coverage");
  add_run_options(survey_cmd, survey_o, true);
  survey_cmd->add_option("--path", path_file, "Path CSV to survey")->default_str("<out>/path_<planner>.csv");
  survey_cmd->add_flag("--inline", inline_plan, "Plan in memory instead of reading path files")->default_str("off");

  std::vector<std::string> compare_inputs;
  std::string compare_out;
  auto* compare_cmd = app.add_subcommand("compare", "Tabulate coverage reports by scenario and resolution");
  compare_cmd->add_option("inputs", compare_inputs, "Report JSON files or directories to scan")->default_str("none");
  compare_cmd->add_option("--out", compare_out, "Output directory (overrides $MDNUC_OUT_DIR)")
      ->default_str("$MDNUC_OUT_DIR, else out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*gen) return cmd_gen(gen_o, gen_format);
    if (*plan_cmd) return cmd_plan(plan_o);
    if (*survey_cmd) return cmd_survey(survey_o, path_file, inline_plan);
    if (*compare_cmd) return cmd_compare(compare_inputs, compare_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}
