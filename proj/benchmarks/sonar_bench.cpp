#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include <mdnuc/coverage.hpp>
#include <mdnuc/sonar.hpp>

using namespace mdnuc;

namespace {

struct Rays {
  Heightfield hf = gen_shaft(ShaftParams{});
  std::vector<Vec3> origins;
  std::vector<Vec3> dirs;

  Rays() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pos(20.0, 160.0);
    std::uniform_real_distribution<double> ang(-1.2, 1.2);
    for (int k = 0; k < 1024; ++k) {
      const double a = ang(rng);
      origins.push_back({pos(rng), pos(rng), 0.0});
      dirs.push_back({std::sin(a), 0.0, std::cos(a)});
    }
  }
};

const Rays& rays() {
  static const Rays r;
  return r;
}

}  // namespace

static void BM_CastRayMarch(benchmark::State& state) {
  const Rays& r = rays();
  const SonarConfig cfg;
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cast_ray(r.hf, r.origins[k], r.dirs[k], cfg));
    k = (k + 1) % r.origins.size();
  }
}
BENCHMARK(BM_CastRayMarch);

static void BM_CastRayTiled(benchmark::State& state) {
  const Rays& r = rays();
  const SonarConfig cfg;
  const RayCaster caster(r.hf, cfg);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(caster.cast(r.origins[k], r.dirs[k]));
    k = (k + 1) % r.origins.size();
  }
}
BENCHMARK(BM_CastRayTiled);

static void BM_Ping(benchmark::State& state) {
  const Rays& r = rays();
  const SonarConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(ping(r.hf, {90.0, 60.0}, {1.0, 0.0}, 120.0, cfg));
}
BENCHMARK(BM_Ping);

static void BM_SimulateTrack(benchmark::State& state) {
  const Rays& r = rays();
  const RoiPolygon roi = RoiPolygon::rectangle({10, 10}, {170, 170});
  CoveragePath track;
  track.waypoints = {{{20, 90}, 82.44, 0}, {{160, 90}, 82.44, 0}};
  const std::vector<CoveragePath> paths{track};
  SimulationOptions opts;
  opts.eval_resolution = 0.25;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(r.hf, roi, paths, SonarConfig{}, opts).pings);
}
BENCHMARK(BM_SimulateTrack)->Unit(benchmark::kMillisecond);
