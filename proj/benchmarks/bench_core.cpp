#include <benchmark/benchmark.h>

#include <random>

#include "cellgrow/cellular.hpp"
#include "cellgrow/fitness.hpp"
#include "cellgrow/growth.hpp"
#include "cellgrow/neuralnet.hpp"

using namespace cellgrow;

namespace {

Genome genome(std::uint64_t seed) {
  Rng rng(seed);
  return random_genome({}, rng);
}

const Mesh &grown_mesh() {
  static const Mesh mesh = [] {
    GrowthConfig cfg;
    cfg.n_steps = 120;
    return grow(genome(249), cfg).mesh;
  }();
  return mesh;
}

} // namespace

static void BM_Evaluate(benchmark::State &state) {
  const Network net(genome(1));
  std::vector<double> in(45, 0.5), out(15);
  Network::Scratch scratch;
  for (auto _ : state) {
    net.evaluate_into(in, out, scratch);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Evaluate);

static void BM_EvaluateBatch(benchmark::State &state) {
  const Network net(genome(1));
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> in(45 * n, 0.5), out(15 * n);
  Network::Scratch scratch;
  for (auto _ : state) {
    net.evaluate_batch(in, n, out, scratch);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvaluateBatch)->Arg(64)->Arg(4096);

static void BM_StepOutputs(benchmark::State &state) {
  const Mesh &m = grown_mesh();
  const Network net(genome(249));
  const CellState s = CellState::capture(m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_outputs(s, m, net));
  }
  state.counters["vertices"] = static_cast<double>(m.vertex_count());
}
BENCHMARK(BM_StepOutputs)->Unit(benchmark::kMillisecond);

static void BM_Step(benchmark::State &state) {
  const Network net(genome(249));
  for (auto _ : state) {
    state.PauseTiming();
    Mesh m = grown_mesh();
    state.ResumeTiming();
    benchmark::DoNotOptimize(step(m, net, GrowthConfig{}));
  }
}
BENCHMARK(BM_Step)->Unit(benchmark::kMillisecond);

static void BM_Rasterize(benchmark::State &state) {
  const Mesh &m = grown_mesh();
  const GridConfig grid{20.0, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(canopy_fitness(m, grid));
  }
}
BENCHMARK(BM_Rasterize)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_GrowDefault(benchmark::State &state) {
  const Genome g = genome(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(grow(g, GrowthConfig{}).mesh.vertex_count());
  }
}
BENCHMARK(BM_GrowDefault)->Arg(0)->Arg(3)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK_MAIN();
