#include <benchmark/benchmark.h>

#include <vector>

#include "ckme/ckme.hpp"
#include "ckme/embedding.hpp"
#include "ckme/gaussian_sum.hpp"
#include "ckme/metric_space.hpp"
#include "ckme/oracle.hpp"

namespace {

using namespace ckme;

ConditionalModel demo_model() {
  return {MetricSpace::euclidean(1), InputDistribution::uniform_box(0, 1), {MeanKind::sine},
          {NoiseKind::gaussian, 0.3}};
}

std::vector<Observation> observations(const ConditionalModel& model, std::size_t n) {
  auto rng = make_stream(1, StreamRole::training);
  std::vector<Observation> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(model.sample(rng));
  return out;
}

QueryGrid grid_of(const ConditionalModel& model, std::size_t n) {
  auto rng = make_stream(1, StreamRole::grid);
  QueryGrid g;
  for (std::size_t i = 0; i < n; ++i) g.points.push_back(sample_input(model.space, model.input_dist, rng));
  return g;
}

// Streams 4096 observations into a grid of state.range(0) queries.
void BM_StreamUpdates(benchmark::State& state) {
  const auto model = demo_model();
  const auto obs = observations(model, 4096);
  const auto grid = grid_of(model, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto st = CkmeState::init(grid, obs[0], model.space, MotherSmoother::box(1.0), RateSchedule(0.5, 1));
    for (std::size_t i = 1; i < obs.size(); ++i) st.update(obs[i]);
    benchmark::DoNotOptimize(st.atom_count());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(obs.size()) * state.range(0));
}
BENCHMARK(BM_StreamUpdates)->Arg(16)->Arg(256);

void BM_BatchWeights(benchmark::State& state) {
  const auto model = demo_model();
  const auto obs = observations(model, static_cast<std::size_t>(state.range(0)));
  const InputPoint x{{0.5}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(batch_weights(obs, x, RateSchedule(0.5, 1), MotherSmoother::gaussian(1.0), model.space));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BatchWeights)->Arg(1000)->Arg(100000);

void BM_SquaredNorm(benchmark::State& state) {
  auto rng = make_stream(2, StreamRole::diagnostics);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> atoms(n), weights(n, 1.0 / static_cast<double>(n));
  for (auto& a : atoms) a = standard_normal(rng);
  const Embedding e(atoms, weights);
  const auto k = OutputKernel::gaussian(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(squared_norm(e, k));
}
BENCHMARK(BM_SquaredNorm)->Arg(256)->Arg(4096);

void BM_ProfileSquaredNorm(benchmark::State& state) {
  auto rng = make_stream(2, StreamRole::diagnostics);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> atoms(n), weights(n, 1.0 / static_cast<double>(n));
  for (auto& a : atoms) a = standard_normal(rng);
  const Embedding e(atoms, weights);
  for (auto _ : state) benchmark::DoNotOptimize(GaussianSumProfile(e, 1.0).squared_norm());
}
BENCHMARK(BM_ProfileSquaredNorm)->Arg(4096)->Arg(100000);

void BM_FunctionalDistance(benchmark::State& state) {
  const auto space = MetricSpace::functional(static_cast<int>(state.range(0)), 1.0, 1.0);
  auto rng = make_stream(3, StreamRole::diagnostics);
  const auto a = sample_input(space, InputDistribution::uniform_params(), rng);
  const auto b = sample_input(space, InputDistribution::uniform_params(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(space.distance(a, b));
}
BENCHMARK(BM_FunctionalDistance)->Arg(1)->Arg(2)->Arg(8);

} // namespace

BENCHMARK_MAIN();
