#include <benchmark/benchmark.h>

#include <random>

#include "ncspace/calculus.hpp"
#include "ncspace/vonneumann.hpp"

using namespace ncspace;

namespace {

// `blocks` orbits of `size` points each on a line, random weights.
GroupoidPtr blocky(std::size_t blocks, std::size_t size) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> w(0.5, 2.0);
  SpaceSpec spec;
  spec.dimension = 2;
  std::vector<std::vector<PointId>> parts(blocks);
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t i = 0; i < size; ++i) {
      const auto id = static_cast<PointId>(b * size + i);
      spec.points.push_back({id, {double(b), double(i)}, w(rng)});
      parts[b].push_back(id);
    }
  spec.generators = {{"pi1", "x1"}};
  auto space = std::make_shared<const DiffSpace>(build_space(spec));
  return build_groupoid(space, Partition(parts));
}

AlgebraElement filled(const GroupoidPtr& g, bool jets) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  AlgebraElement a(g, jets);
  for (std::size_t b = 0; b < g->orbit_count(); ++b) {
    auto& blk = a.block(b);
    for (auto* part : {&blk.value, &blk.d_src, &blk.d_dst})
      for (auto& v : *part) v = {u(rng), u(rng)};
  }
  return a;
}

void BM_Convolve(benchmark::State& state) {
  auto g = blocky(4, static_cast<std::size_t>(state.range(0)));
  auto a = filled(g, state.range(1) != 0), b = filled(g, state.range(1) != 0);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(a, b));
}
BENCHMARK(BM_Convolve)->ArgsProduct({{4, 16, 64}, {0, 1}});

void BM_Represent(benchmark::State& state) {
  auto g = blocky(4, static_cast<std::size_t>(state.range(0)));
  auto a = filled(g, false);
  for (auto _ : state) benchmark::DoNotOptimize(represent(a));
}
BENCHMARK(BM_Represent)->Arg(4)->Arg(16)->Arg(64);

void BM_Leibniz(benchmark::State& state) {
  auto g = blocky(4, static_cast<std::size_t>(state.range(0)));
  auto a = filled(g, true), b = filled(g, true);
  auto P = Derivation::from_expressions(g->base(), std::vector<std::string>{"x2", "1 + x1*x1"});
  for (auto _ : state) benchmark::DoNotOptimize(leibniz_defect(P, a, b));
}
BENCHMARK(BM_Leibniz)->Arg(4)->Arg(16);

void BM_Commutant(benchmark::State& state) {
  auto g = blocky(2, static_cast<std::size_t>(state.range(0)));
  std::vector<Matrix> gens;
  for (const auto& e : spanning_set(g)) gens.push_back(to_direct_sum(represent(e)));
  const std::size_t d = direct_sum_dimension(*g);
  for (auto _ : state) benchmark::DoNotOptimize(commutant(gens, d));
}
BENCHMARK(BM_Commutant)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_HausdorffRelation(benchmark::State& state) {
  SpaceSpec spec;
  spec.dimension = 2;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (std::size_t i = 0; i < n; ++i)
    spec.points.push_back({static_cast<PointId>(i), {double(i % 17), double(i % 5)}, 1.0});
  spec.generators = {{"f", "x1*x1 - x2"}, {"g", "x2"}};
  DiffSpace space = build_space(spec);
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff_relation(space));
}
BENCHMARK(BM_HausdorffRelation)->Arg(100)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
