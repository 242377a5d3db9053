#include <benchmark/benchmark.h>

#include <memory>

#include "finsec/finite_sections.hpp"
#include "finsec/group.hpp"
#include "finsec/stability.hpp"

using namespace finsec;

namespace {

Group group_for(int kind) {
  switch (kind) {
    case 0:
      return Group::integer_lattice(2);
    case 1:
      return Group::free_group(2);
    default:
      return Group::heisenberg();
  }
}

void BM_BallEnumeration(benchmark::State& state) {
  const auto g = group_for(static_cast<int>(state.range(0)));
  const int n = static_cast<int>(state.range(1));
  std::size_t size = 0;
  for (auto _ : state) {
    auto b = ball(g, n);
    size = b.size();
    benchmark::DoNotOptimize(b);
  }
  state.counters["elements"] = static_cast<double>(size);
}
BENCHMARK(BM_BallEnumeration)
    ->ArgsProduct({{0}, {10, 40}})
    ->ArgsProduct({{1}, {6, 9}})
    ->ArgsProduct({{2}, {8, 14}})
    ->Unit(benchmark::kMillisecond);

void BM_Truncate(benchmark::State& state) {
  auto g = std::make_shared<const Group>(Group::integer_lattice(2));
  BandOperator a = BandOperator::identity(g);
  for (const auto& w : g->generators()) {
    if (w != g->identity()) a.add_term(w, Diagonal::constant(-0.2));
  }
  const auto y = ball(*g, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(truncate(a, y));
  state.counters["dim"] = static_cast<double>(y.size());
}
BENCHMARK(BM_Truncate)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_SigmaMin(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Matrix m = Matrix::Identity(n, n);
  for (Eigen::Index i = 1; i < n; ++i) m(i, i - 1) = -0.5;
  for (auto _ : state) benchmark::DoNotOptimize(sigma_min(m));
}
BENCHMARK(BM_SigmaMin)->Arg(100)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
