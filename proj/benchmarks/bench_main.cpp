#include <benchmark/benchmark.h>

#include "rmtk/discrete.hpp"
#include "rmtk/policies.hpp"
#include "rmtk/relaxed.hpp"
#include "rmtk/scenario.hpp"
#include "rmtk/simulate.hpp"

namespace {

rmtk::Scenario reference_scenario() {
  // Demand-rich but feasible at the ladder maxima, so the searches do real work.
  const auto spec =
      rmtk::GeneratorSpec::tiered(3, 30, 180, 150, 1200, 5, 8, 2.2, 4.2, 1.5, 2.5);
  return rmtk::generate_synthetic(spec, 1);
}

std::vector<rmtk::DemandCurve> all_curves(const rmtk::Scenario& s) {
  std::vector<rmtk::DemandCurve> cells;
  for (const rmtk::Product& p : s.products) {
    for (const rmtk::DemandCell& c : p.cells) {
      cells.push_back(rmtk::curve_for_cell(p, c));
    }
  }
  return cells;
}

void BM_SolveDual(benchmark::State& state) {
  const auto spec = rmtk::GeneratorSpec::tiered(3, static_cast<int>(state.range(0)), 180,
                                                150, 900, 5, 8, 2.0, 6.0, 1.5, 2.5);
  const rmtk::Scenario s = rmtk::generate_synthetic(spec, 1);
  const auto cells = all_curves(s);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rmtk::solve_dual(cells, 180.0));
  }
  state.SetItemsProcessed(state.iterations() * cells.size());
}
BENCHMARK(BM_SolveDual)->Arg(5)->Arg(30)->Arg(120);

void BM_GreedyOptimize(benchmark::State& state) {
  const rmtk::Scenario s = reference_scenario();
  const rmtk::SearchContext ctx = rmtk::build_search_context(s);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rmtk::greedy_optimize(ctx, 180.0, s.horizon - 1));
  }
}
BENCHMARK(BM_GreedyOptimize);

void BM_RollingReplication(benchmark::State& state) {
  const rmtk::Scenario s = reference_scenario();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rmtk::simulate_greedy_rolling(s, s, 180, seed++));
  }
}
BENCHMARK(BM_RollingReplication);

void BM_MrtPolicyBuild(benchmark::State& state) {
  const rmtk::Scenario s = reference_scenario();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rmtk::mrt_emsrb_policy(s, 180.0, s.horizon - 1));
  }
}
BENCHMARK(BM_MrtPolicyBuild);

void BM_PolicyReplication(benchmark::State& state) {
  const rmtk::Scenario s = reference_scenario();
  const rmtk::AvailabilityPolicy policy = rmtk::mrt_emsrb_policy(s, 180.0, s.horizon - 1);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rmtk::simulate_policy(s, policy, 180, seed++));
  }
}
BENCHMARK(BM_PolicyReplication);

void BM_SampleArrivals(benchmark::State& state) {
  const rmtk::Scenario s = reference_scenario();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rmtk::sample_arrivals(s, 0, seed++));
  }
}
BENCHMARK(BM_SampleArrivals);

}  // namespace

BENCHMARK_MAIN();
