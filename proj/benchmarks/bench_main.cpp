// Microbenchmarks for the three hot paths. Each iteration varies the seed so
// the counter-based field cannot amortize anything across runs.

#include <benchmark/benchmark.h>

#include "richardson/engine.hpp"
#include "richardson/field.hpp"
#include "richardson/graph.hpp"
#include "richardson/lattice.hpp"
#include "richardson/oracle.hpp"

namespace {

using namespace richardson;

Site axis_site(int n) {
  Site s{};
  s.c[0] = n;
  return s;
}

// One-type fill of a (2R+1)^2 box from the origin.
void bm_one_type_fill(benchmark::State& state) {
  const int radius = static_cast<int>(state.range(0));
  Box box = Box::cube(Site{}, radius, 2);
  SiteSet origin({Site{}});
  std::uint64_t seed = 1;
  for (auto _ : state) {
    GrowthState st = run_one_type(FieldSpec{derive_seed(9000, seed++), 2, ChannelMode::kShared},
                                  1.0, origin, box, StopRule::kFillBox);
    benchmark::DoNotOptimize(st.infection_time.data());
  }
  state.SetItemsProcessed(state.iterations() * box.size());
}

// Two-type competition run to the first decided boundary classification.
void bm_two_type_boundary(benchmark::State& state) {
  const int radius = static_cast<int>(state.range(0));
  TwoTypeConfig config;
  config.lambda = 0.5;
  config.initial = InitialConfiguration::finite_pair(SiteSet({Site{}}), SiteSet({axis_site(1)}));
  config.discipline = Discipline::kIndependent;
  config.box = Box::cube(Site{}, radius, 2);
  config.stop_rule = StopRule::kFirstBoundaryContact;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    Outcome out = run_two_type(FieldSpec{derive_seed(9100, seed++), 2, ChannelMode::kIndependent},
                               config);
    benchmark::DoNotOptimize(&out.classification);
  }
}

// Exact capture probabilities on the 3x3 grid (the largest stock graph).
void bm_exact_capture(benchmark::State& state) {
  ExactModel model;
  model.graph = make_grid_graph(3, 3);
  model.lambda = 0.5;
  model.initial.assign(9, 0);
  model.initial[0] = 1;
  model.initial[8] = 2;
  for (auto _ : state) {
    ExactResult res = exact_capture(model);
    benchmark::DoNotOptimize(res.capture2.data());
  }
}

}  // namespace

BENCHMARK(bm_one_type_fill)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_two_type_boundary)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_exact_capture)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
