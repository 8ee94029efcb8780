// Tests for the shared-field lambda coupling: the grid run must reproduce
// the standalone engine bit for bit at every level, and the scan's exact
// nesting property must hold on every replica.

#include <cstdint>
#include <vector>

#include "doctest.h"
#include "richardson/coupling.hpp"
#include "richardson/engine.hpp"
#include "richardson/errors.hpp"
#include "richardson/field.hpp"
#include "richardson/lattice.hpp"

using namespace richardson;

namespace {

TwoTypeConfig small_config(int radius) {
  TwoTypeConfig config;
  config.initial =
      InitialConfiguration::finite_pair(SiteSet({origin_site()}), SiteSet({site2(1, 0)}));
  config.discipline = Discipline::kIndependent;
  config.box = Box::cube(origin_site(), radius, 2);
  config.stop_rule = StopRule::kFillBox;
  return config;
}

}  // namespace

TEST_CASE("LambdaGrid validation") {
  auto check_throws = [](std::vector<double> values) {
    LambdaGrid grid{std::move(values)};
    CHECK_THROWS_AS(grid.validate(), InvalidInputError);
  };
  LambdaGrid three{{0.25, 0.5, 1.0}};
  CHECK_NOTHROW(three.validate());
  LambdaGrid one{{1.0}};
  CHECK_NOTHROW(one.validate());
  check_throws({});
  check_throws({0.5, 0.5});
  check_throws({0.5, 0.25});
  check_throws({0.5, 1.5});
  check_throws({0.0, 0.5});
  check_throws({-0.5, 0.5});
}

TEST_CASE("coupled_grid_run reproduces the standalone marginals bit for bit") {
  LambdaGrid grid{{0.25, 0.5, 1.0}};
  FieldSpec spec{8101, 2, ChannelMode::kIndependent};
  TwoTypeConfig config = small_config(5);

  CoupledOutcome co = coupled_grid_run(grid, spec, config);
  REQUIRE(co.outcomes.size() == 3);
  REQUIRE(co.lambdas == grid.values);

  for (std::size_t j = 0; j < grid.values.size(); ++j) {
    TwoTypeConfig solo = config;
    solo.lambda = grid.values[j];
    Outcome ref = run_two_type(HashField(spec), solo);

    const Outcome& got = co.outcomes[j];
    CHECK(got.classification == ref.classification);
    CHECK(got.count1 == ref.count1);
    CHECK(got.count2 == ref.count2);
    CHECK(got.boundary_count1 == ref.boundary_count1);
    CHECK(got.boundary_count2 == ref.boundary_count2);
    CHECK(got.hit_time1 == ref.hit_time1);
    CHECK(got.hit_time2 == ref.hit_time2);
    // Full state equality, not just summaries.
    CHECK(got.state.occupancy == ref.state.occupancy);
    CHECK(got.state.infection_time == ref.state.infection_time);
  }
}

TEST_CASE("coupled_grid_run set collection matches the outcome counts") {
  LambdaGrid grid{{0.5, 1.0}};
  FieldSpec spec{8102, 2, ChannelMode::kIndependent};
  TwoTypeConfig config = small_config(4);

  CoupledOutcome with_sets = coupled_grid_run(grid, spec, config, /*collect_sets=*/true);
  REQUIRE(with_sets.ever1.size() == 2);
  REQUIRE(with_sets.ever2.size() == 2);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(static_cast<std::int64_t>(with_sets.ever1[j].size()) == with_sets.outcomes[j].count1);
    CHECK(static_cast<std::int64_t>(with_sets.ever2[j].size()) == with_sets.outcomes[j].count2);
    CHECK(with_sets.ever1[j].disjoint_from(with_sets.ever2[j]));
    // A filled box partitions into the two types.
    CHECK(with_sets.outcomes[j].count1 + with_sets.outcomes[j].count2 == config.box.size());
  }

  CoupledOutcome without = coupled_grid_run(grid, spec, config, /*collect_sets=*/false);
  CHECK(without.ever1.empty());
  CHECK(without.ever2.empty());
  REQUIRE(without.outcomes.size() == 2);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(without.outcomes[j].count2 == with_sets.outcomes[j].count2);
  }
}

TEST_CASE("coupled_grid_run rejects a shared discipline") {
  LambdaGrid grid{{0.5, 1.0}};
  FieldSpec spec{8103, 2, ChannelMode::kIndependent};
  TwoTypeConfig config = small_config(3);
  config.discipline = Discipline::kShared;
  CHECK_THROWS_WITH_AS(coupled_grid_run(grid, spec, config),
                       "coupled grid runs need the independent discipline", InvalidInputError);
}

TEST_CASE("coexistence_window_scan rows, cells and nesting") {
  CoexistenceScanParams params;
  params.dim = 2;
  params.grid = LambdaGrid{{0.5, 1.0}};
  params.radii = {2, 4};
  params.replicas = 30;
  params.seed = 8202;

  CoexistenceScanResult res = coexistence_window_scan(params);
  CHECK(res.box.lo[0] == -4);
  CHECK(res.box.hi[0] == 4);

  const std::int64_t box_size = res.box.size();
  REQUIRE(res.rows.size() == 30 * 2 * 2);
  // Rows are replica-major, then lambda, then radius.
  for (int rep = 0; rep < 30; ++rep) {
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t i = 0; i < 2; ++i) {
        const auto& row = res.rows[(static_cast<std::size_t>(rep) * 2 + j) * 2 + i];
        REQUIRE(row.size() == 9);
        CHECK(row[0] == static_cast<double>(rep));
        CHECK(row[1] == params.grid.values[j]);
        CHECK(row[2] == static_cast<double>(params.radii[i]));
        // Filled box: the two counts partition the sites.
        CHECK(row[4] + row[5] == static_cast<double>(box_size));
        CHECK(row[6] >= 0.0);
        CHECK(row[7] >= 0.0);
        CHECK(row[8] == ((row[6] > 0.0 && row[7] > 0.0) ? 1.0 : 0.0));
      }
    }
  }

  // Cells are lambda-major and their proportions recount the rows.
  REQUIRE(res.cells.size() == 4);
  std::size_t cell_idx = 0;
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t i = 0; i < 2; ++i, ++cell_idx) {
      const auto& cell = res.cells[cell_idx];
      CHECK(cell.lambda == params.grid.values[j]);
      CHECK(cell.radius == params.radii[i]);
      std::int64_t hits = 0;
      for (int rep = 0; rep < 30; ++rep) {
        hits += res.rows[(static_cast<std::size_t>(rep) * 2 + j) * 2 + i][8] == 1.0;
      }
      CHECK(cell.both_on_shell.hits == hits);
      CHECK(cell.both_on_shell.n == 30);
    }
  }

  // Exact property of nested snapshots of one fill.
  CHECK(res.nesting_violations == 0);
  // One adjacent-lambda comparison per replica per radius.
  CHECK(res.mono_checks == 30 * 1 * 2);
  CHECK(res.mono1_violations >= 0);
  CHECK(res.mono2_violations >= 0);
  CHECK(res.mono1_violations <= res.mono_checks);
}

TEST_CASE("coexistence_window_scan repeats byte for byte") {
  CoexistenceScanParams params;
  params.grid = LambdaGrid{{1.0}};
  params.radii = {2, 3};
  params.replicas = 8;
  params.seed = 8203;

  CoexistenceScanResult a = coexistence_window_scan(params);
  CoexistenceScanResult b = coexistence_window_scan(params);
  CHECK(a.rows == b.rows);
  CHECK(a.nesting_violations == b.nesting_violations);
}

TEST_CASE("coexistence_window_scan validates its inputs") {
  CoexistenceScanParams good;
  good.grid = LambdaGrid{{1.0}};
  good.radii = {2};
  good.replicas = 1;
  good.seed = 1;
  CHECK_NOTHROW(coexistence_window_scan(good));

  CoexistenceScanParams bad = good;
  bad.replicas = 0;
  CHECK_THROWS_AS(coexistence_window_scan(bad), InvalidInputError);

  bad = good;
  bad.radii = {};
  CHECK_THROWS_AS(coexistence_window_scan(bad), InvalidInputError);

  bad = good;
  bad.radii = {2, 2};
  CHECK_THROWS_AS(coexistence_window_scan(bad), InvalidInputError);

  bad = good;
  bad.radii = {1, 2};
  CHECK_THROWS_AS(coexistence_window_scan(bad), InvalidInputError);

  bad = good;
  bad.radii = {4, 2};
  CHECK_THROWS_AS(coexistence_window_scan(bad), InvalidInputError);

  bad = good;
  bad.grid = LambdaGrid{{0.5, 0.25}};
  CHECK_THROWS_AS(coexistence_window_scan(bad), InvalidInputError);

  // One source strangled by the other is rejected up front.
  bad = good;
  bad.radii = {3};
  bad.set1 = SiteSet({site2(1, 0), site2(-1, 0), site2(0, 1), site2(0, -1), site2(1, 1),
                      site2(-1, 1), site2(1, -1), site2(-1, -1)});
  bad.set2 = SiteSet({origin_site()});
  CHECK_THROWS_WITH_AS(coexistence_window_scan(bad),
                       "initial pair is infertile: the fertility check requires that neither "
                       "set strangles the other",
                       InvalidInputError);

  // Sources must sit strictly inside the smallest shell.
  bad = good;
  bad.set2 = SiteSet({site2(2, 0)});
  CHECK_THROWS_WITH_AS(coexistence_window_scan(bad),
                       "initial sites must lie inside the smallest radius", InvalidInputError);
}
