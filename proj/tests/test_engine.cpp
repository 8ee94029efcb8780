#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "doctest.h"
#include "richardson/engine.hpp"
#include "richardson/errors.hpp"
#include "richardson/field.hpp"
#include "richardson/lattice.hpp"
#include "richardson/stats.hpp"
#include "test_support.hpp"

using namespace richardson;
using richardson::testsupport::reference_distances;

namespace {

TwoTypeConfig two_type_cfg(const Box& box, double lambda, Discipline disc, StopRule rule,
                           const Site& s1, const Site& s2) {
  TwoTypeConfig cfg;
  cfg.lambda = lambda;
  cfg.initial = InitialConfiguration::finite_pair(SiteSet({s1}), SiteSet({s2}));
  cfg.discipline = disc;
  cfg.box = box;
  cfg.stop_rule = rule;
  return cfg;
}

}  // namespace

TEST_CASE("unit-weight stub: growth metric is L1 distance") {
  StubField unit(2, 1.0);
  Box box = Box::cube(origin_site(), 2, 2);
  GrowthState st = run_one_type(unit, 1.0, SiteSet({origin_site()}), box, StopRule::kFillBox);
  for (std::int64_t i = 0; i < box.size(); ++i) {
    Site s = box.site_at(i);
    CHECK(st.infection_time[static_cast<std::size_t>(i)] ==
          static_cast<double>(l1_distance(origin_site(), s, 2)));
  }
  // Source: time 0, parent undefined (-1).
  auto src = box.index_of(origin_site());
  CHECK(st.infection_time[static_cast<std::size_t>(src)] == 0.0);
  CHECK(st.parent[static_cast<std::size_t>(src)] == -1);

  // Equal-time ties resolve by (target, source) with lexicographic indices:
  // each site's parent is its lexicographically smallest closer neighbor.
  auto parent_site = [&](Site s) { return box.site_at(st.parent[static_cast<std::size_t>(box.index_of(s))]); };
  CHECK(parent_site(site2(1, 1)) == site2(0, 1));
  CHECK(parent_site(site2(-1, 1)) == site2(-1, 0));
  CHECK(parent_site(site2(-1, -1)) == site2(-1, 0));
  CHECK(parent_site(site2(2, 0)) == site2(1, 0));
  CHECK(parent_site(site2(0, -2)) == site2(0, -1));
}

// A fully specified 12-edge stub on the 5x5 box, all other edges = 10. The
// expected table below is a by-hand Dijkstra run over all 25 sites (frozen;
// recomputing it means redoing the hand run, not trusting the engine).
TEST_CASE("12-edge stub: full hand-run Dijkstra table and geodesic tree") {
  StubField stub(2, 10.0);
  auto set = [&](Site a, Site b, double v) {
    stub.set(Edge::between(a, b, 2), Channel::kShared, v);
  };
  set(site2(0, 0), site2(1, 0), 1.0);
  set(site2(1, 0), site2(2, 0), 1.0);
  set(site2(2, 0), site2(2, 1), 1.0);
  set(site2(2, 1), site2(2, 2), 1.0);
  set(site2(0, 0), site2(0, 1), 2.0);
  set(site2(0, 1), site2(-1, 1), 1.0);
  set(site2(-1, 1), site2(-2, 1), 1.0);
  set(site2(-2, 1), site2(-2, 0), 1.0);
  set(site2(0, 0), site2(0, -1), 3.0);
  set(site2(0, -1), site2(1, -1), 1.0);
  set(site2(1, -1), site2(1, -2), 1.0);
  set(site2(-2, 0), site2(-2, -1), 4.0);

  Box box = Box::cube(origin_site(), 2, 2);
  GrowthState st = run_one_type(stub, 1.0, SiteSet({origin_site()}), box, StopRule::kFillBox);

  struct Row {
    Site s;
    double t;
  };
  const std::vector<Row> expected = {
      {site2(-2, -2), 19.0}, {site2(-2, -1), 9.0},  {site2(-2, 0), 5.0},
      {site2(-2, 1), 4.0},   {site2(-2, 2), 14.0},  {site2(-1, -2), 23.0},
      {site2(-1, -1), 13.0}, {site2(-1, 0), 10.0},  {site2(-1, 1), 3.0},
      {site2(-1, 2), 13.0},  {site2(0, -2), 13.0},  {site2(0, -1), 3.0},
      {site2(0, 0), 0.0},    {site2(0, 1), 2.0},    {site2(0, 2), 12.0},
      {site2(1, -2), 5.0},   {site2(1, -1), 4.0},   {site2(1, 0), 1.0},
      {site2(1, 1), 11.0},   {site2(1, 2), 14.0},   {site2(2, -2), 15.0},
      {site2(2, -1), 12.0},  {site2(2, 0), 2.0},    {site2(2, 1), 3.0},
      {site2(2, 2), 4.0},
  };
  REQUIRE(expected.size() == 25);
  for (const Row& row : expected) {
    CHECK(st.infection_time[static_cast<std::size_t>(box.index_of(row.s))] == row.t);
  }

  // Parent links are the argmin predecessors of the same hand run. The lone
  // exact tie, (-1,-2) at 23 via (-1,-1) or (0,-2), resolves to the smaller
  // source index (-1,-1) under the one-type (target, source) tie rule.
  const std::vector<std::pair<Site, Site>> parents = {
      {site2(1, 0), site2(0, 0)},    {site2(2, 0), site2(1, 0)},
      {site2(2, 1), site2(2, 0)},    {site2(2, 2), site2(2, 1)},
      {site2(0, 1), site2(0, 0)},    {site2(-1, 1), site2(0, 1)},
      {site2(-2, 1), site2(-1, 1)},  {site2(-2, 0), site2(-2, 1)},
      {site2(0, -1), site2(0, 0)},   {site2(1, -1), site2(0, -1)},
      {site2(1, -2), site2(1, -1)},  {site2(-2, -1), site2(-2, 0)},
      {site2(1, 1), site2(1, 0)},    {site2(0, 2), site2(0, 1)},
      {site2(1, 2), site2(2, 2)},    {site2(-1, 2), site2(-1, 1)},
      {site2(-2, 2), site2(-2, 1)},  {site2(-1, 0), site2(0, 0)},
      {site2(-1, -1), site2(0, -1)}, {site2(0, -2), site2(0, -1)},
      {site2(-1, -2), site2(-1, -1)}, {site2(-2, -2), site2(-2, -1)},
      {site2(2, -1), site2(2, 0)},   {site2(2, -2), site2(1, -2)},
  };
  REQUIRE(parents.size() == 24);
  GeodesicTree tree = geodesic_tree(st);
  CHECK(tree.root == origin_site());
  CHECK(tree.edge_count == 24);
  for (const auto& [child, parent] : parents) {
    auto p = tree.parent[static_cast<std::size_t>(box.index_of(child))];
    CHECK(box.site_at(p) == parent);
  }
}

TEST_CASE("two-type forced race: cheaper rival edge wins the middle site") {
  StubField stub(2, 9.0, ChannelMode::kIndependent);
  stub.set(Edge::between(site2(0, 0), site2(1, 0), 2), Channel::kType1, 0.7);
  stub.set(Edge::between(site2(1, 0), site2(2, 0), 2), Channel::kType2, 0.4);
  Box box = Box::cube(origin_site(), 2, 2);
  TwoTypeConfig cfg = two_type_cfg(box, 1.0, Discipline::kIndependent, StopRule::kFillBox,
                                   site2(0, 0), site2(2, 0));
  Outcome out = run_two_type(stub, cfg);
  auto mid = box.index_of(site2(1, 0));
  CHECK(out.state.occupancy[static_cast<std::size_t>(mid)] == 2);
  CHECK(out.state.infection_time[static_cast<std::size_t>(mid)] == 0.4);
  CHECK(out.state.parent[static_cast<std::size_t>(mid)] == box.index_of(site2(2, 0)));
}

// Hand-computed 9-site competition: type 1 at the center, type 2 at (1,0),
// independent channels, lambda = 1. Frozen event-by-event outcome.
static StubField nine_site_stub() {
  StubField stub(2, 9.0, ChannelMode::kIndependent);
  auto s1 = [&](Site a, Site b, double v) { stub.set(Edge::between(a, b, 2), Channel::kType1, v); };
  auto s2 = [&](Site a, Site b, double v) { stub.set(Edge::between(a, b, 2), Channel::kType2, v); };
  s1(site2(-1, -1), site2(-1, 0), 0.9);
  s1(site2(-1, 0), site2(-1, 1), 1.0);
  s1(site2(0, -1), site2(0, 0), 0.6);
  s1(site2(0, 0), site2(0, 1), 0.7);
  s1(site2(-1, 0), site2(0, 0), 0.5);
  s1(site2(-1, -1), site2(0, -1), 1.5);
  s1(site2(-1, 1), site2(0, 1), 2.0);
  s2(site2(1, -1), site2(1, 0), 0.4);
  s2(site2(1, 0), site2(1, 1), 0.3);
  s2(site2(0, -1), site2(1, -1), 5.0);
  s2(site2(0, 1), site2(1, 1), 5.0);
  return stub;
}

TEST_CASE("9-site hand table, fill-box run") {
  StubField stub = nine_site_stub();
  Box box = Box::cube(origin_site(), 1, 2);
  TwoTypeConfig cfg = two_type_cfg(box, 1.0, Discipline::kIndependent, StopRule::kFillBox,
                                   site2(0, 0), site2(1, 0));
  Outcome out = run_two_type(stub, cfg);

  CHECK(out.classification == Classification::kBoxFilled);
  CHECK(out.count1 == 6);
  CHECK(out.count2 == 3);
  CHECK(out.boundary_count1 == 5);
  CHECK(out.boundary_count2 == 3);
  REQUIRE(out.hit_time1.has_value());
  REQUIRE(out.hit_time2.has_value());
  CHECK(*out.hit_time1 == 0.5);   // (-1,0) infected from the center
  CHECK(*out.hit_time2 == 0.0);   // (1,0) starts on the boundary
  REQUIRE(out.boundary_hit_time.has_value());
  CHECK(*out.boundary_hit_time == 0.5);
  CHECK(out.first_contact_type == 2);

  struct Row {
    Site s;
    int type;
    double t;
  };
  const std::vector<Row> table = {
      {site2(0, 0), 1, 0.0},  {site2(1, 0), 2, 0.0},  {site2(1, 1), 2, 0.3},
      {site2(1, -1), 2, 0.4}, {site2(-1, 0), 1, 0.5}, {site2(0, -1), 1, 0.6},
      {site2(0, 1), 1, 0.7},  {site2(-1, -1), 1, 1.4}, {site2(-1, 1), 1, 1.5},
  };
  REQUIRE(table.size() == 9);
  for (const Row& row : table) {
    auto i = static_cast<std::size_t>(box.index_of(row.s));
    CHECK(out.state.occupancy[i] == row.type);
    CHECK(out.state.infection_time[i] == row.t);
  }
  // Parent links of the infection forest.
  auto parent_of = [&](Site s) {
    return box.site_at(out.state.parent[static_cast<std::size_t>(box.index_of(s))]);
  };
  CHECK(parent_of(site2(1, 1)) == site2(1, 0));
  CHECK(parent_of(site2(1, -1)) == site2(1, 0));
  CHECK(parent_of(site2(-1, 0)) == site2(0, 0));
  CHECK(parent_of(site2(0, -1)) == site2(0, 0));
  CHECK(parent_of(site2(0, 1)) == site2(0, 0));
  CHECK(parent_of(site2(-1, -1)) == site2(-1, 0));
  CHECK(parent_of(site2(-1, 1)) == site2(-1, 0));
}

TEST_CASE("9-site hand table, first-boundary-contact run stops once decided") {
  StubField stub = nine_site_stub();
  Box box = Box::cube(origin_site(), 1, 2);
  TwoTypeConfig cfg = two_type_cfg(box, 1.0, Discipline::kIndependent,
                                   StopRule::kFirstBoundaryContact, site2(0, 0), site2(1, 0));
  Outcome out = run_two_type(stub, cfg);

  // Type 2 touches at t=0 (initial site on the boundary); the run continues
  // until type 1 touches at t=0.5 via (-1,0) and stops there: the later
  // fill-only sites (0,-1), (0,1), (-1,-1), (-1,1) stay free.
  CHECK(out.classification == Classification::kBothReachedBoundary);
  CHECK(out.count1 == 2);
  CHECK(out.count2 == 3);
  REQUIRE(out.hit_time1.has_value());
  REQUIRE(out.hit_time2.has_value());
  CHECK(*out.hit_time1 == 0.5);
  CHECK(*out.hit_time2 == 0.0);
  CHECK(*out.boundary_hit_time == 0.5);
  CHECK(out.first_contact_type == 2);
  for (Site s : {site2(0, -1), site2(0, 1), site2(-1, -1), site2(-1, 1)}) {
    CHECK(out.state.occupancy[static_cast<std::size_t>(box.index_of(s))] == 0);
  }
}

TEST_CASE("engine agrees with an independent O(V^2) Dijkstra, bit for bit") {
  for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
    for (double rate : {1.0, 0.5}) {
      FieldSpec spec{derive_seed(3100, seed), 2, ChannelMode::kShared};
      HashField field(spec);
      Box box = Box::cube(origin_site(), 3, 2);
      GrowthState st =
          run_one_type(field, rate, SiteSet({origin_site()}), box, StopRule::kFillBox);
      std::vector<double> ref = reference_distances(field, rate, origin_site(), box);
      for (std::int64_t i = 0; i < box.size(); ++i) {
        CHECK(st.infection_time[static_cast<std::size_t>(i)] ==
              ref[static_cast<std::size_t>(i)]);
      }
    }
  }
  // d=3 as well.
  FieldSpec spec{derive_seed(3200, 1), 3, ChannelMode::kShared};
  HashField field(spec);
  Box box = Box::cube(site3(0, 0, 0), 2, 3);
  GrowthState st = run_one_type(field, 1.0, SiteSet({site3(0, 0, 0)}), box, StopRule::kFillBox);
  std::vector<double> ref = reference_distances(field, 1.0, site3(0, 0, 0), box);
  for (std::int64_t i = 0; i < box.size(); ++i) {
    CHECK(st.infection_time[static_cast<std::size_t>(i)] == ref[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("union identity: shared two-type run erases to the one-type run") {
  auto check_union = [](int dim, int radius, std::uint64_t master, int seeds) {
    for (int r = 0; r < seeds; ++r) {
      FieldSpec spec{derive_seed(master, static_cast<std::uint64_t>(r)), dim,
                     ChannelMode::kShared};
      HashField field(spec);
      Box box = Box::cube(origin_site(), radius, dim);
      Site s2site = shifted(origin_site(), 0, 1);
      TwoTypeConfig cfg = two_type_cfg(box, 1.0, Discipline::kShared, StopRule::kFillBox,
                                       origin_site(), s2site);
      Outcome two = run_two_type(field, cfg);
      GrowthState one = run_one_type(field, 1.0, SiteSet({origin_site(), s2site}), box,
                                     StopRule::kFillBox);
      CHECK(erase_labels(two.state) == erase_labels(one));
      CHECK(two.count1 + two.count2 == box.size());
    }
  };
  check_union(2, 6, 4100, 20);
  check_union(3, 3, 4200, 8);
}

TEST_CASE("first-boundary-contact matches fill-box ground truth per seed") {
  int both_seen = 0;
  int strangled_seen = 0;
  for (int r = 0; r < 40; ++r) {
    FieldSpec spec{derive_seed(5150, static_cast<std::uint64_t>(r)), 2,
                   ChannelMode::kIndependent};
    HashField field(spec);
    Box box = Box::cube(origin_site(), 5, 2);
    TwoTypeConfig cfg = two_type_cfg(box, 0.7, Discipline::kIndependent,
                                     StopRule::kFirstBoundaryContact, site2(0, 0), site2(1, 0));
    Outcome fbc = run_two_type(field, cfg);
    cfg.stop_rule = StopRule::kFillBox;
    Outcome fill = run_two_type(field, cfg);

    bool both_fill = fill.hit_time1.has_value() && fill.hit_time2.has_value();
    bool both_fbc = fbc.classification == Classification::kBothReachedBoundary;
    CHECK(both_fbc == both_fill);
    if (both_fbc) {
      ++both_seen;
      CHECK(*fbc.hit_time1 == *fill.hit_time1);
      CHECK(*fbc.hit_time2 == *fill.hit_time2);
      CHECK(*fbc.boundary_hit_time == std::max(*fill.hit_time1, *fill.hit_time2));
    } else {
      ++strangled_seen;
      // The strangled type agrees between the rules; the survivor's hit may
      // be unobserved under the early stop but never contradicts the fill.
      if (fbc.classification == Classification::kType2Strangled) {
        CHECK(!fill.hit_time2.has_value());
        if (fbc.hit_time1) CHECK(*fbc.hit_time1 == *fill.hit_time1);
      } else {
        CHECK(fbc.classification == Classification::kType1Strangled);
        CHECK(!fill.hit_time1.has_value());
        if (fbc.hit_time2) CHECK(*fbc.hit_time2 == *fill.hit_time2);
      }
    }
    // Fill-box classification of the same runs.
    if (both_fill) {
      CHECK(fill.classification == Classification::kBoxFilled);
    } else {
      CHECK((fill.classification == Classification::kType1Strangled ||
             fill.classification == Classification::kType2Strangled));
    }
  }
  // The geometry at lambda=0.7 produces both outcomes within 40 seeds.
  CHECK(both_seen > 0);
  CHECK(strangled_seen > 0);
}

TEST_CASE("two-type validation errors") {
  Box box = Box::cube(origin_site(), 2, 2);
  HashField shared(FieldSpec{1, 2, ChannelMode::kShared});
  HashField indep(FieldSpec{1, 2, ChannelMode::kIndependent});

  TwoTypeConfig cfg = two_type_cfg(box, 1.0, Discipline::kIndependent, StopRule::kFillBox,
                                   site2(0, 0), site2(1, 0));
  cfg.lambda = 0.0;
  CHECK_THROWS_AS(run_two_type(indep, cfg), InvalidInputError);
  cfg.lambda = -1.0;
  CHECK_THROWS_AS(run_two_type(indep, cfg), InvalidInputError);

  TwoTypeConfig shared_cfg = two_type_cfg(box, 0.5, Discipline::kShared, StopRule::kFillBox,
                                          site2(0, 0), site2(1, 0));
  CHECK_THROWS_AS(run_two_type(shared, shared_cfg), InvalidInputError);

  // Field channel mode must match the discipline.
  TwoTypeConfig ok_indep = two_type_cfg(box, 1.0, Discipline::kIndependent, StopRule::kFillBox,
                                        site2(0, 0), site2(1, 0));
  CHECK_THROWS_AS(run_two_type(shared, ok_indep), InvalidInputError);
  TwoTypeConfig ok_shared = two_type_cfg(box, 1.0, Discipline::kShared, StopRule::kFillBox,
                                         site2(0, 0), site2(1, 0));
  CHECK_THROWS_AS(run_two_type(indep, ok_shared), InvalidInputError);

  // Initial-set validation.
  CHECK_THROWS_AS(two_type_cfg(box, 1.0, Discipline::kIndependent, StopRule::kFillBox,
                               site2(0, 0), site2(0, 0))
                      .initial.materialize(box, 2),
                  InvalidInputError);
  TwoTypeConfig outside = two_type_cfg(box, 1.0, Discipline::kIndependent, StopRule::kFillBox,
                                       site2(0, 0), site2(5, 0));
  CHECK_THROWS_AS(run_two_type(indep, outside), InvalidInputError);
  InitialConfiguration empty_side;
  empty_side.kind = InitialKind::kFinitePair;
  empty_side.type1 = SiteSet({site2(0, 0)});
  CHECK_THROWS_AS(empty_side.materialize(box, 2), InvalidInputError);

  CHECK_THROWS_AS(run_one_type(indep, 0.0, SiteSet({origin_site()}), box, StopRule::kFillBox),
                  InvalidInputError);
  CHECK_THROWS_AS(run_one_type(indep, 1.0, SiteSet(), box, StopRule::kFillBox),
                  InvalidInputError);
}

TEST_CASE("first_passage_time basics") {
  StubField unit(2, 1.0);
  Box box = Box::cube(origin_site(), 4, 2);
  CHECK(first_passage_time(unit, 1.0, site2(1, 1), site2(1, 1), box) == 0.0);
  CHECK(first_passage_time(unit, 1.0, site2(0, 0), site2(2, 3), box) == 5.0);
  CHECK(first_passage_time(unit, 2.0, site2(0, 0), site2(2, 3), box) == 2.5);
  CHECK_THROWS_AS(first_passage_time(unit, 1.0, site2(0, 0), site2(9, 0), box),
                  InvalidInputError);

  // Equals the infection time of a full one-type run on the same field.
  FieldSpec spec{808, 2, ChannelMode::kShared};
  HashField field(spec);
  GrowthState st = run_one_type(field, 1.0, SiteSet({origin_site()}), box, StopRule::kFillBox);
  for (Site y : {site2(3, -2), site2(-4, 4), site2(0, 1)}) {
    CHECK(first_passage_time(field, 1.0, origin_site(), y, box) ==
          st.infection_time[static_cast<std::size_t>(box.index_of(y))]);
  }
}

TEST_CASE("first_passage_time is symmetric per realization") {
  Box box = Box::cube(origin_site(), 5, 2);
  for (int r = 0; r < 25; ++r) {
    FieldSpec spec{derive_seed(606, static_cast<std::uint64_t>(r)), 2, ChannelMode::kShared};
    Site x = site2(static_cast<std::int32_t>(r % 5) - 2, static_cast<std::int32_t>(r % 7) - 3);
    Site y = site2(static_cast<std::int32_t>(r % 3) - 1, 2 - static_cast<std::int32_t>(r % 4));
    double txy = first_passage_time(spec, 1.0, x, y, box);
    double tyx = first_passage_time(spec, 1.0, y, x, box);
    CHECK(txy == tyx);  // exact: same path-sum minimum on the quantized grid
  }
}

TEST_CASE("monotone front: infection times never decrease along parents") {
  FieldSpec spec{909, 2, ChannelMode::kShared};
  Box box = Box::cube(origin_site(), 6, 2);
  GrowthState st = run_one_type(spec, 1.0, SiteSet({origin_site()}), box, StopRule::kFillBox);
  for (std::int64_t i = 0; i < box.size(); ++i) {
    auto idx = static_cast<std::size_t>(i);
    if (st.occupancy[idx] == 0) continue;
    CHECK(st.infection_time[idx] >= 0.0);
    auto p = st.parent[idx];
    if (p == -1) continue;
    CHECK(st.infection_time[static_cast<std::size_t>(p)] <= st.infection_time[idx]);
  }
}

TEST_CASE("geodesic_tree rejects multi-source states") {
  StubField unit(2, 1.0);
  Box box = Box::cube(origin_site(), 2, 2);
  GrowthState st =
      run_one_type(unit, 1.0, SiteSet({site2(0, 0), site2(1, 1)}), box, StopRule::kFillBox);
  CHECK_THROWS_AS(geodesic_tree(st), InvalidInputError);
  CHECK_THROWS_AS(ends_proxy_count(st, 1), InvalidInputError);
}

TEST_CASE("ends_proxy_count on a handcrafted tree") {
  Box box = Box::cube(origin_site(), 2, 2);
  GrowthState st;
  st.box = box;
  st.occupancy.assign(static_cast<std::size_t>(box.size()), 0);
  st.infection_time.assign(static_cast<std::size_t>(box.size()),
                           std::numeric_limits<double>::infinity());
  st.parent.assign(static_cast<std::size_t>(box.size()), -1);
  auto add = [&](Site s, double t, std::int32_t parent_idx) {
    auto i = static_cast<std::size_t>(box.index_of(s));
    st.occupancy[i] = 1;
    st.infection_time[i] = t;
    st.parent[i] = parent_idx;
  };
  auto idx = [&](Site s) { return static_cast<std::int32_t>(box.index_of(s)); };
  add(site2(0, 0), 0.0, -1);
  st.initial_sites = {idx(site2(0, 0))};
  // Arm A: (1,0) -> (2,0). Arm B: (0,1) -> (0,2). Stub arm C: (-1,0) only.
  add(site2(1, 0), 1.0, idx(site2(0, 0)));
  add(site2(2, 0), 2.0, idx(site2(1, 0)));
  add(site2(0, 1), 1.0, idx(site2(0, 0)));
  add(site2(0, 2), 2.0, idx(site2(0, 1)));
  add(site2(-1, 0), 1.0, idx(site2(0, 0)));

  CHECK(ends_proxy_count(st, 2) == 2);  // arms A and B reach the 2-shell
  CHECK(ends_proxy_count(st, 1) == 3);  // all three arms touch the 1-shell
  CHECK_THROWS_AS(ends_proxy_count(st, 0), InvalidInputError);
}

TEST_CASE("shell_composition on handcrafted occupancy") {
  Box box = Box::cube(origin_site(), 2, 2);
  GrowthState st;
  st.box = box;
  st.occupancy.assign(static_cast<std::size_t>(box.size()), 0);
  st.infection_time.assign(static_cast<std::size_t>(box.size()), 0.0);
  st.parent.assign(static_cast<std::size_t>(box.size()), -1);
  st.initial_sites = {static_cast<std::int32_t>(box.index_of(origin_site()))};
  auto put = [&](Site s, std::uint8_t t) {
    st.occupancy[static_cast<std::size_t>(box.index_of(s))] = t;
  };
  put(site2(1, 1), 1);
  put(site2(1, 0), 2);
  put(site2(0, 1), 1);
  put(site2(2, 2), 1);  // on the 2-shell, not the 1-shell

  ShellComposition one = shell_composition(st, 1);
  CHECK(one.type1 == 2);
  CHECK(one.type2 == 1);
  ShellComposition two = shell_composition(st, 2);
  CHECK(two.type1 == 1);
  CHECK(two.type2 == 0);
  CHECK_THROWS_AS(shell_composition(st, 3), InvalidInputError);

  // A box without a central site is rejected.
  GrowthState odd;
  odd.box = Box::slab(0, 1, 1, 2);
  odd.occupancy.assign(static_cast<std::size_t>(odd.box.size()), 0);
  CHECK_THROWS_AS(shell_composition(odd, 1), InvalidInputError);
}

TEST_CASE("level_counts on handcrafted occupancy") {
  Box box = Box::slab(0, 2, 1, 2);  // x1 in [0,2], x2 in [-1,1]
  GrowthState st;
  st.box = box;
  st.occupancy.assign(static_cast<std::size_t>(box.size()), 0);
  st.infection_time.assign(static_cast<std::size_t>(box.size()), 0.0);
  st.parent.assign(static_cast<std::size_t>(box.size()), -1);
  auto put = [&](Site s, std::uint8_t t) {
    st.occupancy[static_cast<std::size_t>(box.index_of(s))] = t;
  };
  put(site2(0, -1), 1);
  put(site2(0, 0), 1);
  put(site2(0, 1), 1);
  put(site2(1, 0), 1);
  put(site2(2, 1), 2);

  CHECK(level_counts(st, 1) == std::vector<std::int64_t>{3, 1, 0});
  CHECK(level_counts(st, 2) == std::vector<std::int64_t>{0, 0, 1});
}

TEST_CASE("box capacity is enforced") {
  StubField unit(2, 1.0);
  Box huge = Box::cube(origin_site(), 5100, 2);  // 10201^2 > 100M sites
  CHECK_THROWS_AS(run_one_type(unit, 1.0, SiteSet({origin_site()}), huge, StopRule::kFillBox),
                  CapacityError);
}

TEST_CASE("axis passage times are exchangeable across axes (two-sample KS)") {
  const int n = 6;
  const int reps = 10000;
  Box box = Box::cube(origin_site(), 9, 2);
  std::vector<double> along_e1;
  std::vector<double> along_e2;
  along_e1.reserve(reps);
  along_e2.reserve(reps);
  for (int r = 0; r < reps; ++r) {
    FieldSpec s1{derive_seed(555, static_cast<std::uint64_t>(r)), 2, ChannelMode::kShared};
    FieldSpec s2{derive_seed(556, static_cast<std::uint64_t>(r)), 2, ChannelMode::kShared};
    along_e1.push_back(first_passage_time(s1, 1.0, origin_site(), site2(n, 0), box));
    along_e2.push_back(first_passage_time(s2, 1.0, origin_site(), site2(0, n), box));
  }
  double d = ks_statistic_two_sample(along_e1, along_e2);
  CHECK(d < ks_two_sample_critical(static_cast<std::size_t>(reps),
                                   static_cast<std::size_t>(reps), 1e-3));
}
