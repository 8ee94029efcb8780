#include "richardson/coupling.hpp"

#include <algorithm>

#include "richardson/util.hpp"

namespace richardson {

void LambdaGrid::validate() const {
  if (values.empty()) throw InvalidInputError("lambda grid must not be empty");
  double prev = 0.0;
  for (double v : values) {
    if (!(v > prev)) throw InvalidInputError("lambda grid must be strictly increasing");
    if (v > 1.0) throw InvalidInputError("lambda grid values must lie in (0, 1]");
    prev = v;
  }
}

namespace {

SiteSet occupied_sites(const GrowthState& state, int type) {
  std::vector<Site> sites;
  for (std::int64_t i = 0; i < state.size(); ++i) {
    if (state.occupancy[static_cast<std::size_t>(i)] == type) {
      sites.push_back(state.box.site_at(i));
    }
  }
  return SiteSet(std::move(sites));
}

}  // namespace

CoupledOutcome coupled_grid_run(const LambdaGrid& grid, const FieldSpec& spec,
                                TwoTypeConfig config, bool collect_sets) {
  grid.validate();
  if (config.discipline != Discipline::kIndependent) {
    throw InvalidInputError("coupled grid runs need the independent discipline");
  }
  CoupledOutcome out;
  out.lambdas = grid.values;
  HashField field(spec);
  for (double lambda : grid.values) {
    config.lambda = lambda;
    Outcome o = run_two_type(field, config);
    if (collect_sets) {
      out.ever1.push_back(occupied_sites(o.state, 1));
      out.ever2.push_back(occupied_sites(o.state, 2));
    }
    out.outcomes.push_back(std::move(o));
  }
  return out;
}

CoexistenceScanResult coexistence_window_scan(const CoexistenceScanParams& params) {
  require_dimension(params.dim);
  params.grid.validate();
  if (params.replicas < 1) throw InvalidInputError("replicas must be >= 1");
  if (params.radii.empty()) throw InvalidInputError("need at least one radius");
  int prev = 1;
  for (int r : params.radii) {
    if (r <= prev) throw InvalidInputError("radii must be strictly increasing and >= 2");
    prev = r;
  }
  if (!is_fertile(params.set1, params.set2, params.dim)) {
    throw InvalidInputError(
        "initial pair is infertile: the fertility check requires that neither "
        "set strangles the other");
  }
  // Sources must sit strictly inside the smallest shell, otherwise the
  // nesting property loses its anchor.
  for (const SiteSet* s : {&params.set1, &params.set2}) {
    for (const Site& site : s->sites()) {
      if (linf_distance(site, origin_site(), params.dim) >= params.radii.front()) {
        throw InvalidInputError("initial sites must lie inside the smallest radius");
      }
    }
  }

  CoexistenceScanResult res;
  res.params = params;
  res.box = Box::cube(origin_site(), params.radii.back(), params.dim);

  TwoTypeConfig config;
  config.initial = InitialConfiguration::finite_pair(params.set1, params.set2);
  config.discipline = Discipline::kIndependent;
  config.box = res.box;
  config.stop_rule = StopRule::kFillBox;

  const std::size_t nl = params.grid.values.size();
  const std::size_t nr = params.radii.size();
  res.rows.assign(static_cast<std::size_t>(params.replicas) * nl * nr,
                  std::vector<double>(9, 0.0));

  parallel_for_replicas(params.replicas, params.workers, [&](std::int64_t rep) {
    FieldSpec spec{derive_seed(params.seed, static_cast<std::uint64_t>(rep)), params.dim,
                   ChannelMode::kIndependent};
    CoupledOutcome co = coupled_grid_run(params.grid, spec, config, /*collect_sets=*/false);
    for (std::size_t j = 0; j < nl; ++j) {
      const Outcome& out = co.outcomes[j];
      for (std::size_t i = 0; i < nr; ++i) {
        ShellComposition shell = shell_composition(out.state, params.radii[i]);
        auto& row = res.rows[(static_cast<std::size_t>(rep) * nl + j) * nr + i];
        row[0] = static_cast<double>(rep);
        row[1] = params.grid.values[j];
        row[2] = static_cast<double>(params.radii[i]);
        row[3] = static_cast<double>(out.classification);
        row[4] = static_cast<double>(out.count1);
        row[5] = static_cast<double>(out.count2);
        row[6] = static_cast<double>(shell.type1);
        row[7] = static_cast<double>(shell.type2);
        row[8] = shell.type1 > 0 && shell.type2 > 0 ? 1.0 : 0.0;
      }
    }
  });

  auto row_at = [&](std::int64_t rep, std::size_t j, std::size_t i) -> const std::vector<double>& {
    return res.rows[(static_cast<std::size_t>(rep) * nl + j) * nr + i];
  };

  for (std::size_t j = 0; j < nl; ++j) {
    for (std::size_t i = 0; i < nr; ++i) {
      std::int64_t hits = 0;
      for (int rep = 0; rep < params.replicas; ++rep) {
        hits += row_at(rep, j, i)[8] == 1.0;
      }
      CoexistenceCell cell;
      cell.lambda = params.grid.values[j];
      cell.radius = params.radii[i];
      cell.both_on_shell = proportion_ci(hits, params.replicas);
      res.cells.push_back(cell);
    }
  }

  for (int rep = 0; rep < params.replicas; ++rep) {
    for (std::size_t j = 0; j < nl; ++j) {
      for (std::size_t i = 0; i + 1 < nr; ++i) {
        bool small_both = row_at(rep, j, i)[8] == 1.0;
        bool large_both = row_at(rep, j, i + 1)[8] == 1.0;
        if (large_both && !small_both) ++res.nesting_violations;
      }
    }
    for (std::size_t i = 0; i < nr; ++i) {
      for (std::size_t j = 0; j + 1 < nl; ++j) {
        bool p1_lo = row_at(rep, j, i)[6] > 0.0;
        bool p1_hi = row_at(rep, j + 1, i)[6] > 0.0;
        bool p2_lo = row_at(rep, j, i)[7] > 0.0;
        bool p2_hi = row_at(rep, j + 1, i)[7] > 0.0;
        if (p1_hi && !p1_lo) ++res.mono1_violations;
        if (p2_lo && !p2_hi) ++res.mono2_violations;
        ++res.mono_checks;
      }
    }
  }
  return res;
}

}  // namespace richardson
