#ifndef RICHARDSON_COUPLING_HPP
#define RICHARDSON_COUPLING_HPP

#include <cstdint>
#include <vector>

#include "richardson/engine.hpp"
#include "richardson/stats.hpp"

namespace richardson {

// Grid of type-2 rates sharing one base-sample realization: the type-2
// passage time at rate lambda is base/lambda, so a single counter-based field
// serves every level of the grid with the marginals exactly preserved.
struct LambdaGrid {
  std::vector<double> values;  // strictly increasing, all in (0, 1]

  void validate() const;
};

struct CoupledOutcome {
  std::vector<double> lambdas;
  std::vector<Outcome> outcomes;  // index-aligned with lambdas
  // Final infected sets per level; filled only when requested (they cost a
  // sort of the whole box per level).
  std::vector<SiteSet> ever1;
  std::vector<SiteSet> ever2;
};

// Run the two-type engine once per grid level on the shared field. The
// config's lambda is overwritten level by level; the discipline (and the
// field spec's channel mode) must be independent so that scaling the type-2
// channel leaves type 1 untouched.
CoupledOutcome coupled_grid_run(const LambdaGrid& grid, const FieldSpec& spec,
                                TwoTypeConfig config, bool collect_sets = true);

struct CoexistenceScanParams {
  int dim = 2;
  LambdaGrid grid{{1.0}};
  std::vector<int> radii = {16, 32, 64};  // strictly increasing snapshot radii
  SiteSet set1 = SiteSet({origin_site()});
  SiteSet set2 = SiteSet({site2(1, 0)});
  int replicas = 1000;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct CoexistenceCell {
  double lambda = 0.0;
  int radius = 0;
  ProportionCI both_on_shell;  // both types present at that radius
};

struct CoexistenceScanResult {
  CoexistenceScanParams params;
  Box box;                             // cube of the largest radius
  std::vector<CoexistenceCell> cells;  // lambda-major, radius-minor
  // Exact per-seed property: both-on-shell at a larger radius implies it at
  // every smaller one (snapshots of a single fill). Expect zero.
  std::int64_t nesting_violations = 0;
  // Heuristic per-seed monotonicity across adjacent grid levels; reported as
  // rates, not asserted (the shared field makes levels comparable).
  std::int64_t mono1_violations = 0;  // type-1 shell presence appeared as lambda rose
  std::int64_t mono2_violations = 0;  // type-2 shell presence vanished as lambda rose
  std::int64_t mono_checks = 0;
  // replica, lambda, radius, classification, count1, count2, shell1, shell2, both
  std::vector<std::vector<double>> rows;
};

CoexistenceScanResult coexistence_window_scan(const CoexistenceScanParams& params);

}  // namespace richardson

#endif
