#ifndef RICHARDSON_ANALYSIS_HPP
#define RICHARDSON_ANALYSIS_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "richardson/engine.hpp"
#include "richardson/stats.hpp"

namespace richardson {

// ---------------------------------------------------------------- time constant

struct TimeConstantParams {
  int dim = 2;
  double lambda = 1.0;
  std::vector<int> distances = {64};  // ascending n values; times share one run
  int replicas = 200;
  int margin = -1;  // box radius = max(n) + margin; default max(n)/2
  std::uint64_t seed = 0;
  int workers = 1;
};

struct TimeConstantEstimate {
  int n = 0;
  MeanCI t_over_n;            // mean of T(0, n*e1)/n with 95% CI
  std::vector<double> times;  // raw T(0, n*e1) per replica
};

struct TimeConstantResult {
  TimeConstantParams params;
  int box_radius = 0;
  bool margin_warning = false;  // margin below the max(n)/2 guideline
  std::vector<TimeConstantEstimate> estimates;
};

TimeConstantResult estimate_time_constant(const TimeConstantParams& params);

// ------------------------------------------------------------------- increments

struct GmParams {
  int dim = 2;
  int n = 16;
  int k_max = 3;  // increments for k = 0..k_max, anchored targets up to (k_max+1)*n
  int m = 64;     // backward anchor at -m*e1
  int replicas = 200;
  int lateral = -1;  // slab halfwidth; default max((k_max+1)*n, m)/2 + n
  int pad = -1;      // longitudinal slack beyond the extreme targets; default n
  std::uint64_t seed = 0;
  int workers = 1;
};

struct GmResult {
  GmParams params;
  Box box;
  std::vector<MeanCI> increments;  // E[T(0,(k+1)n) - T(0,kn)], k = 0..k_max
  MeanCI gm_increment;             // E[T(n*e1, -m*e1) - T(0, -m*e1)]
  MeanCI t_n;                      // E[T(n*e1, 0)]
  // Exact per-realization identities; any nonzero count is a defect.
  std::int64_t telescoping_violations = 0;
  std::int64_t triangle_violations = 0;
  // Per replica: T(0, n), T(0, 2n), ..., T(0, (k_max+1)n), T(0,-m), T(n,-m), T(n,0)
  std::vector<std::vector<double>> rows;
};

GmResult gm_increments(const GmParams& params);

// ------------------------------------------------------------------------ shape

struct ShapeParams {
  int dim = 2;
  double lambda = 1.0;
  int radius = 128;          // reference distance for the direction targets
  int replicas = 400;
  int direction_count = 16;  // d=2 only: evenly spaced angles, multiple of 8
  double margin_factor = 0.5;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct DirectionSpeed {
  std::array<double, kMaxDim> u{};  // unit direction
  Site target;                      // lattice point nearest radius*u
  int orbit = 0;                    // symmetry-orbit id
  MeanCI speed;                     // |target| / T(0, target)
};

struct ShapeEstimate {
  ShapeParams params;
  int box_radius = 0;
  std::vector<DirectionSpeed> directions;
  double convexity_defect = 0.0;  // max relative inward dent of the speed body
  double symmetry_defect = 0.0;   // max relative mean-speed spread within an orbit
  double symmetry_max_z = 0.0;    // max standardized pairwise difference
  double symmetry_z_threshold = 0.0;  // Bonferroni-adjusted 95% family bound
  bool symmetry_consistent = false;
  double axis_speed = 0.0;  // mean speed over the axis orbit
  std::vector<std::vector<double>> rows;  // per replica: speed per direction
};

ShapeEstimate estimate_shape(const ShapeParams& params);

// Direction grid used by estimate_shape (exposed for tests): includes every
// axis and diagonal direction; d = 2 fills in direction_count evenly spaced
// angles, d >= 3 uses axes, in-plane diagonals and the full diagonals.
std::vector<std::array<double, kMaxDim>> shape_directions(int dim, int direction_count);

// ------------------------------------------------------------------------- ends

struct EndsParams {
  int dim = 2;
  double lambda = 1.0;
  std::vector<int> radii = {32, 64, 128};
  int replicas = 200;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct EndsPerRadius {
  int radius = 0;
  std::vector<std::int64_t> histogram;  // index = subtree count, 0..2d
  ProportionCI fraction_ge2;
};

struct EndsResult {
  EndsParams params;
  std::vector<EndsPerRadius> per_radius;
  std::vector<std::vector<double>> rows;  // replica, then count per radius
};

EndsResult ends_proxy_scan(const EndsParams& params);

// --------------------------------------------------------------- weak-type speed

struct WeakSpeedParams {
  int dim = 2;
  double lambda = 0.5;  // type-2 rate, the weak side when < 1
  int radius = 128;
  int replicas = 2000;
  double v1_hat = 0.0;  // axis speed of the rate-1 one-type process
  std::uint64_t seed = 0;
  int workers = 1;
};

struct WeakSpeedResult {
  WeakSpeedParams params;
  std::int64_t events_both = 0;  // classification == both reached boundary
  MeanCI ratio_both;             // hit_time * lambda * v1_hat / R, conditioned
  // Both-reached or type-1-strangled rows whose weak-type contact time was
  // observed before the stop (enclosure may precede the survivor's contact).
  std::int64_t events_type2_reached = 0;
  MeanCI ratio_type2_reached;
  bool low_confidence = false;  // fewer than 50 conditioning events
  // replica, classification code, hit time, ratio
  std::vector<std::vector<double>> rows;
};

WeakSpeedResult weak_type_speed_diagnostic(const WeakSpeedParams& params);

// --------------------------------------------------------------- strong fraction

struct StrongFractionParams {
  int dim = 2;
  double lambda = 4.0;
  std::vector<int> radii = {16, 32, 64};
  int replicas = 1000;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct StrongFractionPerRadius {
  int radius = 0;
  std::int64_t conditioning_events = 0;  // both types on the filled boundary
  MeanCI strong_fraction;
  bool low_confidence = false;
};

struct StrongFractionResult {
  StrongFractionParams params;
  int strong_type = 2;  // type 2 when lambda >= 1, else type 1
  std::vector<StrongFractionPerRadius> per_radius;
  std::vector<std::vector<double>> rows;  // replica, radius, both flag, fraction
};

StrongFractionResult strong_fraction_diagnostic(const StrongFractionParams& params);

// --------------------------------------------------------------- level occupancy

struct LevelOccupancyParams {
  int dim = 2;
  double lambda = 1.0;
  int width = 32;  // slab lateral halfwidth
  int depth = 32;  // levels 0..depth ahead of the starting plane
  InitialKind initial = InitialKind::kHyperplane;
  double alpha = 0.0;  // cone slope when initial == kCone
  int back = -1;       // slab depth behind level 0; default 0 for the
                       // hyperplane start, `width` otherwise
  int replicas = 1000;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct LevelOccupancyResult {
  LevelOccupancyParams params;
  Box box;
  std::vector<MeanCI> mean_count;        // type-2 sites per level, level 0..depth
  std::vector<ProportionCI> survival;    // P(type-2 count at level > 0)
  std::vector<std::vector<double>> rows;  // replica, then count per level
};

LevelOccupancyResult level_occupancy(const LevelOccupancyParams& params);

// ---------------------------------------------------------------- subadditivity

struct SubadditivityParams {
  int dim = 2;
  double lambda = 1.0;
  int radius = 32;      // run box; triples are confined to the half-radius core
  int source_pool = 12; // distinct sources cached per realization
  int triples_per_seed = 100;
  int seeds = 100;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct SubadditivityResult {
  SubadditivityParams params;
  std::int64_t checked = 0;
  std::int64_t violations = 0;  // T(x,y) > T(x,z) + T(z,y), exact compare
  double max_violation = 0.0;
};

SubadditivityResult subadditivity_check(const SubadditivityParams& params);

}  // namespace richardson

#endif
