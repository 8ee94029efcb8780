#ifndef RICHARDSON_ENGINE_HPP
#define RICHARDSON_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "richardson/field.hpp"
#include "richardson/lattice.hpp"

namespace richardson {

// Largest box (in sites) a single run may allocate; ~100M sites keeps the
// dense state arrays near 1.3 GB worst case.
inline constexpr std::int64_t kMaxBoxSites = 100'000'000;

// Final state of a growth run. Dense arrays indexed by the box linearization:
// occupancy 0 = never infected, 1/2 = infection type; infection_time and
// parent are meaningful only where occupancy != 0. parent == -1 marks initial
// sites (their times are 0).
struct GrowthState {
  Box box;
  std::vector<std::uint8_t> occupancy;
  std::vector<double> infection_time;
  std::vector<std::int32_t> parent;
  std::vector<std::int32_t> initial_sites;  // linear indices, ascending

  bool infected(std::int64_t idx) const { return occupancy[static_cast<std::size_t>(idx)] != 0; }
  std::int64_t size() const { return static_cast<std::int64_t>(occupancy.size()); }
};

enum class StopRule : std::uint8_t {
  // Stop as soon as the classification is decided: every present type has
  // infected a boundary site, or some type is enclosed (no free neighbor
  // anywhere on its region) before touching it — enclosure both seals that
  // type's fate and guarantees the rival reaches, so nothing further can
  // change the outcome. The classification equals the filled-box event "which
  // types appear on the boundary after a full fill" exactly; per-type hit
  // times are recorded only up to the stop, so a strangled run may leave the
  // surviving type's contact time (and boundary counts) unobserved.
  kFirstBoundaryContact,
  // Run until the event queue drains; on a connected box every site ends up
  // infected. Boundary composition is read off the final state.
  kFillBox,
};

enum class Discipline : std::uint8_t {
  kShared,       // one channel read by both types; only legal at lambda = 1
  kIndependent,  // CH1 for type 1 (rate 1), CH2 for type 2 (rate lambda)
};

enum class InitialKind : std::uint8_t {
  kFinitePair,  // explicit disjoint site sets
  kHyperplane,  // type 1 on {x: x1 = 0} \ {0}, type 2 at the origin
  kHalfLine,    // type 1 on {x: x1 <= 0, x_i = 0 for i >= 2} \ {0}
  kCone,        // type 1 on {x: x1 <= 0, max_i>=2 |x_i| <= alpha*|x1|} \ {0}
  kHalfSpace,   // type 1 on {x: x1 <= 0} \ {0}
};

struct InitialConfiguration {
  InitialKind kind = InitialKind::kFinitePair;
  SiteSet type1;       // kFinitePair only
  SiteSet type2;       // kFinitePair only
  double alpha = 0.0;  // kCone only, >= 0

  static InitialConfiguration finite_pair(SiteSet xi_1, SiteSet xi_2);
  static InitialConfiguration hyperplane();
  static InitialConfiguration half_line();
  static InitialConfiguration cone(double alpha);
  static InitialConfiguration half_space();

  // Truncate to the box and split into (type-1 sites, type-2 sites). Throws
  // InvalidInputError on overlap, emptiness, or sites outside the box.
  std::pair<SiteSet, SiteSet> materialize(const Box& box, int dim) const;
};

struct TwoTypeConfig {
  double lambda = 1.0;  // type 2 rate; type 1 rate is fixed at 1
  InitialConfiguration initial;
  Discipline discipline = Discipline::kIndependent;
  Box box;
  StopRule stop_rule = StopRule::kFillBox;
};

enum class Classification : std::uint8_t {
  kType1Strangled,       // type 1 never reached the boundary and cannot grow
  kType2Strangled,       // ditto for type 2
  kBothReachedBoundary,  // kFirstBoundaryContact runs: both types touched it
  kBoxFilled,            // kFillBox runs with both types on the boundary
};

const char* classification_name(Classification c);

struct Outcome {
  Classification classification = Classification::kBoxFilled;
  // Time at which boundary contact was fully established: the latest of the
  // per-type first contacts, over the types that reached the boundary at all.
  // Absent when neither type ever touched it. For a speed read-out this is
  // the honest quantity — the first contact overall is dominated by the
  // faster type alone and says nothing about whether the slower one keeps up.
  std::optional<double> boundary_hit_time;
  std::optional<double> hit_time1;  // first boundary contact per type
  std::optional<double> hit_time2;
  int first_contact_type = 0;  // type of the earliest contact; 0 if none
  std::int64_t count1 = 0;     // infected sites per type
  std::int64_t count2 = 0;
  std::int64_t boundary_count1 = 0;  // per type, on the box boundary
  std::int64_t boundary_count2 = 0;
  GrowthState state;
};

// One-type first-passage growth from `sources` at the given rate, reading the
// shared channel. Best-first expansion; exact for the minimizing paths. Ties
// broken by (target, source) lexicographically.
GrowthState run_one_type(const PassageField& field, double rate,
                         const SiteSet& sources, const Box& box,
                         StopRule stop_rule);
GrowthState run_one_type(const FieldSpec& spec, double rate,
                         const SiteSet& sources, const Box& box,
                         StopRule stop_rule);

// T(x, y) restricted to paths inside the box, by early-exit expansion from x.
double first_passage_time(const PassageField& field, double rate,
                          const Site& x, const Site& y, const Box& box);
double first_passage_time(const FieldSpec& spec, double rate, const Site& x,
                          const Site& y, const Box& box);

// Competitive growth of two types over one event queue. Equal event times are
// broken by (type 1 before type 2, then target, then source) under the
// independent discipline. Under the shared discipline the order is (target,
// source, type), so that erasing labels reproduces the one-type run exactly,
// parents included; the minimizing initial site under an exact tie is then
// the one reached through the lexicographically smallest infecting neighbor.
Outcome run_two_type(const PassageField& field, const TwoTypeConfig& config);
Outcome run_two_type(const FieldSpec& spec, const TwoTypeConfig& config);

// The tree of infection paths of a single-source one-type run: parent links
// restricted to infected sites. Throws InvalidInputError on multi-source
// states.
struct GeodesicTree {
  Site root;
  Box box;
  std::vector<std::int32_t> parent;  // -1 at the root and on uninfected sites
  std::int64_t edge_count = 0;       // infected sites - 1
};

GeodesicTree geodesic_tree(const GrowthState& state);

// Number of distinct root subtrees containing at least one site with
// L-inf distance exactly `radius` from the root. Bounded by the root degree.
int ends_proxy_count(const GrowthState& state, int radius);

// Presence of each type on the shell {linf(x - center) == radius} where
// center is the box center. Requires the shell to lie inside the state's box.
struct ShellComposition {
  std::int64_t type1 = 0;
  std::int64_t type2 = 0;
};
ShellComposition shell_composition(const GrowthState& state, int radius);

// Count of type-`type` sites per x1-level, indexed from box lo[0].
std::vector<std::int64_t> level_counts(const GrowthState& state, int type);

// Strict projection used by the union-identity check: forget types, keep
// support, times and parents.
struct LabelErasedState {
  std::vector<std::uint8_t> support;
  std::vector<double> infection_time;
  std::vector<std::int32_t> parent;

  bool operator==(const LabelErasedState&) const = default;
};
LabelErasedState erase_labels(const GrowthState& state);

}  // namespace richardson

#endif
