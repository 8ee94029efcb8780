#include "richardson/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace richardson {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Event {
  double t;
  std::int32_t target;
  std::int32_t source;
  std::uint8_t type;
};

// Min-heap order. type_first selects (t, type, target, source); otherwise
// (t, target, source, type). The latter is used whenever both types read one
// shared channel (and for one-type runs), so that the popping order — and
// hence every fixed time and parent — does not depend on the labels at all.
struct EventAfter {
  bool type_first;
  bool operator()(const Event& a, const Event& b) const {
    if (a.t != b.t) return a.t > b.t;
    if (type_first) {
      if (a.type != b.type) return a.type > b.type;
      if (a.target != b.target) return a.target > b.target;
      return a.source > b.source;
    }
    if (a.target != b.target) return a.target > b.target;
    if (a.source != b.source) return a.source > b.source;
    return a.type > b.type;
  }
};

struct TypeChannel {
  Channel ch = Channel::kShared;
  double rate = 1.0;
};

struct RunStats {
  std::optional<double> first_contact_time;
  int first_contact_type = 0;
  std::optional<double> contact_time[3];  // per-type first boundary contact
  bool reached[3] = {false, false, false};
  bool enclosed[3] = {false, false, false};  // no free site borders the type
  std::int64_t count[3] = {0, 0, 0};           // occupied sites per type
  std::int64_t boundary_count[3] = {0, 0, 0};  // occupied boundary sites per type
};

// The single event loop behind every run flavor. `source_sets[i]` holds the
// initial sites of type i+1 (null or empty when the type is absent).
// `internal_target`, when set, stops the run right after that site is fixed
// (early-exit point-to-point queries).
GrowthState run_core(const PassageField& field, const Box& box,
                     const std::array<const SiteSet*, 2>& source_sets,
                     const std::array<TypeChannel, 2>& channels,
                     bool type_first_ties, StopRule stop_rule,
                     std::optional<std::int32_t> internal_target,
                     RunStats* stats_out) {
  const std::int64_t n = box.size();
  if (n > kMaxBoxSites || n > std::numeric_limits<std::int32_t>::max()) {
    throw CapacityError("box of " + std::to_string(n) + " sites exceeds the run capacity");
  }

  GrowthState st;
  st.box = box;
  st.occupancy.assign(static_cast<std::size_t>(n), 0);
  st.infection_time.assign(static_cast<std::size_t>(n), kInf);
  st.parent.assign(static_cast<std::size_t>(n), -1);

  RunStats stats;
  bool present[3] = {false, false, false};

  for (int type = 1; type <= 2; ++type) {
    const SiteSet* set = source_sets[static_cast<std::size_t>(type - 1)];
    if (set == nullptr || set->empty()) continue;
    present[type] = true;
    for (const Site& s : set->sites()) {
      if (!box.contains(s)) {
        throw InvalidInputError("initial site " + format_site(s, box.dim) + " outside the box");
      }
      auto idx = static_cast<std::int32_t>(box.index_of(s));
      if (st.occupancy[static_cast<std::size_t>(idx)] != 0) {
        throw InvalidInputError("initial sets overlap at " + format_site(s, box.dim));
      }
      st.occupancy[static_cast<std::size_t>(idx)] = static_cast<std::uint8_t>(type);
      st.infection_time[static_cast<std::size_t>(idx)] = 0.0;
      st.initial_sites.push_back(idx);
      ++stats.count[type];
      if (box.on_boundary(s)) ++stats.boundary_count[type];
    }
  }
  if (st.initial_sites.empty()) {
    throw InvalidInputError("no initial sites inside the box");
  }
  std::sort(st.initial_sites.begin(), st.initial_sites.end());

  // A source already on the boundary counts as a contact at time zero; pick
  // the reported one consistently with the tie order.
  for (int pass = 0; pass < 2; ++pass) {
    int want = type_first_ties ? pass + 1 : 0;
    for (auto idx : st.initial_sites) {
      int type = st.occupancy[static_cast<std::size_t>(idx)];
      if (want != 0 && type != want) continue;
      if (!box.on_boundary(box.site_at(idx))) continue;
      if (!stats.first_contact_time) {
        stats.first_contact_time = 0.0;
        stats.first_contact_type = type;
      }
      if (!stats.contact_time[type]) stats.contact_time[type] = 0.0;
      stats.reached[type] = true;
    }
    if (!type_first_ties) break;  // one pass in linear-index order suffices
  }

  // pairs[t] = number of adjacent (free site, type-t site) pairs. A present
  // type with pairs == 0 is enclosed: it can never infect again, which both
  // settles its own fate (never reaches) and guarantees the rival reaches
  // (every remaining free component borders the rival only).
  std::int64_t pairs[3] = {0, 0, 0};
  for (auto idx : st.initial_sites) {
    int type = st.occupancy[static_cast<std::size_t>(idx)];
    Site s = box.site_at(idx);
    for (int axis = 0; axis < box.dim; ++axis) {
      for (int delta = -1; delta <= 1; delta += 2) {
        Site ns = shifted(s, axis, delta);
        if (!box.contains(ns)) continue;
        if (st.occupancy[static_cast<std::size_t>(box.index_of(ns))] == 0) ++pairs[type];
      }
    }
  }

  EventAfter after{type_first_ties};
  std::priority_queue<Event, std::vector<Event>, EventAfter> queue(after);

  auto push_from = [&](std::int32_t idx, const Site& s, int type) {
    const TypeChannel& tc = channels[static_cast<std::size_t>(type - 1)];
    double t0 = st.infection_time[static_cast<std::size_t>(idx)];
    for (int axis = 0; axis < box.dim; ++axis) {
      for (int delta = -1; delta <= 1; delta += 2) {
        Site ns = shifted(s, axis, delta);
        if (!box.contains(ns)) continue;
        auto nidx = static_cast<std::int32_t>(box.index_of(ns));
        if (st.occupancy[static_cast<std::size_t>(nidx)] != 0) continue;
        Edge e;
        e.axis = static_cast<std::int8_t>(axis);
        e.base = delta > 0 ? s : ns;
        double dt = field.base_sample(e, tc.ch) / tc.rate;
        queue.push(Event{t0 + dt, nidx, idx, static_cast<std::uint8_t>(type)});
      }
    }
  };

  for (auto idx : st.initial_sites) {
    push_from(idx, box.site_at(idx), st.occupancy[static_cast<std::size_t>(idx)]);
  }

  // The run may stop once the classification is decided: either every present
  // type has touched the boundary, or some present type is enclosed before
  // touching it (which forces the classification to "that type strangled" —
  // the rival then reaches with certainty, so there is nothing left to learn).
  // A type that touched the boundary and is enclosed afterwards decides
  // nothing about the rival, so the run continues to collect the rival's
  // contact time.
  auto fates_decided = [&]() {
    bool all_reached = true;
    for (int type = 1; type <= 2; ++type) {
      if (!present[type]) continue;
      if (!stats.reached[type]) {
        if (pairs[type] == 0) return true;
        all_reached = false;
      }
    }
    return all_reached;
  };

  bool target_done =
      internal_target && st.occupancy[static_cast<std::size_t>(*internal_target)] != 0;

  if (!target_done && !(stop_rule == StopRule::kFirstBoundaryContact && fates_decided())) {
    while (!queue.empty()) {
      Event e = queue.top();
      queue.pop();
      if (st.occupancy[static_cast<std::size_t>(e.target)] == 0) {
        st.occupancy[static_cast<std::size_t>(e.target)] = e.type;
        st.infection_time[static_cast<std::size_t>(e.target)] = e.t;
        st.parent[static_cast<std::size_t>(e.target)] = e.source;
        ++stats.count[e.type];
        Site s = box.site_at(e.target);
        for (int axis = 0; axis < box.dim; ++axis) {
          for (int delta = -1; delta <= 1; delta += 2) {
            Site ns = shifted(s, axis, delta);
            if (!box.contains(ns)) continue;
            auto occ = st.occupancy[static_cast<std::size_t>(box.index_of(ns))];
            if (occ == 0) {
              ++pairs[e.type];  // the new site borders this free site
            } else {
              --pairs[occ];  // the target is no longer free
            }
          }
        }
        if (box.on_boundary(s)) {
          ++stats.boundary_count[e.type];
          if (!stats.first_contact_time) {
            stats.first_contact_time = e.t;
            stats.first_contact_type = e.type;
          }
          if (!stats.contact_time[e.type]) stats.contact_time[e.type] = e.t;
          stats.reached[e.type] = true;
        }
        if (internal_target && e.target == *internal_target) break;
        push_from(e.target, s, e.type);
      }
      if (stop_rule == StopRule::kFirstBoundaryContact && fates_decided()) break;
    }
  }

  for (int type = 1; type <= 2; ++type) {
    stats.enclosed[type] = present[type] && pairs[type] == 0;
  }
  if (stats_out != nullptr) *stats_out = stats;
  return st;
}

std::array<TypeChannel, 2> one_type_channels(double rate) {
  if (!(rate > 0.0)) throw InvalidInputError("growth rate must be > 0");
  return {TypeChannel{Channel::kShared, rate}, TypeChannel{Channel::kShared, rate}};
}

}  // namespace

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::kType1Strangled: return "type1_strangled";
    case Classification::kType2Strangled: return "type2_strangled";
    case Classification::kBothReachedBoundary: return "both_reached_boundary";
    case Classification::kBoxFilled: return "box_filled";
  }
  return "unknown";
}

InitialConfiguration InitialConfiguration::finite_pair(SiteSet xi_1, SiteSet xi_2) {
  InitialConfiguration c;
  c.kind = InitialKind::kFinitePair;
  c.type1 = std::move(xi_1);
  c.type2 = std::move(xi_2);
  return c;
}

InitialConfiguration InitialConfiguration::hyperplane() {
  InitialConfiguration c;
  c.kind = InitialKind::kHyperplane;
  return c;
}

InitialConfiguration InitialConfiguration::half_line() {
  InitialConfiguration c;
  c.kind = InitialKind::kHalfLine;
  return c;
}

InitialConfiguration InitialConfiguration::cone(double alpha) {
  if (!(alpha >= 0.0)) throw InvalidInputError("cone slope must be >= 0");
  InitialConfiguration c;
  c.kind = InitialKind::kCone;
  c.alpha = alpha;
  return c;
}

InitialConfiguration InitialConfiguration::half_space() {
  InitialConfiguration c;
  c.kind = InitialKind::kHalfSpace;
  return c;
}

std::pair<SiteSet, SiteSet> InitialConfiguration::materialize(const Box& box, int dim) const {
  require_dimension(dim);
  if (kind == InitialKind::kFinitePair) {
    if (type1.empty() || type2.empty()) {
      throw InvalidInputError("finite pair needs two non-empty site sets");
    }
    if (!type1.disjoint_from(type2)) {
      throw InvalidInputError("finite pair sets must be disjoint");
    }
    for (const Site& s : type1.sites()) {
      if (!box.contains(s)) throw InvalidInputError("type-1 site outside the box");
    }
    for (const Site& s : type2.sites()) {
      if (!box.contains(s)) throw InvalidInputError("type-2 site outside the box");
    }
    return {type1, type2};
  }

  Site origin{};
  if (!box.contains(origin)) {
    throw InvalidInputError("unbounded initial configurations require the origin in the box");
  }
  std::vector<Site> ones;
  const std::int64_t n = box.size();
  for (std::int64_t i = 0; i < n; ++i) {
    Site s = box.site_at(i);
    if (s == origin) continue;
    auto x1 = s.c[0];
    bool in = false;
    switch (kind) {
      case InitialKind::kHyperplane:
        in = x1 == 0;
        break;
      case InitialKind::kHalfLine:
      case InitialKind::kCone: {
        if (x1 > 0) break;
        std::int32_t lateral = 0;
        for (int i2 = 1; i2 < dim; ++i2) {
          lateral = std::max(lateral, std::abs(s.c[static_cast<std::size_t>(i2)]));
        }
        in = kind == InitialKind::kHalfLine
                 ? lateral == 0
                 : static_cast<double>(lateral) <= alpha * static_cast<double>(-x1);
        break;
      }
      case InitialKind::kHalfSpace:
        in = x1 <= 0;
        break;
      case InitialKind::kFinitePair:
        break;
    }
    if (in) ones.push_back(s);
  }
  if (ones.empty()) {
    throw InvalidInputError("initial configuration is empty inside the box");
  }
  return {SiteSet(std::move(ones)), SiteSet({origin})};
}

GrowthState run_one_type(const PassageField& field, double rate, const SiteSet& sources,
                         const Box& box, StopRule stop_rule) {
  if (sources.empty()) throw InvalidInputError("one-type run needs at least one source");
  return run_core(field, box, {&sources, nullptr}, one_type_channels(rate),
                  /*type_first_ties=*/false, stop_rule, std::nullopt, nullptr);
}

GrowthState run_one_type(const FieldSpec& spec, double rate, const SiteSet& sources,
                         const Box& box, StopRule stop_rule) {
  HashField field(spec);
  return run_one_type(field, rate, sources, box, stop_rule);
}

double first_passage_time(const PassageField& field, double rate, const Site& x,
                          const Site& y, const Box& box) {
  if (!box.contains(x) || !box.contains(y)) {
    throw InvalidInputError("first_passage_time endpoints must lie in the box");
  }
  SiteSet sources({x});
  auto target = static_cast<std::int32_t>(box.index_of(y));
  GrowthState st = run_core(field, box, {&sources, nullptr}, one_type_channels(rate),
                            /*type_first_ties=*/false, StopRule::kFillBox, target, nullptr);
  double t = st.infection_time[static_cast<std::size_t>(target)];
  if (!(t < kInf)) {
    throw std::logic_error("target not reached before queue exhaustion");
  }
  return t;
}

double first_passage_time(const FieldSpec& spec, double rate, const Site& x, const Site& y,
                          const Box& box) {
  HashField field(spec);
  return first_passage_time(field, rate, x, y, box);
}

Outcome run_two_type(const PassageField& field, const TwoTypeConfig& config) {
  if (!(config.lambda > 0.0)) throw InvalidInputError("lambda must be > 0");
  std::array<TypeChannel, 2> channels;
  bool type_first;
  if (config.discipline == Discipline::kShared) {
    if (config.lambda != 1.0) {
      throw InvalidInputError("shared discipline requires lambda = 1");
    }
    channels = {TypeChannel{Channel::kShared, 1.0}, TypeChannel{Channel::kShared, 1.0}};
    type_first = false;
  } else {
    channels = {TypeChannel{Channel::kType1, 1.0}, TypeChannel{Channel::kType2, config.lambda}};
    type_first = true;
  }

  auto [set1, set2] = config.initial.materialize(config.box, config.box.dim);

  RunStats stats;
  Outcome out;
  out.state = run_core(field, config.box, {&set1, &set2}, channels, type_first,
                       config.stop_rule, std::nullopt, &stats);
  out.hit_time1 = stats.contact_time[1];
  out.hit_time2 = stats.contact_time[2];
  out.first_contact_type = stats.first_contact_type;
  // Full contact is established by the later of the two per-type first hits.
  for (int type = 1; type <= 2; ++type) {
    const auto& t = stats.contact_time[type];
    if (t && (!out.boundary_hit_time || *t > *out.boundary_hit_time)) {
      out.boundary_hit_time = *t;
    }
  }

  out.count1 = stats.count[1];
  out.count2 = stats.count[2];
  out.boundary_count1 = stats.boundary_count[1];
  out.boundary_count2 = stats.boundary_count[2];

  if (config.stop_rule == StopRule::kFillBox) {
    if (out.boundary_count1 == 0) {
      out.classification = Classification::kType1Strangled;
    } else if (out.boundary_count2 == 0) {
      out.classification = Classification::kType2Strangled;
    } else {
      out.classification = Classification::kBoxFilled;
    }
  } else {
    // An unreached-but-enclosed type settles the run; both types unreached
    // and enclosed at once is impossible while free sites remain, and a full
    // box means someone holds (and reached) the boundary.
    if (stats.reached[1] && stats.reached[2]) {
      out.classification = Classification::kBothReachedBoundary;
    } else if (!stats.reached[2] && stats.enclosed[2]) {
      out.classification = Classification::kType2Strangled;
    } else if (!stats.reached[1] && stats.enclosed[1]) {
      out.classification = Classification::kType1Strangled;
    } else {
      // Queue exhausted with exactly one type short of the boundary: only
      // possible when that type is enclosed, handled above. Defensive:
      out.classification = stats.reached[1] ? Classification::kType2Strangled
                                            : Classification::kType1Strangled;
    }
  }
  return out;
}

Outcome run_two_type(const FieldSpec& spec, const TwoTypeConfig& config) {
  if (config.discipline == Discipline::kShared && spec.mode != ChannelMode::kShared) {
    throw InvalidInputError("shared discipline requires a shared-channel field spec");
  }
  if (config.discipline == Discipline::kIndependent && spec.mode != ChannelMode::kIndependent) {
    throw InvalidInputError("independent discipline requires a two-channel field spec");
  }
  HashField field(spec);
  return run_two_type(field, config);
}

GeodesicTree geodesic_tree(const GrowthState& state) {
  if (state.initial_sites.size() != 1) {
    throw InvalidInputError("geodesic tree requires a single-source run");
  }
  GeodesicTree tree;
  tree.root = state.box.site_at(state.initial_sites[0]);
  tree.box = state.box;
  tree.parent = state.parent;
  std::int64_t infected = 0;
  for (auto occ : state.occupancy) infected += occ != 0;
  tree.edge_count = infected - 1;
  return tree;
}

int ends_proxy_count(const GrowthState& state, int radius) {
  if (state.initial_sites.size() != 1) {
    throw InvalidInputError("ends proxy requires a single-source run");
  }
  if (radius < 1) throw InvalidInputError("ends proxy radius must be >= 1");
  const Box& box = state.box;
  const std::int32_t root = state.initial_sites[0];
  Site root_site = box.site_at(root);

  // label[idx] = the child-of-root ancestor of idx (as a linear index), with
  // memoization along the walked chains.
  std::vector<std::int32_t> label(state.occupancy.size(), -1);
  std::vector<std::int32_t> chain;
  auto subtree_of = [&](std::int32_t idx) {
    chain.clear();
    std::int32_t cur = idx;
    while (label[static_cast<std::size_t>(cur)] == -1) {
      std::int32_t p = state.parent[static_cast<std::size_t>(cur)];
      if (p == -1) break;  // cur is a child of nothing => reached the root
      chain.push_back(cur);
      if (p == root) {
        label[static_cast<std::size_t>(cur)] = cur;
        break;
      }
      cur = p;
    }
    std::int32_t l = label[static_cast<std::size_t>(cur)];
    for (auto c : chain) label[static_cast<std::size_t>(c)] = l;
    return l;
  };

  std::vector<std::int32_t> seen;
  const std::int64_t n = state.size();
  for (std::int64_t i = 0; i < n; ++i) {
    if (state.occupancy[static_cast<std::size_t>(i)] == 0) continue;
    Site s = box.site_at(i);
    if (linf_distance(s, root_site, box.dim) != radius) continue;
    std::int32_t l = subtree_of(static_cast<std::int32_t>(i));
    if (l != -1 && std::find(seen.begin(), seen.end(), l) == seen.end()) {
      seen.push_back(l);
    }
  }
  return static_cast<int>(seen.size());
}

ShellComposition shell_composition(const GrowthState& state, int radius) {
  const Box& box = state.box;
  Site center{};
  for (int i = 0; i < box.dim; ++i) {
    auto span = box.hi[static_cast<std::size_t>(i)] - box.lo[static_cast<std::size_t>(i)];
    if (span % 2 != 0) {
      throw InvalidInputError("shell composition requires a box with a central site");
    }
    center.c[static_cast<std::size_t>(i)] = box.lo[static_cast<std::size_t>(i)] + span / 2;
  }
  for (int i = 0; i < box.dim; ++i) {
    if (center.c[static_cast<std::size_t>(i)] - radius < box.lo[static_cast<std::size_t>(i)] ||
        center.c[static_cast<std::size_t>(i)] + radius > box.hi[static_cast<std::size_t>(i)]) {
      throw InvalidInputError("shell radius exceeds the box");
    }
  }

  ShellComposition comp;
  // Enumerate the shell face by face: the face along (axis, sign) claims the
  // sites whose first axis at full offset |radius| is `axis`.
  for (int axis = 0; axis < box.dim; ++axis) {
    for (int sign = -1; sign <= 1; sign += 2) {
      Site s = center;
      s.c[static_cast<std::size_t>(axis)] =
          center.c[static_cast<std::size_t>(axis)] + sign * radius;
      // Iterate the remaining coordinates odometer-style from -radius up.
      std::array<std::int32_t, kMaxDim> off{};
      for (int i = 0; i < box.dim; ++i) {
        if (i != axis) off[static_cast<std::size_t>(i)] = -radius;
      }
      bool done = false;
      while (!done) {
        bool claimed_earlier = false;
        for (int i = 0; i < axis; ++i) {
          if (std::abs(off[static_cast<std::size_t>(i)]) == radius) {
            claimed_earlier = true;
            break;
          }
        }
        if (!claimed_earlier) {
          Site t = s;
          for (int i = 0; i < box.dim; ++i) {
            if (i == axis) continue;
            t.c[static_cast<std::size_t>(i)] =
                center.c[static_cast<std::size_t>(i)] + off[static_cast<std::size_t>(i)];
          }
          auto occ = state.occupancy[static_cast<std::size_t>(box.index_of(t))];
          if (occ == 1) ++comp.type1;
          if (occ == 2) ++comp.type2;
        }
        done = true;
        for (int i = 0; i < box.dim; ++i) {
          if (i == axis) continue;
          auto& o = off[static_cast<std::size_t>(i)];
          if (o < radius) {
            ++o;
            done = false;
            break;
          }
          o = -radius;
        }
      }
    }
  }
  return comp;
}

std::vector<std::int64_t> level_counts(const GrowthState& state, int type) {
  const Box& box = state.box;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(box.extent(0)), 0);
  std::int64_t stride0 = 1;
  for (int i = 1; i < box.dim; ++i) stride0 *= box.extent(i);
  const std::int64_t n = state.size();
  for (std::int64_t i = 0; i < n; ++i) {
    if (state.occupancy[static_cast<std::size_t>(i)] == static_cast<std::uint8_t>(type)) {
      ++counts[static_cast<std::size_t>(i / stride0)];
    }
  }
  return counts;
}

LabelErasedState erase_labels(const GrowthState& state) {
  LabelErasedState e;
  e.support.reserve(state.occupancy.size());
  for (auto occ : state.occupancy) e.support.push_back(occ != 0 ? 1 : 0);
  e.infection_time = state.infection_time;
  e.parent = state.parent;
  return e;
}

}  // namespace richardson
