#include "richardson/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "richardson/util.hpp"

namespace richardson {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

Site axis_site(int n) {
  Site s{};
  s.c[0] = n;
  return s;
}

FieldSpec replica_spec(std::uint64_t master, std::int64_t replica, int dim, ChannelMode mode) {
  return FieldSpec{derive_seed(master, static_cast<std::uint64_t>(replica)), dim, mode};
}

void require_positive_replicas(int replicas) {
  if (replicas < 1) throw InvalidInputError("replicas must be >= 1");
}

// Deterministic auxiliary stream for sampling triples; unrelated to the edge
// field because the chain is keyed differently.
struct HashStream {
  std::uint64_t state;
  std::uint64_t next() {
    state += kGolden;
    return mix64(state ^ 0x5ca1ab1edeadbeefULL);
  }
};

}  // namespace

// ------------------------------------------------------------------ time const

TimeConstantResult estimate_time_constant(const TimeConstantParams& params) {
  require_dimension(params.dim);
  require_positive_replicas(params.replicas);
  if (!(params.lambda > 0.0)) throw InvalidInputError("lambda must be > 0");
  if (params.distances.empty()) throw InvalidInputError("need at least one distance");
  for (int n : params.distances) {
    if (n < 1) throw InvalidInputError("distances must be >= 1");
  }
  int max_n = *std::max_element(params.distances.begin(), params.distances.end());

  TimeConstantResult res;
  res.params = params;
  int margin = params.margin >= 0 ? params.margin : max_n / 2;
  res.margin_warning = margin < max_n / 2;
  res.box_radius = max_n + margin;
  Box box = Box::cube(Site{}, res.box_radius, params.dim);

  std::vector<std::vector<double>> times(params.distances.size());
  for (auto& v : times) v.assign(static_cast<std::size_t>(params.replicas), 0.0);

  SiteSet origin({Site{}});
  parallel_for_replicas(params.replicas, params.workers, [&](std::int64_t r) {
    GrowthState st = run_one_type(replica_spec(params.seed, r, params.dim, ChannelMode::kShared),
                                  params.lambda, origin, box, StopRule::kFillBox);
    for (std::size_t i = 0; i < params.distances.size(); ++i) {
      auto idx = box.index_of(axis_site(params.distances[i]));
      times[i][static_cast<std::size_t>(r)] = st.infection_time[static_cast<std::size_t>(idx)];
    }
  });

  for (std::size_t i = 0; i < params.distances.size(); ++i) {
    TimeConstantEstimate est;
    est.n = params.distances[i];
    est.times = times[i];
    std::vector<double> scaled(est.times.size());
    for (std::size_t r = 0; r < est.times.size(); ++r) {
      scaled[r] = est.times[r] / est.n;
    }
    est.t_over_n = mean_ci(scaled);
    res.estimates.push_back(std::move(est));
  }
  return res;
}

// ------------------------------------------------------------------- increments

GmResult gm_increments(const GmParams& params) {
  require_dimension(params.dim);
  require_positive_replicas(params.replicas);
  if (params.n < 1 || params.k_max < 0 || params.m < 1) {
    throw InvalidInputError("gm_increments needs n >= 1, k_max >= 0, m >= 1");
  }
  int front_target = (params.k_max + 1) * params.n;
  int pad = params.pad >= 0 ? params.pad : params.n;
  int lateral = params.lateral >= 0 ? params.lateral
                                    : std::max(front_target, params.m) / 2 + params.n;

  GmResult res;
  res.params = params;
  res.box = Box::slab(params.m + pad, front_target + pad, lateral, params.dim);

  const int k_count = params.k_max + 2;  // targets n, 2n, ..., (k_max+1)n
  const std::size_t cols = static_cast<std::size_t>(k_count - 1) + 3;
  res.rows.assign(static_cast<std::size_t>(params.replicas), std::vector<double>(cols, 0.0));

  SiteSet origin({Site{}});
  SiteSet at_n({axis_site(params.n)});
  parallel_for_replicas(params.replicas, params.workers, [&](std::int64_t r) {
    FieldSpec spec = replica_spec(params.seed, r, params.dim, ChannelMode::kShared);
    HashField field(spec);
    GrowthState from0 = run_one_type(field, 1.0, origin, res.box, StopRule::kFillBox);
    GrowthState fromn = run_one_type(field, 1.0, at_n, res.box, StopRule::kFillBox);
    auto& row = res.rows[static_cast<std::size_t>(r)];
    for (int k = 1; k <= params.k_max + 1; ++k) {
      row[static_cast<std::size_t>(k - 1)] =
          from0.infection_time[static_cast<std::size_t>(res.box.index_of(axis_site(k * params.n)))];
    }
    row[cols - 3] =
        from0.infection_time[static_cast<std::size_t>(res.box.index_of(axis_site(-params.m)))];
    row[cols - 2] =
        fromn.infection_time[static_cast<std::size_t>(res.box.index_of(axis_site(-params.m)))];
    row[cols - 1] =
        fromn.infection_time[static_cast<std::size_t>(res.box.index_of(Site{}))];
  });

  std::vector<std::vector<double>> inc(static_cast<std::size_t>(params.k_max + 1));
  std::vector<double> gm(static_cast<std::size_t>(params.replicas));
  std::vector<double> tn(static_cast<std::size_t>(params.replicas));
  for (int r = 0; r < params.replicas; ++r) {
    const auto& row = res.rows[static_cast<std::size_t>(r)];
    double prev = 0.0;
    double telescoped = 0.0;
    for (int k = 0; k <= params.k_max; ++k) {
      double cur = row[static_cast<std::size_t>(k)];
      inc[static_cast<std::size_t>(k)].push_back(cur - prev);
      telescoped += cur - prev;
      prev = cur;
    }
    // The partial sums and differences are all exact on the sample grid, so
    // telescoping must close bit-exactly.
    if (telescoped != row[static_cast<std::size_t>(params.k_max)]) {
      ++res.telescoping_violations;
    }
    double t0m = row[cols - 3];
    double tnm = row[cols - 2];
    double tn0 = row[cols - 1];
    if (tnm - t0m > tn0) ++res.triangle_violations;
    gm[static_cast<std::size_t>(r)] = tnm - t0m;
    tn[static_cast<std::size_t>(r)] = tn0;
  }
  for (auto& v : inc) res.increments.push_back(mean_ci(v));
  res.gm_increment = mean_ci(gm);
  res.t_n = mean_ci(tn);
  return res;
}

// ------------------------------------------------------------------------ shape

std::vector<std::array<double, kMaxDim>> shape_directions(int dim, int direction_count) {
  require_dimension(dim);
  std::vector<std::array<double, kMaxDim>> dirs;
  if (dim == 2) {
    if (direction_count < 8 || direction_count % 8 != 0) {
      throw InvalidInputError("direction count must be a positive multiple of 8");
    }
    // Build the first octant once and reflect, so targets in one symmetry
    // orbit are exact mirror images of each other.
    int per_octant = direction_count / 8;
    for (int k = 0; k <= per_octant; ++k) {
      double theta = (M_PI / 4.0) * k / per_octant;
      double x = std::cos(theta);
      double y = std::sin(theta);
      bool on_diagonal = k == per_octant;
      std::vector<std::pair<double, double>> images;
      images.emplace_back(x, y);
      if (!on_diagonal) images.emplace_back(y, x);
      for (std::size_t i = images.size(); i-- > 0;) {
        auto [a, b] = images[i];
        images.emplace_back(-a, b);
        images.emplace_back(a, -b);
        images.emplace_back(-a, -b);
      }
      for (auto [a, b] : images) {
        std::array<double, kMaxDim> u{};
        u[0] = a + 0.0;  // flush -0.0 so printed directions are tidy
        u[1] = b + 0.0;
        if (std::find(dirs.begin(), dirs.end(), u) == dirs.end()) dirs.push_back(u);
      }
    }
    return dirs;
  }

  // d >= 3: axes, two-axis diagonals, and the full diagonal, with all signs.
  for (int a = 0; a < dim; ++a) {
    for (int s = -1; s <= 1; s += 2) {
      std::array<double, kMaxDim> u{};
      u[static_cast<std::size_t>(a)] = s;
      dirs.push_back(u);
    }
  }
  double r2 = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < dim; ++a) {
    for (int b = a + 1; b < dim; ++b) {
      for (int sa = -1; sa <= 1; sa += 2) {
        for (int sb = -1; sb <= 1; sb += 2) {
          std::array<double, kMaxDim> u{};
          u[static_cast<std::size_t>(a)] = sa * r2;
          u[static_cast<std::size_t>(b)] = sb * r2;
          dirs.push_back(u);
        }
      }
    }
  }
  double rd = 1.0 / std::sqrt(static_cast<double>(dim));
  int combos = 1 << dim;
  for (int mask = 0; mask < combos; ++mask) {
    std::array<double, kMaxDim> u{};
    for (int a = 0; a < dim; ++a) {
      u[static_cast<std::size_t>(a)] = (mask >> a) & 1 ? rd : -rd;
    }
    dirs.push_back(u);
  }
  return dirs;
}

namespace {

Site direction_target(const std::array<double, kMaxDim>& u, int radius, int dim) {
  Site t{};
  for (int i = 0; i < dim; ++i) {
    t.c[static_cast<std::size_t>(i)] =
        static_cast<std::int32_t>(std::lround(radius * u[static_cast<std::size_t>(i)]));
  }
  return t;
}

double euclid_norm(const Site& s, int dim) {
  double sum = 0.0;
  for (int i = 0; i < dim; ++i) {
    double v = s.c[static_cast<std::size_t>(i)];
    sum += v * v;
  }
  return std::sqrt(sum);
}

// Radial extent of the polygon hull along direction u (2-d helper).
double hull_radius_along(const std::vector<std::pair<double, double>>& hull, double ux,
                         double uy) {
  double best = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    auto [ax, ay] = hull[i];
    auto [bx, by] = hull[(i + 1) % hull.size()];
    double dx = bx - ax;
    double dy = by - ay;
    double denom = dx * uy - dy * ux;
    if (denom == 0.0) continue;  // ray parallel to the edge
    double s = (ax * uy - ay * ux) / -denom;
    if (s < 0.0 || s > 1.0) continue;
    double px = ax + s * dx;
    double py = ay + s * dy;
    double t = std::abs(ux) >= std::abs(uy) ? px / ux : py / uy;
    if (t > best) best = t;
  }
  return best;
}

std::vector<std::pair<double, double>> convex_hull(std::vector<std::pair<double, double>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](const std::pair<double, double>& o, const std::pair<double, double>& a,
                  const std::pair<double, double>& b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
  };
  std::vector<std::pair<double, double>> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

// Max relative inward deviation of the sampled points from their own hull.
double polygon_convexity_defect(const std::vector<std::pair<double, double>>& points) {
  auto hull = convex_hull(points);
  if (hull.size() < 3) return 0.0;
  double defect = 0.0;
  for (auto [x, y] : points) {
    double r = std::sqrt(x * x + y * y);
    if (r == 0.0) continue;
    double rh = hull_radius_along(hull, x / r, y / r);
    if (rh > r) defect = std::max(defect, (rh - r) / rh);
  }
  return defect;
}

}  // namespace

ShapeEstimate estimate_shape(const ShapeParams& params) {
  require_dimension(params.dim);
  require_positive_replicas(params.replicas);
  if (!(params.lambda > 0.0)) throw InvalidInputError("lambda must be > 0");
  if (params.radius < 2) throw InvalidInputError("shape radius must be >= 2");

  ShapeEstimate res;
  res.params = params;
  res.box_radius =
      params.radius + static_cast<int>(std::ceil(params.radius * params.margin_factor));
  Box box = Box::cube(Site{}, res.box_radius, params.dim);

  auto dirs = shape_directions(params.dim, params.direction_count);
  const std::size_t nd = dirs.size();

  // Orbit ids from the multiset of |target coordinates|.
  std::vector<Site> targets(nd);
  std::vector<int> orbit(nd, 0);
  std::map<std::array<std::int32_t, kMaxDim>, int> orbit_ids;
  for (std::size_t i = 0; i < nd; ++i) {
    targets[i] = direction_target(dirs[i], params.radius, params.dim);
    std::array<std::int32_t, kMaxDim> key{};
    for (int a = 0; a < params.dim; ++a) {
      key[static_cast<std::size_t>(a)] = std::abs(targets[i].c[static_cast<std::size_t>(a)]);
    }
    std::sort(key.begin(), key.begin() + params.dim);
    auto [it, inserted] = orbit_ids.emplace(key, static_cast<int>(orbit_ids.size()));
    (void)inserted;
    orbit[i] = it->second;
  }

  res.rows.assign(static_cast<std::size_t>(params.replicas), std::vector<double>(nd, 0.0));
  SiteSet origin({Site{}});
  parallel_for_replicas(params.replicas, params.workers, [&](std::int64_t r) {
    GrowthState st = run_one_type(replica_spec(params.seed, r, params.dim, ChannelMode::kShared),
                                  params.lambda, origin, box, StopRule::kFillBox);
    auto& row = res.rows[static_cast<std::size_t>(r)];
    for (std::size_t i = 0; i < nd; ++i) {
      double t = st.infection_time[static_cast<std::size_t>(box.index_of(targets[i]))];
      row[i] = euclid_norm(targets[i], params.dim) / t;
    }
  });

  std::vector<double> sample(static_cast<std::size_t>(params.replicas));
  for (std::size_t i = 0; i < nd; ++i) {
    for (int r = 0; r < params.replicas; ++r) {
      sample[static_cast<std::size_t>(r)] = res.rows[static_cast<std::size_t>(r)][i];
    }
    DirectionSpeed ds;
    ds.u = dirs[i];
    ds.target = targets[i];
    ds.orbit = orbit[i];
    ds.speed = mean_ci(sample);
    res.directions.push_back(ds);
  }

  // Axis speed: mean over the orbit of the e1 target.
  {
    double sum = 0.0;
    int count = 0;
    int axis_orbit = orbit[0];  // first octant construction starts at e1
    for (std::size_t i = 0; i < nd; ++i) {
      if (orbit[i] == axis_orbit) {
        sum += res.directions[i].speed.mean;
        ++count;
      }
    }
    res.axis_speed = sum / count;
  }

  // Symmetry: pairwise standardized differences inside each orbit, with a
  // Bonferroni family bound at the 95% level. Shared replicas make the pairs
  // positively correlated, so the unpaired variance is conservative.
  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < nd; ++i) members[orbit[i]].push_back(i);
  std::int64_t pair_count = 0;
  for (const auto& [id, m] : members) {
    (void)id;
    pair_count += static_cast<std::int64_t>(m.size() * (m.size() - 1) / 2);
  }
  for (const auto& [id, m] : members) {
    (void)id;
    if (m.size() < 2) continue;
    double lo = res.directions[m[0]].speed.mean;
    double hi = lo;
    double sum = 0.0;
    for (auto i : m) {
      double v = res.directions[i].speed.mean;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    res.symmetry_defect = std::max(res.symmetry_defect, (hi - lo) / (sum / m.size()));
    for (std::size_t a = 0; a < m.size(); ++a) {
      for (std::size_t b = a + 1; b < m.size(); ++b) {
        const auto& sa = res.directions[m[a]].speed;
        const auto& sb = res.directions[m[b]].speed;
        double se = std::sqrt(sa.std_error * sa.std_error + sb.std_error * sb.std_error);
        if (se > 0.0) {
          res.symmetry_max_z = std::max(res.symmetry_max_z, std::abs(sa.mean - sb.mean) / se);
        }
      }
    }
  }
  res.symmetry_z_threshold =
      pair_count > 0 ? normal_quantile(1.0 - 0.025 / static_cast<double>(pair_count)) : 0.0;
  res.symmetry_consistent = res.symmetry_max_z <= res.symmetry_z_threshold;

  // Convexity of the speed body: exact polygon test in d = 2; coordinate
  // plane slices for d >= 3 (only directions supported on the two axes).
  if (params.dim == 2) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& ds : res.directions) {
      pts.emplace_back(ds.speed.mean * ds.u[0], ds.speed.mean * ds.u[1]);
    }
    res.convexity_defect = polygon_convexity_defect(pts);
  } else {
    for (int a = 0; a < params.dim; ++a) {
      for (int b = a + 1; b < params.dim; ++b) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& ds : res.directions) {
          bool in_plane = true;
          for (int c = 0; c < params.dim; ++c) {
            if (c != a && c != b && ds.u[static_cast<std::size_t>(c)] != 0.0) {
              in_plane = false;
              break;
            }
          }
          if (in_plane) {
            pts.emplace_back(ds.speed.mean * ds.u[static_cast<std::size_t>(a)],
                             ds.speed.mean * ds.u[static_cast<std::size_t>(b)]);
          }
        }
        res.convexity_defect = std::max(res.convexity_defect, polygon_convexity_defect(pts));
      }
    }
  }
  return res;
}

// ------------------------------------------------------------------------- ends

EndsResult ends_proxy_scan(const EndsParams& params) {
  require_dimension(params.dim);
  require_positive_replicas(params.replicas);
  if (params.radii.empty()) throw InvalidInputError("need at least one radius");
  for (int r : params.radii) {
    if (r < 1) throw InvalidInputError("radii must be >= 1");
  }

  EndsResult res;
  res.params = params;
  res.rows.assign(static_cast<std::size_t>(params.replicas),
                  std::vector<double>(params.radii.size() + 1, 0.0));

  SiteSet origin({Site{}});
  parallel_for_replicas(params.replicas, params.workers, [&](std::int64_t rep) {
    auto& row = res.rows[static_cast<std::size_t>(rep)];
    row[0] = static_cast<double>(rep);
    for (std::size_t i = 0; i < params.radii.size(); ++i) {
      Box box = Box::cube(Site{}, params.radii[i], params.dim);
      // Decorrelate radii within a replica by folding the radius index into
      // the derived seed stream.
      std::uint64_t sub = derive_seed(params.seed, static_cast<std::uint64_t>(rep));
      sub = derive_seed(sub, static_cast<std::uint64_t>(i));
      GrowthState st = run_one_type(FieldSpec{sub, params.dim, ChannelMode::kShared},
                                    params.lambda, origin, box, StopRule::kFillBox);
      row[i + 1] = ends_proxy_count(st, params.radii[i]);
    }
  });

  for (std::size_t i = 0; i < params.radii.size(); ++i) {
    EndsPerRadius pr;
    pr.radius = params.radii[i];
    pr.histogram.assign(static_cast<std::size_t>(2 * params.dim + 1), 0);
    std::int64_t ge2 = 0;
    for (int rep = 0; rep < params.replicas; ++rep) {
      int count = static_cast<int>(res.rows[static_cast<std::size_t>(rep)][i + 1]);
      pr.histogram[static_cast<std::size_t>(count)] += 1;
      ge2 += count >= 2;
    }
    pr.fraction_ge2 = proportion_ci(ge2, params.replicas);
    res.per_radius.push_back(std::move(pr));
  }
  return res;
}

// --------------------------------------------------------------- weak-type speed

WeakSpeedResult weak_type_speed_diagnostic(const WeakSpeedParams& params) {
  require_dimension(params.dim);
  require_positive_replicas(params.replicas);
  if (!(params.lambda > 0.0)) throw InvalidInputError("lambda must be > 0");
  if (!(params.v1_hat > 0.0)) {
    throw InvalidInputError("v1_hat (axis speed of the rate-1 process) must be > 0");
  }
  if (params.radius < 2) throw InvalidInputError("radius must be >= 2");

  WeakSpeedResult res;
  res.params = params;
  res.rows.assign(static_cast<std::size_t>(params.replicas), std::vector<double>(4, 0.0));

  TwoTypeConfig config;
  config.lambda = params.lambda;
  config.initial = InitialConfiguration::finite_pair(SiteSet({Site{}}), SiteSet({axis_site(1)}));
  config.discipline = Discipline::kIndependent;
  config.box = Box::cube(Site{}, params.radius, params.dim);
  config.stop_rule = StopRule::kFirstBoundaryContact;

  parallel_for_replicas(params.replicas, params.workers, [&](std::int64_t r) {
    Outcome out = run_two_type(replica_spec(params.seed, r, params.dim, ChannelMode::kIndependent),
                               config);
    double hit = out.boundary_hit_time ? *out.boundary_hit_time : -1.0;
    double ratio = hit >= 0.0 ? hit * params.lambda * params.v1_hat / params.radius : -1.0;
    auto& row = res.rows[static_cast<std::size_t>(r)];
    row[0] = static_cast<double>(r);
    row[1] = static_cast<double>(out.classification);
    row[2] = hit;
    row[3] = ratio;
  });

  std::vector<double> both;
  std::vector<double> g2;
  for (const auto& row : res.rows) {
    auto cls = static_cast<Classification>(static_cast<int>(row[1]));
    if (cls == Classification::kBothReachedBoundary) both.push_back(row[3]);
    // Type-1-strangled runs stop at the enclosure, which may precede the
    // weak type's boundary contact; only rows with an observed hit time can
    // contribute a ratio.
    if (row[2] >= 0.0 &&
        (cls == Classification::kBothReachedBoundary || cls == Classification::kType1Strangled)) {
      g2.push_back(row[3]);
    }
  }
  res.events_both = static_cast<std::int64_t>(both.size());
  res.events_type2_reached = static_cast<std::int64_t>(g2.size());
  if (!both.empty()) res.ratio_both = mean_ci(both);
  if (!g2.empty()) res.ratio_type2_reached = mean_ci(g2);
  res.low_confidence = res.events_both < 50;
  return res;
}

// --------------------------------------------------------------- strong fraction

StrongFractionResult strong_fraction_diagnostic(const StrongFractionParams& params) {
  require_dimension(params.dim);
  require_positive_replicas(params.replicas);
  if (!(params.lambda > 0.0)) throw InvalidInputError("lambda must be > 0");
  if (params.radii.empty()) throw InvalidInputError("need at least one radius");

  StrongFractionResult res;
  res.params = params;
  res.strong_type = params.lambda >= 1.0 ? 2 : 1;
  res.rows.assign(static_cast<std::size_t>(params.replicas) * params.radii.size(),
                  std::vector<double>(4, 0.0));

  parallel_for_replicas(params.replicas, params.workers, [&](std::int64_t r) {
    for (std::size_t i = 0; i < params.radii.size(); ++i) {
      TwoTypeConfig config;
      config.lambda = params.lambda;
      config.initial =
          InitialConfiguration::finite_pair(SiteSet({Site{}}), SiteSet({axis_site(1)}));
      config.discipline = Discipline::kIndependent;
      config.box = Box::cube(Site{}, params.radii[i], params.dim);
      config.stop_rule = StopRule::kFillBox;
      std::uint64_t sub = derive_seed(params.seed, static_cast<std::uint64_t>(r));
      sub = derive_seed(sub, static_cast<std::uint64_t>(i));
      Outcome out = run_two_type(FieldSpec{sub, params.dim, ChannelMode::kIndependent}, config);
      double strong =
          res.strong_type == 2 ? static_cast<double>(out.count2) : static_cast<double>(out.count1);
      double fraction = strong / static_cast<double>(out.count1 + out.count2);
      auto& row = res.rows[static_cast<std::size_t>(r) * params.radii.size() + i];
      row[0] = static_cast<double>(r);
      row[1] = static_cast<double>(params.radii[i]);
      row[2] = out.classification == Classification::kBoxFilled ? 1.0 : 0.0;
      row[3] = fraction;
    }
  });

  for (std::size_t i = 0; i < params.radii.size(); ++i) {
    StrongFractionPerRadius pr;
    pr.radius = params.radii[i];
    std::vector<double> conditioned;
    for (int r = 0; r < params.replicas; ++r) {
      const auto& row = res.rows[static_cast<std::size_t>(r) * params.radii.size() + i];
      if (row[2] == 1.0) conditioned.push_back(row[3]);
    }
    pr.conditioning_events = static_cast<std::int64_t>(conditioned.size());
    if (!conditioned.empty()) pr.strong_fraction = mean_ci(conditioned);
    pr.low_confidence = pr.conditioning_events < 50;
    res.per_radius.push_back(std::move(pr));
  }
  return res;
}

// --------------------------------------------------------------- level occupancy

LevelOccupancyResult level_occupancy(const LevelOccupancyParams& params) {
  require_dimension(params.dim);
  require_positive_replicas(params.replicas);
  if (!(params.lambda > 0.0)) throw InvalidInputError("lambda must be > 0");
  if (params.initial == InitialKind::kFinitePair) {
    throw InvalidInputError("level occupancy needs an unbounded initial configuration");
  }
  if (params.width < 1 || params.depth < 1) {
    throw InvalidInputError("width and depth must be >= 1");
  }

  LevelOccupancyResult res;
  res.params = params;
  int back = params.back >= 0
                 ? params.back
                 : (params.initial == InitialKind::kHyperplane ? 0 : params.width);
  if (params.initial != InitialKind::kHyperplane && back < 1) {
    throw InvalidInputError("this initial configuration needs back >= 1");
  }
  res.box = Box::slab(back, params.depth, params.width, params.dim);

  InitialConfiguration init;
  init.kind = params.initial;
  init.alpha = params.alpha;
  if (params.initial == InitialKind::kCone && !(params.alpha >= 0.0)) {
    throw InvalidInputError("cone slope must be >= 0");
  }
  // Materialize once; the truncated set is the same for every replica.
  auto [set1, set2] = init.materialize(res.box, params.dim);

  TwoTypeConfig config;
  config.lambda = params.lambda;
  config.initial = InitialConfiguration::finite_pair(set1, set2);
  config.discipline = Discipline::kIndependent;
  config.box = res.box;
  config.stop_rule = StopRule::kFillBox;

  const std::size_t levels = static_cast<std::size_t>(params.depth) + 1;
  res.rows.assign(static_cast<std::size_t>(params.replicas),
                  std::vector<double>(levels + 1, 0.0));
  parallel_for_replicas(params.replicas, params.workers, [&](std::int64_t r) {
    Outcome out = run_two_type(replica_spec(params.seed, r, params.dim, ChannelMode::kIndependent),
                               config);
    auto counts = level_counts(out.state, 2);
    auto& row = res.rows[static_cast<std::size_t>(r)];
    row[0] = static_cast<double>(r);
    for (std::size_t l = 0; l < levels; ++l) {
      row[l + 1] = static_cast<double>(counts[static_cast<std::size_t>(back) + l]);
    }
  });

  std::vector<double> col(static_cast<std::size_t>(params.replicas));
  for (std::size_t l = 0; l < levels; ++l) {
    std::int64_t survived = 0;
    for (int r = 0; r < params.replicas; ++r) {
      col[static_cast<std::size_t>(r)] = res.rows[static_cast<std::size_t>(r)][l + 1];
      survived += col[static_cast<std::size_t>(r)] > 0.0;
    }
    res.mean_count.push_back(mean_ci(col));
    res.survival.push_back(proportion_ci(survived, params.replicas));
  }
  return res;
}

// ---------------------------------------------------------------- subadditivity

SubadditivityResult subadditivity_check(const SubadditivityParams& params) {
  require_dimension(params.dim);
  if (params.seeds < 1 || params.triples_per_seed < 1 || params.source_pool < 2) {
    throw InvalidInputError("subadditivity check needs seeds, triples and a pool >= 2");
  }
  if (params.radius < 4) throw InvalidInputError("radius must be >= 4");
  if (!(params.lambda > 0.0)) throw InvalidInputError("lambda must be > 0");

  Box box = Box::cube(Site{}, params.radius, params.dim);
  Box core = Box::cube(Site{}, params.radius / 2, params.dim);
  const std::int64_t core_size = core.size();

  SubadditivityResult res;
  res.params = params;

  std::vector<std::int64_t> violations(static_cast<std::size_t>(params.seeds), 0);
  std::vector<std::int64_t> checked(static_cast<std::size_t>(params.seeds), 0);
  std::vector<double> worst(static_cast<std::size_t>(params.seeds), 0.0);

  parallel_for_replicas(params.seeds, params.workers, [&](std::int64_t s) {
    FieldSpec spec = replica_spec(params.seed, s, params.dim, ChannelMode::kShared);
    HashField field(spec);
    HashStream stream{spec.master_seed};

    // Distinct source pool inside the half-radius core.
    std::vector<std::int64_t> pool;
    while (static_cast<int>(pool.size()) < params.source_pool) {
      auto idx = static_cast<std::int64_t>(stream.next() % static_cast<std::uint64_t>(core_size));
      if (std::find(pool.begin(), pool.end(), idx) == pool.end()) pool.push_back(idx);
    }

    std::vector<std::vector<double>> times;
    times.reserve(pool.size());
    for (auto idx : pool) {
      SiteSet src({core.site_at(idx)});
      GrowthState st = run_one_type(field, params.lambda, src, box, StopRule::kFillBox);
      times.push_back(std::move(st.infection_time));
    }

    for (int t = 0; t < params.triples_per_seed; ++t) {
      auto xi = static_cast<std::size_t>(stream.next() % pool.size());
      auto zi = static_cast<std::size_t>(stream.next() % pool.size());
      auto yidx = static_cast<std::int64_t>(stream.next() % static_cast<std::uint64_t>(core_size));
      Site y = core.site_at(yidx);
      Site z = core.site_at(pool[zi]);
      auto ybox = static_cast<std::size_t>(box.index_of(y));
      auto zbox = static_cast<std::size_t>(box.index_of(z));
      double t_xy = times[xi][ybox];
      double t_xz = times[xi][zbox];
      double t_zy = times[zi][ybox];
      ++checked[static_cast<std::size_t>(s)];
      if (t_xy > t_xz + t_zy) {
        ++violations[static_cast<std::size_t>(s)];
        worst[static_cast<std::size_t>(s)] =
            std::max(worst[static_cast<std::size_t>(s)], t_xy - (t_xz + t_zy));
      }
    }
  });

  for (int s = 0; s < params.seeds; ++s) {
    res.checked += checked[static_cast<std::size_t>(s)];
    res.violations += violations[static_cast<std::size_t>(s)];
    res.max_violation = std::max(res.max_violation, worst[static_cast<std::size_t>(s)]);
  }
  return res;
}

}  // namespace richardson
