#ifndef RICHARDSON_LATTICE_HPP
#define RICHARDSON_LATTICE_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "richardson/errors.hpp"

namespace richardson {

// Runs are supported for dimensions 2..kMaxDim.
inline constexpr int kMaxDim = 4;

// A lattice site. Coordinates beyond the run dimension are kept at zero, so
// lexicographic comparison of the full array equals lexicographic comparison
// of the first d coordinates.
struct Site {
  std::array<std::int32_t, kMaxDim> c{};

  auto operator<=>(const Site&) const = default;
};

inline Site site2(std::int32_t x, std::int32_t y) { return Site{{x, y}}; }
inline Site site3(std::int32_t x, std::int32_t y, std::int32_t z) { return Site{{x, y, z}}; }

Site origin_site();

struct SiteHash {
  std::size_t operator()(const Site& s) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto v : s.c) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) + 0x9e3779b9ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

// The 2d nearest neighbors of x, in a fixed order: axis index ascending,
// minus direction before plus. All tie-breaking downstream relies on this
// order being deterministic.
std::vector<Site> neighbors(const Site& x, int dim);

// Nearest-neighbor step helpers.
Site shifted(const Site& x, int axis, int delta);
int l1_distance(const Site& a, const Site& b, int dim);
int linf_distance(const Site& a, const Site& b, int dim);

// An undirected lattice edge in canonical form: the endpoint with the smaller
// coordinate along `axis` (which is also the lexicographically smaller
// endpoint) plus the axis index. Construction from either endpoint order
// yields the same canonical value.
struct Edge {
  Site base;
  std::int8_t axis = 0;

  auto operator<=>(const Edge&) const = default;

  Site other() const { return shifted(base, axis, +1); }

  // Throws InvalidInputError unless a and b are at L1 distance exactly 1.
  static Edge between(const Site& a, const Site& b, int dim);
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const {
    return SiteHash{}(e.base) * 31u + static_cast<std::size_t>(e.axis);
  }
};

// Axis-aligned box of sites, lo <= x <= hi per coordinate. Cube boxes are the
// L-inf balls used for growth runs; slab boxes back the unbounded-start
// experiments. Sites are linearized row-major with coordinate 0 most
// significant, so linear-index order equals lexicographic site order.
struct Box {
  std::array<std::int32_t, kMaxDim> lo{};
  std::array<std::int32_t, kMaxDim> hi{};
  int dim = 2;

  static Box cube(const Site& center, int radius, int dim);
  // x1 in [-back, front], |x_i| <= halfwidth for i >= 2.
  static Box slab(int back, int front, int halfwidth, int dim);

  std::int64_t size() const;
  bool contains(const Site& s) const;
  std::int64_t index_of(const Site& s) const;
  Site site_at(std::int64_t idx) const;
  // True when some coordinate sits at lo or hi.
  bool on_boundary(const Site& s) const;
  std::int32_t extent(int axis) const { return hi[axis] - lo[axis] + 1; }
};

// A finite set of distinct sites with exact membership queries. Input order
// is not preserved; sites are kept sorted and deduplicated.
class SiteSet {
 public:
  SiteSet() = default;
  explicit SiteSet(std::vector<Site> sites);

  bool contains(const Site& s) const;
  bool empty() const { return sites_.empty(); }
  std::size_t size() const { return sites_.size(); }
  const std::vector<Site>& sites() const { return sites_; }

  bool disjoint_from(const SiteSet& other) const;

 private:
  std::vector<Site> sites_;
};

// True iff every path from xi_j to infinity meets xi_i. Exact flood fill from
// xi_j through the complement of xi_i, bounded by the bounding box of xi_i
// inflated by one shell; exiting the inflated box means escape (for d >= 2
// the complement of a finite set outside its bounding box is one infinite
// component). Throws InvalidInputError if the sets overlap.
bool strangles(const SiteSet& xi_i, const SiteSet& xi_j, int dim);

// Neither set strangles the other.
bool is_fertile(const SiteSet& xi_1, const SiteSet& xi_2, int dim);

// Text form used in configuration files: whitespace-separated coordinate
// tuples, e.g. "(0,0) (1,0)".
SiteSet parse_site_set(const std::string& text, int dim);
std::string format_site_set(const SiteSet& set, int dim);
std::string format_site(const Site& s, int dim);

void require_dimension(int dim);

}  // namespace richardson

#endif
