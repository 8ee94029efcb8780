#include "richardson/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <deque>
#include <limits>
#include <unordered_set>

namespace richardson {

void require_dimension(int dim) {
  if (dim < 2 || dim > kMaxDim) {
    throw InvalidInputError("dimension must be in [2, " + std::to_string(kMaxDim) +
                            "], got " + std::to_string(dim));
  }
}

Site origin_site() { return Site{}; }

std::vector<Site> neighbors(const Site& x, int dim) {
  std::vector<Site> out;
  out.reserve(static_cast<std::size_t>(2 * dim));
  for (int axis = 0; axis < dim; ++axis) {
    out.push_back(shifted(x, axis, -1));
    out.push_back(shifted(x, axis, +1));
  }
  return out;
}

Site shifted(const Site& x, int axis, int delta) {
  Site y = x;
  y.c[static_cast<std::size_t>(axis)] += delta;
  return y;
}

int l1_distance(const Site& a, const Site& b, int dim) {
  int d = 0;
  for (int i = 0; i < dim; ++i) {
    d += std::abs(a.c[static_cast<std::size_t>(i)] - b.c[static_cast<std::size_t>(i)]);
  }
  return d;
}

int linf_distance(const Site& a, const Site& b, int dim) {
  int d = 0;
  for (int i = 0; i < dim; ++i) {
    d = std::max(d, std::abs(a.c[static_cast<std::size_t>(i)] - b.c[static_cast<std::size_t>(i)]));
  }
  return d;
}

Edge Edge::between(const Site& a, const Site& b, int dim) {
  int axis = -1;
  for (int i = 0; i < dim; ++i) {
    auto da = a.c[static_cast<std::size_t>(i)] - b.c[static_cast<std::size_t>(i)];
    if (da == 0) continue;
    if (axis != -1 || (da != 1 && da != -1)) {
      throw InvalidInputError("sites are not nearest neighbors");
    }
    axis = i;
  }
  if (axis == -1) throw InvalidInputError("sites are not nearest neighbors");
  Edge e;
  e.axis = static_cast<std::int8_t>(axis);
  e.base = std::min(a, b);
  return e;
}

Box Box::cube(const Site& center, int radius, int dim) {
  require_dimension(dim);
  if (radius < 0) throw InvalidInputError("box radius must be >= 0");
  Box b;
  b.dim = dim;
  for (int i = 0; i < dim; ++i) {
    b.lo[static_cast<std::size_t>(i)] = center.c[static_cast<std::size_t>(i)] - radius;
    b.hi[static_cast<std::size_t>(i)] = center.c[static_cast<std::size_t>(i)] + radius;
  }
  return b;
}

Box Box::slab(int back, int front, int halfwidth, int dim) {
  require_dimension(dim);
  if (back < 0 || front < 1 || halfwidth < 1) {
    throw InvalidInputError("slab needs back >= 0, front >= 1, halfwidth >= 1");
  }
  Box b;
  b.dim = dim;
  b.lo[0] = -back;
  b.hi[0] = front;
  for (int i = 1; i < dim; ++i) {
    b.lo[static_cast<std::size_t>(i)] = -halfwidth;
    b.hi[static_cast<std::size_t>(i)] = halfwidth;
  }
  return b;
}

std::int64_t Box::size() const {
  std::int64_t n = 1;
  for (int i = 0; i < dim; ++i) {
    n *= static_cast<std::int64_t>(extent(i));
  }
  return n;
}

bool Box::contains(const Site& s) const {
  for (int i = 0; i < dim; ++i) {
    auto v = s.c[static_cast<std::size_t>(i)];
    if (v < lo[static_cast<std::size_t>(i)] || v > hi[static_cast<std::size_t>(i)]) return false;
  }
  return true;
}

std::int64_t Box::index_of(const Site& s) const {
  std::int64_t idx = 0;
  for (int i = 0; i < dim; ++i) {
    idx = idx * extent(i) + (s.c[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)]);
  }
  return idx;
}

Site Box::site_at(std::int64_t idx) const {
  Site s{};
  for (int i = dim - 1; i >= 0; --i) {
    auto e = static_cast<std::int64_t>(extent(i));
    s.c[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(lo[static_cast<std::size_t>(i)] + idx % e);
    idx /= e;
  }
  return s;
}

bool Box::on_boundary(const Site& s) const {
  for (int i = 0; i < dim; ++i) {
    auto v = s.c[static_cast<std::size_t>(i)];
    if (v == lo[static_cast<std::size_t>(i)] || v == hi[static_cast<std::size_t>(i)]) return true;
  }
  return false;
}

SiteSet::SiteSet(std::vector<Site> sites) : sites_(std::move(sites)) {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
}

bool SiteSet::contains(const Site& s) const {
  return std::binary_search(sites_.begin(), sites_.end(), s);
}

bool SiteSet::disjoint_from(const SiteSet& other) const {
  // Both vectors are sorted; a single merge pass suffices.
  auto a = sites_.begin();
  auto b = other.sites_.begin();
  while (a != sites_.end() && b != other.sites_.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      return false;
    }
  }
  return true;
}

bool strangles(const SiteSet& xi_i, const SiteSet& xi_j, int dim) {
  require_dimension(dim);
  if (xi_i.empty() || xi_j.empty()) {
    throw InvalidInputError("strangles needs two non-empty site sets");
  }
  if (!xi_i.disjoint_from(xi_j)) {
    throw InvalidInputError("strangles needs disjoint site sets");
  }
  // Bounding box of the potential strangler, inflated by one shell. Any walk
  // from xi_j that avoids xi_i and leaves this box has escaped: outside the
  // bounding box the complement of xi_i is a single component reaching
  // infinity (d >= 2).
  Box bbox;
  bbox.dim = dim;
  for (int i = 0; i < dim; ++i) {
    bbox.lo[static_cast<std::size_t>(i)] = std::numeric_limits<std::int32_t>::max();
    bbox.hi[static_cast<std::size_t>(i)] = std::numeric_limits<std::int32_t>::min();
  }
  for (const Site& s : xi_i.sites()) {
    for (int i = 0; i < dim; ++i) {
      bbox.lo[static_cast<std::size_t>(i)] = std::min(bbox.lo[static_cast<std::size_t>(i)], s.c[static_cast<std::size_t>(i)]);
      bbox.hi[static_cast<std::size_t>(i)] = std::max(bbox.hi[static_cast<std::size_t>(i)], s.c[static_cast<std::size_t>(i)]);
    }
  }
  for (int i = 0; i < dim; ++i) {
    bbox.lo[static_cast<std::size_t>(i)] -= 1;
    bbox.hi[static_cast<std::size_t>(i)] += 1;
  }

  std::unordered_set<Site, SiteHash> seen;
  std::deque<Site> queue;
  for (const Site& s : xi_j.sites()) {
    if (!bbox.contains(s)) return false;  // already outside the cage
    if (seen.insert(s).second) queue.push_back(s);
  }
  while (!queue.empty()) {
    Site cur = queue.front();
    queue.pop_front();
    for (const Site& nb : neighbors(cur, dim)) {
      if (xi_i.contains(nb)) continue;
      if (!bbox.contains(nb)) return false;  // escaped past the inflated box
      if (seen.insert(nb).second) queue.push_back(nb);
    }
  }
  return true;  // flood fill exhausted without escaping
}

bool is_fertile(const SiteSet& xi_1, const SiteSet& xi_2, int dim) {
  return !strangles(xi_1, xi_2, dim) && !strangles(xi_2, xi_1, dim);
}

namespace {

void skip_ws(const std::string& text, std::size_t& pos) {
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
}

std::int32_t parse_int(const std::string& text, std::size_t& pos) {
  skip_ws(text, pos);
  std::size_t start = pos;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(text[start])))) {
    throw InvalidInputError("expected integer at position " + std::to_string(start) +
                            " in site set \"" + text + "\"");
  }
  return static_cast<std::int32_t>(std::stol(text.substr(start, pos - start)));
}

}  // namespace

SiteSet parse_site_set(const std::string& text, int dim) {
  require_dimension(dim);
  std::vector<Site> sites;
  std::size_t pos = 0;
  skip_ws(text, pos);
  while (pos < text.size()) {
    if (text[pos] != '(') {
      throw InvalidInputError("expected '(' at position " + std::to_string(pos) +
                              " in site set \"" + text + "\"");
    }
    ++pos;
    Site s{};
    for (int i = 0; i < dim; ++i) {
      s.c[static_cast<std::size_t>(i)] = parse_int(text, pos);
      skip_ws(text, pos);
      if (i + 1 < dim) {
        if (pos >= text.size() || text[pos] != ',') {
          throw InvalidInputError("expected ',' in site tuple in \"" + text + "\"");
        }
        ++pos;
      }
    }
    if (pos >= text.size() || text[pos] != ')') {
      throw InvalidInputError("expected ')' closing site tuple in \"" + text + "\"");
    }
    ++pos;
    sites.push_back(s);
    skip_ws(text, pos);
  }
  if (sites.empty()) {
    throw InvalidInputError("site set \"" + text + "\" contains no sites");
  }
  return SiteSet(std::move(sites));
}

std::string format_site(const Site& s, int dim) {
  std::string out = "(";
  for (int i = 0; i < dim; ++i) {
    if (i) out += ",";
    out += std::to_string(s.c[static_cast<std::size_t>(i)]);
  }
  out += ")";
  return out;
}

std::string format_site_set(const SiteSet& set, int dim) {
  std::string out;
  for (const Site& s : set.sites()) {
    if (!out.empty()) out += " ";
    out += format_site(s, dim);
  }
  return out;
}

}  // namespace richardson
