#include <algorithm>
#include <vector>

#include "doctest.h"
#include "richardson/errors.hpp"
#include "richardson/lattice.hpp"

using namespace richardson;

TEST_CASE("neighbors enumerate in axis-ascending, minus-before-plus order") {
  auto n2 = neighbors(site2(3, -5), 2);
  REQUIRE(n2.size() == 4);
  CHECK(n2[0] == site2(2, -5));
  CHECK(n2[1] == site2(4, -5));
  CHECK(n2[2] == site2(3, -6));
  CHECK(n2[3] == site2(3, -4));

  auto n3 = neighbors(site3(0, 0, 0), 3);
  REQUIRE(n3.size() == 6);
  CHECK(n3[0] == site3(-1, 0, 0));
  CHECK(n3[1] == site3(1, 0, 0));
  CHECK(n3[2] == site3(0, -1, 0));
  CHECK(n3[3] == site3(0, 1, 0));
  CHECK(n3[4] == site3(0, 0, -1));
  CHECK(n3[5] == site3(0, 0, 1));
}

TEST_CASE("shifted moves one step along one axis") {
  CHECK(shifted(site2(1, 2), 0, -1) == site2(0, 2));
  CHECK(shifted(site2(1, 2), 1, +1) == site2(1, 3));
}

TEST_CASE("distances") {
  CHECK(l1_distance(site2(0, 0), site2(3, -4), 2) == 7);
  CHECK(linf_distance(site2(0, 0), site2(3, -4), 2) == 4);
  CHECK(l1_distance(site3(1, 1, 1), site3(1, 1, 1), 3) == 0);
  CHECK(linf_distance(site3(0, 0, 0), site3(2, -7, 3), 3) == 7);
}

TEST_CASE("Edge::between canonicalizes endpoint order") {
  Edge a = Edge::between(site2(0, 0), site2(1, 0), 2);
  Edge b = Edge::between(site2(1, 0), site2(0, 0), 2);
  CHECK(a == b);
  CHECK(a.base == site2(0, 0));
  CHECK(a.axis == 0);
  CHECK(a.other() == site2(1, 0));

  Edge c = Edge::between(site2(2, -3), site2(2, -4), 2);
  CHECK(c.base == site2(2, -4));
  CHECK(c.axis == 1);

  CHECK_THROWS_AS(Edge::between(site2(0, 0), site2(1, 1), 2), InvalidInputError);
  CHECK_THROWS_AS(Edge::between(site2(0, 0), site2(0, 0), 2), InvalidInputError);
  CHECK_THROWS_AS(Edge::between(site2(0, 0), site2(2, 0), 2), InvalidInputError);
}

TEST_CASE("cube box geometry") {
  Box box = Box::cube(origin_site(), 2, 2);
  CHECK(box.size() == 25);
  CHECK(box.extent(0) == 5);
  CHECK(box.contains(site2(2, -2)));
  CHECK(!box.contains(site2(3, 0)));
  CHECK(box.on_boundary(site2(2, 0)));
  CHECK(box.on_boundary(site2(0, -2)));
  CHECK(!box.on_boundary(site2(1, 1)));

  Box off = Box::cube(site2(10, -3), 1, 2);
  CHECK(off.size() == 9);
  CHECK(off.contains(site2(9, -4)));
  CHECK(!off.contains(site2(8, -3)));
}

TEST_CASE("box linearization is lexicographic and invertible") {
  Box box = Box::cube(origin_site(), 1, 2);
  // Row-major, coordinate 0 most significant: (-1,-1), (-1,0), ..., (1,1).
  CHECK(box.index_of(site2(-1, -1)) == 0);
  CHECK(box.index_of(site2(-1, 0)) == 1);
  CHECK(box.index_of(site2(0, -1)) == 3);
  CHECK(box.index_of(site2(1, 1)) == 8);
  for (std::int64_t i = 0; i < box.size(); ++i) {
    CHECK(box.index_of(box.site_at(i)) == i);
    if (i > 0) CHECK(box.site_at(i - 1) < box.site_at(i));
  }

  Box box3 = Box::cube(site3(0, 0, 0), 2, 3);
  CHECK(box3.size() == 125);
  for (std::int64_t i = 0; i < box3.size(); ++i) {
    CHECK(box3.index_of(box3.site_at(i)) == i);
  }
}

TEST_CASE("slab box geometry") {
  Box s = Box::slab(0, 64, 32, 2);
  CHECK(s.lo[0] == 0);
  CHECK(s.hi[0] == 64);
  CHECK(s.lo[1] == -32);
  CHECK(s.hi[1] == 32);
  CHECK(s.size() == 65 * 65);
  CHECK(s.contains(site2(0, -32)));
  CHECK(!s.contains(site2(-1, 0)));

  Box s3 = Box::slab(2, 5, 3, 3);
  CHECK(s3.size() == 8 * 7 * 7);
  CHECK(s3.contains(site3(-2, 3, -3)));
  CHECK(!s3.contains(site3(-3, 0, 0)));
}

TEST_CASE("SiteSet sorts, dedups, and answers membership") {
  SiteSet set({site2(1, 0), site2(0, 0), site2(1, 0), site2(-1, 2)});
  CHECK(set.size() == 3);
  CHECK(std::is_sorted(set.sites().begin(), set.sites().end()));
  CHECK(set.contains(site2(0, 0)));
  CHECK(!set.contains(site2(2, 2)));
  CHECK(set.disjoint_from(SiteSet({site2(5, 5)})));
  CHECK(!set.disjoint_from(SiteSet({site2(1, 0)})));
  CHECK(SiteSet().empty());
}

TEST_CASE("site set parsing and formatting round-trip") {
  SiteSet set = parse_site_set("(0,0) (1,0)", 2);
  CHECK(set.size() == 2);
  CHECK(set.contains(site2(1, 0)));
  CHECK(format_site_set(set, 2) == "(0,0) (1,0)");
  CHECK(format_site(site2(-3, 7), 2) == "(-3,7)");

  SiteSet spaced = parse_site_set("  (2, -1)   (0,5)\t(2,-1)", 2);
  CHECK(spaced.size() == 2);
  CHECK(format_site_set(spaced, 2) == "(0,5) (2,-1)");

  SiteSet three = parse_site_set("(1,2,3)", 3);
  CHECK(three.contains(site3(1, 2, 3)));
  CHECK(format_site_set(three, 3) == "(1,2,3)");

  CHECK_THROWS_AS(parse_site_set("(1,2", 2), InvalidInputError);
  CHECK_THROWS_AS(parse_site_set("(1,2,3)", 2), InvalidInputError);
  CHECK_THROWS_AS(parse_site_set("(1)", 2), InvalidInputError);
  CHECK_THROWS_AS(parse_site_set("(a,b)", 2), InvalidInputError);
}

TEST_CASE("strangles detects enclosure exactly") {
  // L1 diamond of radius 1 around the origin strangles the origin.
  SiteSet ring1({site2(1, 0), site2(-1, 0), site2(0, 1), site2(0, -1)});
  SiteSet inner({site2(0, 0)});
  CHECK(strangles(ring1, inner, 2));
  CHECK(!strangles(inner, ring1, 2));

  // Remove one stone: a gap lets the inner type escape.
  SiteSet gap({site2(1, 0), site2(-1, 0), site2(0, 1)});
  CHECK(!strangles(gap, inner, 2));

  // L-inf ring (8 stones) also strangles.
  std::vector<Site> ring8;
  for (int x = -1; x <= 1; ++x)
    for (int y = -1; y <= 1; ++y)
      if (x != 0 || y != 0) ring8.push_back(site2(x, y));
  CHECK(strangles(SiteSet(ring8), inner, 2));

  // Diagonal-only corners do not block nearest-neighbor escape.
  SiteSet corners({site2(1, 1), site2(1, -1), site2(-1, 1), site2(-1, -1)});
  CHECK(!strangles(corners, inner, 2));

  // d=3: the 6 axis neighbors strangle the origin.
  std::vector<Site> ring3 = neighbors(site3(0, 0, 0), 3);
  CHECK(strangles(SiteSet(ring3), SiteSet({site3(0, 0, 0)}), 3));
  ring3.pop_back();
  CHECK(!strangles(SiteSet(ring3), SiteSet({site3(0, 0, 0)}), 3));

  CHECK_THROWS_AS(strangles(inner, inner, 2), InvalidInputError);
}

TEST_CASE("is_fertile rejects configurations with a strangled side") {
  SiteSet ring1({site2(1, 0), site2(-1, 0), site2(0, 1), site2(0, -1)});
  SiteSet inner({site2(0, 0)});
  CHECK(!is_fertile(ring1, inner, 2));
  CHECK(!is_fertile(inner, ring1, 2));
  CHECK(is_fertile(SiteSet({site2(0, 0)}), SiteSet({site2(1, 0)}), 2));
}

TEST_CASE("require_dimension accepts 2..4 only") {
  require_dimension(2);
  require_dimension(3);
  require_dimension(4);
  CHECK_THROWS_AS(require_dimension(1), InvalidInputError);
  CHECK_THROWS_AS(require_dimension(5), InvalidInputError);
  CHECK_THROWS_AS(require_dimension(0), InvalidInputError);
}
