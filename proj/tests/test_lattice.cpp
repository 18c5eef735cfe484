#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fpp/lattice.hpp"

using namespace fpp;

TEST_CASE("neighbors of an interior site, d=2") {
  Box box{2, 1};
  auto nbrs = neighbors(make_site({0, 0}), box);
  REQUIRE(nbrs.size() == 4);
  // axis ascending, negative before positive
  CHECK(nbrs[0].first == make_site({-1, 0}));
  CHECK(nbrs[1].first == make_site({1, 0}));
  CHECK(nbrs[2].first == make_site({0, -1}));
  CHECK(nbrs[3].first == make_site({0, 1}));
  // canonical bases have the smaller coordinate along the axis
  CHECK(nbrs[0].second == EdgeId{make_site({-1, 0}), 0});
  CHECK(nbrs[1].second == EdgeId{make_site({0, 0}), 0});
}

TEST_CASE("corner site has d neighbors, d=2") {
  auto nbrs = neighbors(make_site({1, 1}), Box{2, 1});
  REQUIRE(nbrs.size() == 2);
  CHECK(nbrs[0].first == make_site({0, 1}));
  CHECK(nbrs[1].first == make_site({1, 0}));
}

TEST_CASE("interior site has 2d neighbors, d=3") {
  auto nbrs = neighbors(make_site({0, 0, 0}), Box{3, 2});
  CHECK(nbrs.size() == 6);
}

TEST_CASE("site outside box is a domain error") {
  CHECK_THROWS_AS(neighbors(make_site({2, 0}), Box{2, 1}), std::domain_error);
  CHECK_THROWS_AS(edge_index(EdgeId{make_site({1, 0}), 0}, Box{2, 1}),
                  std::domain_error);
}

TEST_CASE("edge count of B_1 in d=2 is 12 and indices are a bijection") {
  BoxGeometry geom(Box{2, 1});
  CHECK(geom.edge_count() == 12);
  std::set<int64_t> seen;
  for (int64_t i = 0; i < geom.edge_count(); ++i) {
    EdgeId e = geom.edge_from_index(i);
    CHECK(geom.edge_index(e) == i);  // round trip
    seen.insert(geom.edge_index(e));
  }
  CHECK(seen.size() == 12);  // injective
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == 11);
}

TEST_CASE("first edge in the ordering has lexicographically smallest (base, axis)") {
  BoxGeometry geom(Box{2, 2});
  EdgeId first = geom.edge_from_index(0);
  CHECK(first.base == make_site({-2, -2}));
  CHECK(first.axis == 0);
  // the next edge keeps the base and bumps the axis
  EdgeId second = geom.edge_from_index(1);
  CHECK(second.base == make_site({-2, -2}));
  CHECK(second.axis == 1);
}

TEST_CASE("edge ordering is lexicographic on (base coords, axis)") {
  BoxGeometry geom(Box{2, 2});
  for (int64_t i = 0; i + 1 < geom.edge_count(); ++i) {
    EdgeId a = geom.edge_from_index(i);
    EdgeId b = geom.edge_from_index(i + 1);
    auto key = [](const EdgeId& e) {
      std::vector<int64_t> k(e.base.coords.begin(), e.base.coords.end());
      k.push_back(e.axis);
      return k;
    };
    CHECK(key(a) < key(b));
  }
}

TEST_CASE("edge count formula d * 2L * (2L+1)^(d-1) by enumeration") {
  for (int32_t d : {2, 3}) {
    for (int32_t L : {1, 2, 3}) {
      BoxGeometry geom(Box{d, L});
      int64_t expect = d * 2 * L;
      for (int32_t a = 0; a < d - 1; ++a) expect *= 2 * L + 1;
      CHECK(geom.edge_count() == expect);
      // enumerate by walking all sites and counting +direction edges
      int64_t count = 0;
      for (int64_t s = 0; s < geom.site_count(); ++s) {
        Site site = geom.site_from_index(s);
        for (int32_t a = 0; a < d; ++a)
          if (site.coords[static_cast<size_t>(a)] < L) ++count;
      }
      CHECK(count == expect);
    }
  }
}

TEST_CASE("neighbors is symmetric with the same edge") {
  BoxGeometry geom(Box{2, 2});
  for (int64_t si = 0; si < geom.site_count(); ++si) {
    Site s = geom.site_from_index(si);
    for (const auto& [t, e] : geom.neighbors(s)) {
      bool found = false;
      for (const auto& [back, e2] : geom.neighbors(t)) {
        if (back == s) {
          CHECK(e2 == e);
          found = true;
        }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("neighbor_indices agrees with neighbors()") {
  for (int32_t d : {2, 3}) {
    BoxGeometry geom(Box{d, 2});
    std::vector<int64_t> ns(static_cast<size_t>(2 * d)), es(static_cast<size_t>(2 * d));
    for (int64_t si = 0; si < geom.site_count(); ++si) {
      auto slow = geom.neighbors(geom.site_from_index(si));
      int deg = geom.neighbor_indices(si, ns.data(), es.data());
      REQUIRE(static_cast<size_t>(deg) == slow.size());
      for (int i = 0; i < deg; ++i) {
        CHECK(ns[static_cast<size_t>(i)] == geom.site_index(slow[static_cast<size_t>(i)].first));
        CHECK(es[static_cast<size_t>(i)] == geom.edge_index(slow[static_cast<size_t>(i)].second));
      }
    }
  }
}

TEST_CASE("doubled edge centers are half-integers on the right axis") {
  EdgeId e{make_site({2, -1}), 1};
  auto c = e.doubled_center();
  CHECK(c == std::vector<int64_t>{4, -1});
}

TEST_CASE("axis helpers") {
  CHECK(axis_site(3, 5) == make_site({5, 0, 0}));
  CHECK(axis_edge(2, 1) == EdgeId{make_site({0, 0}), 0});
  CHECK(axis_edge(2, 3) == EdgeId{make_site({2, 0}), 0});
  CHECK(l1_distance(make_site({0, 0}), make_site({3, -2})) == 5);
}
