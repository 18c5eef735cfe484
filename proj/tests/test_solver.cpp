#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fpp/checks.hpp"
#include "fpp/reference.hpp"
#include "fpp/solver.hpp"

using namespace fpp;

namespace {

const DistributionSchedule kUniform =
    DistributionSchedule::constant(DistributionSpec::shifted_uniform(0.5, 1.5));
const DistributionSchedule kBernoulli = DistributionSchedule::constant(
    DistributionSpec::bernoulli_mix(0.5, 1.0, 0.5));

WeightField unit_field(Box box) {
  WeightField f;
  f.box = box;
  f.weights.assign(static_cast<size_t>(box_edge_count(box)), 1.0);
  return f;
}

void set_weight(const BoxGeometry& geom, WeightField& f, const EdgeId& e,
                double w) {
  f.weights[static_cast<size_t>(geom.edge_index(e))] = w;
}

}  // namespace

TEST_CASE("unit weights give the l1 distance field") {
  BoxGeometry geom(Box{2, 3});
  WeightField f = unit_field(geom.box());
  DistanceField field = shortest_time_field(geom, f, make_site({0, 0}));
  for (int64_t i = 0; i < geom.site_count(); ++i) {
    Site s = geom.site_from_index(i);
    CHECK(field.at(i) ==
          static_cast<double>(std::abs(s.coords[0]) + std::abs(s.coords[1])));
  }
}

TEST_CASE("unit weights: straight geodesic with no ties") {
  BoxGeometry geom(Box{2, 3});
  WeightField f = unit_field(geom.box());
  GeodesicResult g =
      canonical_geodesic(geom, f, make_site({0, 0}), make_site({3, 0}));
  CHECK(g.time == 3.0);
  CHECK(g.edge_count == 3);
  CHECK(g.tie_events == 0);
  REQUIRE(g.path.sites.size() == 4);
  CHECK(g.path.sites[1] == make_site({1, 0}));
  CHECK(g.path.sites[2] == make_site({2, 0}));
  CHECK(g.max_abs_coord == 3);
  CHECK(g.contained_in(3));
  CHECK(g.touches_boundary());  // the straight path ends on the shell of B_3
}

TEST_CASE("tie between the straight path and a half-weight detour") {
  // Straight edges f1, f2 cost 1 each (T = 2); the detour through y = 1 has
  // four edges of 0.5 (also T = 2).  The procedure compares first-edge
  // centres (0.5, 0) vs (0, 0.5): minimal y selects the straight path.
  BoxGeometry geom(Box{2, 2});
  WeightField f;
  f.box = geom.box();
  f.weights.assign(static_cast<size_t>(geom.edge_count()), 9.0);
  set_weight(geom, f, EdgeId{make_site({0, 0}), 0}, 1.0);   // (0,0)-(1,0)
  set_weight(geom, f, EdgeId{make_site({1, 0}), 0}, 1.0);   // (1,0)-(2,0)
  set_weight(geom, f, EdgeId{make_site({0, 0}), 1}, 0.5);   // (0,0)-(0,1)
  set_weight(geom, f, EdgeId{make_site({0, 1}), 0}, 0.5);   // (0,1)-(1,1)
  set_weight(geom, f, EdgeId{make_site({1, 1}), 0}, 0.5);   // (1,1)-(2,1)
  set_weight(geom, f, EdgeId{make_site({2, 0}), 1}, 0.5);   // (2,0)-(2,1)

  const Site src = make_site({0, 0});
  const Site dst = make_site({2, 0});

  ReferenceSolution sol = reference_geodesics(f, src, dst);
  CHECK(sol.min_time == 2.0);
  CHECK(sol.geodesics.size() == 2);  // exactly the two constructed paths

  GeodesicResult g = canonical_geodesic(geom, f, src, dst);
  CHECK(g.time == 2.0);
  CHECK(g.edge_count == 2);
  CHECK(g.tie_events == 1);
  REQUIRE(g.path.sites.size() == 3);
  CHECK(g.path.sites[1] == make_site({1, 0}));
  CHECK(g.path == reference_canonical_path(sol));
}

TEST_CASE("oracle equivalence on B_2 for uniform and bernoulli fields") {
  CheckResult u = check_oracle_equivalence(kUniform, 30, 0x11);
  CHECK_MESSAGE(u.pass, u.detail);
  CheckResult b = check_tie_break_oracle(kBernoulli, 30, 0x22, 0.3);
  CHECK_MESSAGE(b.pass, b.detail);
}

TEST_CASE("on_some_geodesic for unit weights") {
  BoxGeometry geom(Box{2, 4});
  WeightField f = unit_field(geom.box());
  const Site src = make_site({0, 0});
  const Site dst = make_site({3, 0});
  // f_2 from (1,0) to (2,0) lies on the unique geodesic
  CHECK(on_some_geodesic(f, src, dst, EdgeId{make_site({1, 0}), 0}));
  // the edge from (0,2) to (0,3) is far off every geodesic
  CHECK_FALSE(on_some_geodesic(f, src, dst, EdgeId{make_site({0, 2}), 1}));
}

TEST_CASE("canonical path is invariant under reversed candidate iteration") {
  BoxGeometry geom(Box{2, 2});
  for (uint32_t rep = 0; rep < 60; ++rep) {
    WeightField w = sample_field(kBernoulli, geom, 0x77, rep);
    GeodesicResult fwd = canonical_geodesic(geom, w, make_site({0, 0}),
                                            make_site({2, 0}),
                                            NeighborOrder::kForward);
    GeodesicResult rev = canonical_geodesic(geom, w, make_site({0, 0}),
                                            make_site({2, 0}),
                                            NeighborOrder::kReversed);
    CHECK(fwd.path == rev.path);
    CHECK(fwd.time == rev.time);
    CHECK(fwd.tie_events == rev.tie_events);
  }
}

TEST_CASE("raising one weight never lowers the distance field") {
  BoxGeometry geom(Box{2, 3});
  WeightField w = sample_field(kUniform, geom, 0x31, 0);
  DistanceField before = shortest_time_field(geom, w, make_site({0, 0}));
  for (int64_t e = 0; e < geom.edge_count(); e += 7) {
    WeightField bumped = w;
    bumped.weights[static_cast<size_t>(e)] += 0.25;  // stays on the grid
    DistanceField after = shortest_time_field(geom, bumped, make_site({0, 0}));
    for (int64_t i = 0; i < geom.site_count(); ++i)
      CHECK(after.at(i) >= before.at(i));
  }
}

TEST_CASE("truncation below the cap leaves the solve untouched") {
  // uniform(0.5, 1.5) weights stay below 16^alpha ~ 1.58
  BoxGeometry geom(Box{2, 4});
  WeightField w = sample_field(kUniform, geom, 0x41, 1);
  GeodesicResult plain =
      canonical_geodesic(geom, w, make_site({0, 0}), make_site({2, 0}));
  GeodesicResult hat =
      solve_truncated(geom, w, 16, 0.16552511415525114, make_site({0, 0}),
                      make_site({2, 0}));
  CHECK(hat.time == plain.time);
  CHECK(hat.path == plain.path);
}

TEST_CASE("truncated time dominated by full time and the axis-path cap") {
  const DistributionSchedule heavy =
      DistributionSchedule::constant(DistributionSpec::pareto(1.0, 20.0));
  const double alpha = 0.16552511415525114;
  BoxGeometry geom(Box{2, 8});
  for (uint32_t rep = 0; rep < 10; ++rep) {
    WeightField w = sample_field(heavy, geom, 0x51, rep);
    const int64_t n = 4;
    GeodesicResult plain =
        canonical_geodesic(geom, w, axis_site(2, 0), axis_site(2, 4));
    GeodesicResult hat =
        solve_truncated(geom, w, n, alpha, axis_site(2, 0), axis_site(2, 4));
    CHECK(hat.time <= plain.time);
    CHECK(hat.time <=
          static_cast<double>(n) * std::pow(static_cast<double>(n), alpha));
  }
}

TEST_CASE("triangle inequality per realization on a shared field") {
  BoxGeometry geom(Box{2, 8});
  for (uint32_t rep = 0; rep < 20; ++rep) {
    WeightField w = sample_field(kUniform, geom, 0x61, rep);
    double ab = canonical_geodesic(geom, w, axis_site(2, 0), axis_site(2, 2)).time;
    double bc = canonical_geodesic(geom, w, axis_site(2, 2), axis_site(2, 4)).time;
    double ac = canonical_geodesic(geom, w, axis_site(2, 0), axis_site(2, 4)).time;
    CHECK(ac <= ab + bc);
  }
}

TEST_CASE("fuzz: no loop-erased random path beats the solver") {
  BoxGeometry geom(Box{2, 3});
  WeightField w = sample_field(kUniform, geom, 0x71, 0);
  const Site src = make_site({0, 0});
  const Site dst = make_site({3, 0});
  const double best = canonical_geodesic(geom, w, src, dst).time;

  std::mt19937 rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    // loop-erased random walk from src to dst inside the box
    std::vector<int64_t> path{geom.site_index(src)};
    std::vector<int64_t> ns(4), es(4);
    const int64_t dst_idx = geom.site_index(dst);
    while (path.back() != dst_idx && path.size() < 4000) {
      int deg = geom.neighbor_indices(path.back(), ns.data(), es.data());
      int64_t nxt = ns[static_cast<size_t>(
          std::uniform_int_distribution<int>(0, deg - 1)(rng))];
      auto seen = std::find(path.begin(), path.end(), nxt);
      if (seen != path.end())
        path.erase(seen + 1, path.end());  // erase the loop
      else
        path.push_back(nxt);
    }
    REQUIRE(path.back() == dst_idx);
    double cost = 0.0;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      int deg = geom.neighbor_indices(path[i], ns.data(), es.data());
      for (int k = 0; k < deg; ++k)
        if (ns[static_cast<size_t>(k)] == path[i + 1])
          cost += w.weights[static_cast<size_t>(es[static_cast<size_t>(k)])];
    }
    CHECK(cost >= best);
  }
}

TEST_CASE("zero-weight edges are handled and match the reference") {
  BoxGeometry geom(Box{2, 1});
  WeightField f = unit_field(geom.box());
  // a free edge adjacent to the source
  set_weight(geom, f, EdgeId{make_site({0, 0}), 1}, 0.0);
  set_weight(geom, f, EdgeId{make_site({0, 1}), 0}, 0.5);

  const Site src = make_site({0, 0});
  const Site dst = make_site({1, 0});
  ReferenceSolution sol = reference_geodesics(f, src, dst);
  GeodesicResult g = canonical_geodesic(geom, f, src, dst);
  CHECK(g.time == sol.min_time);
  CHECK(g.path == reference_canonical_path(sol));
}

TEST_CASE("edge membership never misses a geodesic edge, even at weight 0") {
  // With a zero-weight edge the dF/dB test can also flag edges of equal-cost
  // non-simple walks, so it is one-sided there: every edge of a minimal
  // simple path must still be flagged.
  BoxGeometry geom(Box{2, 1});
  WeightField f = unit_field(geom.box());
  set_weight(geom, f, EdgeId{make_site({0, 0}), 1}, 0.0);
  const Site src = make_site({0, 0});
  const Site dst = make_site({1, 0});
  ReferenceSolution sol = reference_geodesics(f, src, dst);
  DistanceField fwd = shortest_time_field(geom, f, src);
  DistanceField bwd = shortest_time_field(geom, f, dst);
  const double total = fwd.at(geom.site_index(dst));
  for (const auto& path : sol.geodesics)
    for (const auto& edge : path.edges)
      CHECK(on_some_geodesic(geom, f, fwd, bwd, total, edge));
}
