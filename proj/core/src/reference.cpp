#include "fpp/reference.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace fpp {

namespace {

struct Enumerator {
  const BoxGeometry& geom;
  const WeightField& field;
  std::vector<char> visited;
  std::vector<Site> site_stack;
  std::vector<EdgeId> edge_stack;

  Enumerator(const BoxGeometry& g, const WeightField& f)
      : geom(g), field(f), visited(static_cast<size_t>(g.site_count()), 0) {}
};

// Walk every simple path from the top of the stack, cutting branches whose
// partial sum exceeds `budget()` (sums only grow, weights >= 0).  `visit` is
// called at every site with the current exact partial sum.
template <typename Visit, typename Budget>
void dfs(Enumerator& en, int64_t u_idx, double partial, Visit&& visit,
         Budget&& budget) {
  visit(u_idx, partial);
  std::vector<int64_t> ns(static_cast<size_t>(2 * en.geom.dim()));
  std::vector<int64_t> es(static_cast<size_t>(2 * en.geom.dim()));
  const int deg = en.geom.neighbor_indices(u_idx, ns.data(), es.data());
  for (int i = 0; i < deg; ++i) {
    const int64_t v = ns[static_cast<size_t>(i)];
    if (en.visited[static_cast<size_t>(v)]) continue;
    const double next = partial + en.field.weights[static_cast<size_t>(es[static_cast<size_t>(i)])];
    if (next > budget()) continue;
    en.visited[static_cast<size_t>(v)] = 1;
    en.site_stack.push_back(en.geom.site_from_index(v));
    en.edge_stack.push_back(en.geom.edge_from_index(es[static_cast<size_t>(i)]));
    dfs(en, v, next, visit, budget);
    en.edge_stack.pop_back();
    en.site_stack.pop_back();
    en.visited[static_cast<size_t>(v)] = 0;
  }
}

}  // namespace

ReferenceSolution reference_geodesics(const WeightField& w, const Site& src,
                                      const Site& dst) {
  w.check_valid();
  BoxGeometry geom(w.box);
  const int64_t src_idx = geom.site_index(src);
  const int64_t dst_idx = geom.site_index(dst);
  if (src_idx == dst_idx)
    throw std::domain_error("reference_geodesics requires src != dst");

  ReferenceSolution sol;
  sol.min_time = std::numeric_limits<double>::infinity();

  Enumerator en(geom, w);
  en.visited[static_cast<size_t>(src_idx)] = 1;
  en.site_stack.push_back(src);
  auto visit = [&](int64_t u_idx, double partial) {
    if (u_idx != dst_idx) return;
    if (partial < sol.min_time) {
      sol.min_time = partial;
      sol.geodesics.clear();
    }
    if (partial == sol.min_time)
      sol.geodesics.push_back(LatticePath{en.site_stack, en.edge_stack});
  };
  // keep ties: cut only strictly above the current minimum
  auto budget = [&] { return sol.min_time; };
  dfs(en, src_idx, 0.0, visit, budget);

  if (sol.geodesics.empty())
    throw std::logic_error("no path found between the given sites");
  return sol;
}

std::vector<double> reference_shortest_field(const WeightField& w,
                                             const Site& src) {
  w.check_valid();
  BoxGeometry geom(w.box);
  std::vector<double> best(static_cast<size_t>(geom.site_count()),
                           std::numeric_limits<double>::infinity());

  Enumerator en(geom, w);
  const int64_t src_idx = geom.site_index(src);
  en.visited[static_cast<size_t>(src_idx)] = 1;
  en.site_stack.push_back(src);
  auto visit = [&](int64_t u_idx, double partial) {
    best[static_cast<size_t>(u_idx)] = std::min(best[static_cast<size_t>(u_idx)], partial);
  };
  // a branch can still improve something only while partial <= max_v best[v]
  auto budget = [&] {
    double m = 0.0;
    for (double b : best) m = std::max(m, b);
    return m;
  };
  dfs(en, src_idx, 0.0, visit, budget);
  return best;
}

LatticePath reference_canonical_path(const ReferenceSolution& sol) {
  std::vector<const LatticePath*> alive;
  for (const auto& p : sol.geodesics) alive.push_back(&p);

  size_t j = 0;
  while (alive.size() > 1) {
    // Under positive weights no geodesic is a strict prefix of another; a
    // path that ends here is the unique survivor.
    for (const auto* p : alive) {
      if (p->edges.size() == j) return *p;
    }
    std::vector<int64_t> kmin;
    bool have = false;
    for (const auto* p : alive) {
      auto c = p->edges[j].doubled_center();
      std::reverse(c.begin(), c.end());  // compare (coord_d, ..., coord_1)
      if (!have || c < kmin) {
        kmin = c;
        have = true;
      }
    }
    std::vector<const LatticePath*> next;
    for (const auto* p : alive) {
      auto c = p->edges[j].doubled_center();
      std::reverse(c.begin(), c.end());
      if (c == kmin) next.push_back(p);
    }
    alive.swap(next);
    ++j;
  }
  return *alive.front();
}

bool reference_on_some_geodesic(const ReferenceSolution& sol, const EdgeId& e) {
  for (const auto& p : sol.geodesics)
    for (const auto& pe : p.edges)
      if (pe == e) return true;
  return false;
}

}  // namespace fpp
