#include "fpp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exactness guard: every Dijkstra label is a sum over a simple path, so the
// largest possible sum is site_count * wmax.  Sums of kWeightGrid multiples
// are exact in double while below 2^32.
void check_exactness_budget(const BoxGeometry& geom, const WeightField& w) {
  double wmax = 0.0;
  for (double v : w.weights) wmax = std::max(wmax, v);
  if (static_cast<double>(geom.site_count()) * wmax >= 0x1.0p32)
    throw std::domain_error(
        "box too large for exact passage-time arithmetic at this weight scale");
}

std::vector<double> dijkstra(const BoxGeometry& geom, const WeightField& w,
                             int64_t src_idx) {
  const int64_t n_sites = geom.site_count();
  std::vector<double> dist(static_cast<size_t>(n_sites), kInf);
  std::vector<char> settled(static_cast<size_t>(n_sites), 0);

  using Entry = std::pair<double, int64_t>;  // (distance, site index)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[static_cast<size_t>(src_idx)] = 0.0;
  heap.emplace(0.0, src_idx);

  std::vector<int64_t> nbr_sites(static_cast<size_t>(2 * geom.dim()));
  std::vector<int64_t> nbr_edges(static_cast<size_t>(2 * geom.dim()));

  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (settled[static_cast<size_t>(u)]) continue;
    settled[static_cast<size_t>(u)] = 1;
    const int deg = geom.neighbor_indices(u, nbr_sites.data(), nbr_edges.data());
    for (int i = 0; i < deg; ++i) {
      const int64_t v = nbr_sites[static_cast<size_t>(i)];
      if (settled[static_cast<size_t>(v)]) continue;
      const double cand = du + w.weights[static_cast<size_t>(nbr_edges[static_cast<size_t>(i)])];
      if (cand < dist[static_cast<size_t>(v)]) {
        dist[static_cast<size_t>(v)] = cand;
        heap.emplace(cand, v);
      }
    }
  }
  return dist;
}

// Lexicographic order on (center[d-1], ..., center[0]); minimal key wins.
bool center_key_less(const EdgeId& a, const EdgeId& b) {
  const auto ca = a.doubled_center();
  const auto cb = b.doubled_center();
  for (size_t i = ca.size(); i-- > 0;) {
    if (ca[i] != cb[i]) return ca[i] < cb[i];
  }
  return false;
}

}  // namespace

DistanceField shortest_time_field(const BoxGeometry& geom, const WeightField& w,
                                  const Site& src) {
  w.check_valid();
  check_exactness_budget(geom, w);
  return DistanceField{dijkstra(geom, w, geom.site_index(src))};
}

DistanceField shortest_time_field(const WeightField& w, const Site& src) {
  return shortest_time_field(BoxGeometry(w.box), w, src);
}

GeodesicResult canonical_geodesic(const BoxGeometry& geom, const WeightField& w,
                                  const Site& src, const Site& dst,
                                  NeighborOrder order) {
  w.check_valid();
  check_exactness_budget(geom, w);
  const int64_t src_idx = geom.site_index(src);
  const int64_t dst_idx = geom.site_index(dst);

  const std::vector<double> fwd = dijkstra(geom, w, src_idx);
  const std::vector<double> bwd = dijkstra(geom, w, dst_idx);
  const double total = fwd[static_cast<size_t>(dst_idx)];
  if (!(total < kInf)) throw std::logic_error("destination unreachable in box");
  if (total != bwd[static_cast<size_t>(src_idx)])
    throw std::logic_error("forward/backward passage times disagree");

  GeodesicResult res;
  res.solver_radius = geom.radius();
  res.path.sites.push_back(src);
  std::vector<char> on_prefix(static_cast<size_t>(geom.site_count()), 0);
  on_prefix[static_cast<size_t>(src_idx)] = 1;

  std::vector<int64_t> nbr_sites(static_cast<size_t>(2 * geom.dim()));
  std::vector<int64_t> nbr_edges(static_cast<size_t>(2 * geom.dim()));

  int64_t u = src_idx;
  double prefix_time = 0.0;
  Site u_site = src;
  res.max_abs_coord = 0;
  for (int32_t c : src.coords)
    res.max_abs_coord = std::max(res.max_abs_coord, std::abs(c));

  while (u != dst_idx) {
    const int deg = geom.neighbor_indices(u, nbr_sites.data(), nbr_edges.data());
    // Candidates: edges whose exact extension time still equals the optimum.
    // A prefix of some simple geodesic always has at least one.
    int best_i = -1;
    EdgeId best_edge;
    int n_candidates = 0;
    for (int step = 0; step < deg; ++step) {
      const int i = order == NeighborOrder::kForward ? step : deg - 1 - step;
      const int64_t v = nbr_sites[static_cast<size_t>(i)];
      if (on_prefix[static_cast<size_t>(v)]) continue;
      const double wgt = w.weights[static_cast<size_t>(nbr_edges[static_cast<size_t>(i)])];
      if (prefix_time + wgt + bwd[static_cast<size_t>(v)] == total) {
        EdgeId e = geom.edge_from_index(nbr_edges[static_cast<size_t>(i)]);
        if (best_i < 0 || center_key_less(e, best_edge)) {
          best_i = i;
          best_edge = e;
        }
        ++n_candidates;
      }
    }
    if (best_i < 0)
      throw std::logic_error(
          "geodesic reconstruction found no viable edge (possible only when "
          "zero-weight edges make every optimal continuation non-simple)");
    if (n_candidates > 1) ++res.tie_events;

    const int64_t v = nbr_sites[static_cast<size_t>(best_i)];
    prefix_time += w.weights[static_cast<size_t>(nbr_edges[static_cast<size_t>(best_i)])];
    on_prefix[static_cast<size_t>(v)] = 1;
    u = v;
    u_site = geom.site_from_index(v);
    for (int32_t c : u_site.coords)
      res.max_abs_coord = std::max(res.max_abs_coord, std::abs(c));
    res.path.edges.push_back(best_edge);
    res.path.sites.push_back(u_site);
  }

  res.edge_count = static_cast<int64_t>(res.path.edges.size());
  // Recompute the time along the path; exact arithmetic makes this equal to
  // the Dijkstra value bit for bit.
  double recomputed = 0.0;
  for (const EdgeId& e : res.path.edges)
    recomputed += w.weights[static_cast<size_t>(geom.edge_index(e))];
  if (recomputed != total)
    throw std::logic_error("path time does not match distance field");
  res.time = recomputed;
  return res;
}

GeodesicResult canonical_geodesic(const WeightField& w, const Site& src,
                                  const Site& dst) {
  return canonical_geodesic(BoxGeometry(w.box), w, src, dst);
}

bool on_some_geodesic(const BoxGeometry& geom, const WeightField& w,
                      const DistanceField& forward, const DistanceField& backward,
                      double total, const EdgeId& e) {
  if (!geom.contains_edge(e)) throw std::domain_error("edge not inside box");
  const double wgt = w.weights[static_cast<size_t>(geom.edge_index(e))];
  const int64_t u = geom.site_index(e.base);
  Site other = e.base;
  ++other.coords[static_cast<size_t>(e.axis)];
  const int64_t v = geom.site_index(other);
  const double through_uv = forward.at(u) + wgt + backward.at(v);
  const double through_vu = forward.at(v) + wgt + backward.at(u);
  return std::min(through_uv, through_vu) == total;
}

bool on_some_geodesic(const WeightField& w, const Site& src, const Site& dst,
                      const EdgeId& e) {
  BoxGeometry geom(w.box);
  DistanceField fwd = shortest_time_field(geom, w, src);
  DistanceField bwd = shortest_time_field(geom, w, dst);
  const double total = fwd.at(geom.site_index(dst));
  return on_some_geodesic(geom, w, fwd, bwd, total, e);
}

GeodesicResult solve_truncated(const BoxGeometry& geom, const WeightField& w,
                               int64_t n, double alpha, const Site& src,
                               const Site& dst) {
  WeightField t = truncate_field(w, n, alpha);
  return canonical_geodesic(geom, t, src, dst);
}

}  // namespace fpp
