#pragma once

#include <cstdint>
#include <vector>

namespace fpp {

// A point of Z^d.  coords.size() == dimension, always >= 2.
struct Site {
  std::vector<int32_t> coords;

  bool operator==(const Site&) const = default;
};

// Canonical undirected edge {base, base + unit(axis)}: base is the endpoint
// with the smaller coordinate along `axis`.  The edge centre sits at
// base + 0.5 * unit(axis); tie-breaking compares centres, so we expose the
// centre with doubled (integer) coordinates to keep comparisons exact.
struct EdgeId {
  Site base;
  int32_t axis = 0;

  bool operator==(const EdgeId&) const = default;

  std::vector<int64_t> doubled_center() const {
    std::vector<int64_t> c(base.coords.begin(), base.coords.end());
    for (auto& v : c) v *= 2;
    c[static_cast<size_t>(axis)] += 1;
    return c;
  }
};

// The box B_L = [-L, L]^d with (2L+1)^d sites.
struct Box {
  int32_t dim = 2;
  int32_t radius = 1;

  bool operator==(const Box&) const = default;
};

// A lattice path: consecutive sites differ by one unit step, edges[i] is the
// canonical edge between sites[i] and sites[i+1], and no edge repeats.
struct LatticePath {
  std::vector<Site> sites;
  std::vector<EdgeId> edges;

  bool operator==(const LatticePath&) const = default;
};

// Precomputed indexing for one box: linear site indices (lexicographic on
// coords, first coordinate most significant) and linear edge indices
// (lexicographic on (base coords, axis)).  Both orderings are part of the
// on-disk and RNG contracts, so they must not change.
class BoxGeometry {
 public:
  explicit BoxGeometry(Box box);

  const Box& box() const { return box_; }
  int32_t dim() const { return box_.dim; }
  int32_t radius() const { return box_.radius; }
  int64_t site_count() const { return site_count_; }
  int64_t edge_count() const { return edge_count_; }

  bool contains(const Site& s) const;
  bool contains_edge(const EdgeId& e) const;

  // Throws std::domain_error when the site is outside the box.
  int64_t site_index(const Site& s) const;
  Site site_from_index(int64_t idx) const;

  // Throws std::domain_error when either endpoint is outside the box.
  int64_t edge_index(const EdgeId& e) const;
  EdgeId edge_from_index(int64_t idx) const;

  // Neighbors of s inside the box with their canonical edges, emitted axis
  // ascending, negative direction before positive.
  std::vector<std::pair<Site, EdgeId>> neighbors(const Site& s) const;

  // Flat-index neighbor walk used by the solver hot path.  `out_sites` and
  // `out_edges` must have room for 2*dim entries; returns the count emitted,
  // same order as neighbors().
  int neighbor_indices(int64_t site_idx, int64_t* out_sites,
                       int64_t* out_edges) const;

  int64_t first_edge_of_site(int64_t site_idx) const {
    return first_edge_[static_cast<size_t>(site_idx)];
  }

 private:
  Box box_;
  int64_t site_count_ = 0;
  int64_t edge_count_ = 0;
  std::vector<int64_t> site_stride_;    // per axis, for site indexing
  std::vector<int64_t> first_edge_;     // per site, prefix sum of out-degrees
  std::vector<int32_t> coord_scratch_;  // unused; kept for layout stability
};

// Number of edges of B_L in dimension d: d * 2L * (2L+1)^(d-1).
int64_t box_edge_count(Box box);
int64_t box_site_count(Box box);

// Convenience wrappers matching the operation contracts; they build a
// BoxGeometry internally, so prefer the class in loops.
std::vector<std::pair<Site, EdgeId>> neighbors(const Site& s, Box box);
int64_t edge_index(const EdgeId& e, Box box);

Site make_site(std::initializer_list<int32_t> coords);

// (n, 0, ..., 0) in dimension d.
Site axis_site(int32_t d, int32_t n);

// f_i, the i-th axis edge, between (i-1, 0, ..., 0) and (i, 0, ..., 0).
EdgeId axis_edge(int32_t d, int32_t i);

int64_t l1_distance(const Site& a, const Site& b);

}  // namespace fpp
