#include "fpp/lattice.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace fpp {

namespace {

void check_box(Box box) {
  if (box.dim < 2) throw std::domain_error("box dimension must be >= 2");
  if (box.radius < 1) throw std::domain_error("box radius must be >= 1");
}

}  // namespace

int64_t box_site_count(Box box) {
  check_box(box);
  int64_t n = 1;
  for (int32_t a = 0; a < box.dim; ++a) n *= 2 * box.radius + 1;
  return n;
}

int64_t box_edge_count(Box box) {
  check_box(box);
  int64_t per_axis = 2 * static_cast<int64_t>(box.radius);
  for (int32_t a = 0; a < box.dim - 1; ++a) per_axis *= 2 * box.radius + 1;
  return box.dim * per_axis;
}

BoxGeometry::BoxGeometry(Box box) : box_(box) {
  check_box(box);
  site_count_ = box_site_count(box);
  edge_count_ = box_edge_count(box);

  // Lexicographic site order: first coordinate most significant.
  site_stride_.assign(static_cast<size_t>(box.dim), 1);
  const int64_t side = 2 * box.radius + 1;
  for (int32_t a = box.dim - 2; a >= 0; --a)
    site_stride_[static_cast<size_t>(a)] =
        site_stride_[static_cast<size_t>(a + 1)] * side;

  // Edge order is lexicographic on (base coords, axis): enumerate sites in
  // index order and prefix-sum their out-degrees (site has an edge along
  // axis a iff coord[a] < L).
  first_edge_.assign(static_cast<size_t>(site_count_) + 1, 0);
  int64_t acc = 0;
  Site s;
  s.coords.assign(static_cast<size_t>(box.dim), -box.radius);
  for (int64_t idx = 0; idx < site_count_; ++idx) {
    first_edge_[static_cast<size_t>(idx)] = acc;
    for (int32_t a = 0; a < box.dim; ++a)
      if (s.coords[static_cast<size_t>(a)] < box.radius) ++acc;
    // advance coords in lexicographic order (last coordinate fastest)
    for (int32_t a = box.dim - 1; a >= 0; --a) {
      if (++s.coords[static_cast<size_t>(a)] <= box.radius) break;
      s.coords[static_cast<size_t>(a)] = -box.radius;
    }
  }
  first_edge_[static_cast<size_t>(site_count_)] = acc;
}

bool BoxGeometry::contains(const Site& s) const {
  if (static_cast<int32_t>(s.coords.size()) != box_.dim) return false;
  for (int32_t c : s.coords)
    if (c < -box_.radius || c > box_.radius) return false;
  return true;
}

bool BoxGeometry::contains_edge(const EdgeId& e) const {
  if (!contains(e.base)) return false;
  if (e.axis < 0 || e.axis >= box_.dim) return false;
  return e.base.coords[static_cast<size_t>(e.axis)] < box_.radius;
}

int64_t BoxGeometry::site_index(const Site& s) const {
  if (!contains(s)) throw std::domain_error("site outside box");
  int64_t idx = 0;
  for (int32_t a = 0; a < box_.dim; ++a)
    idx += (s.coords[static_cast<size_t>(a)] + box_.radius) *
           site_stride_[static_cast<size_t>(a)];
  return idx;
}

Site BoxGeometry::site_from_index(int64_t idx) const {
  if (idx < 0 || idx >= site_count_)
    throw std::domain_error("site index out of range");
  Site s;
  s.coords.resize(static_cast<size_t>(box_.dim));
  for (int32_t a = 0; a < box_.dim; ++a) {
    int64_t q = idx / site_stride_[static_cast<size_t>(a)];
    idx -= q * site_stride_[static_cast<size_t>(a)];
    s.coords[static_cast<size_t>(a)] = static_cast<int32_t>(q) - box_.radius;
  }
  return s;
}

int64_t BoxGeometry::edge_index(const EdgeId& e) const {
  if (!contains_edge(e)) throw std::domain_error("edge not fully inside box");
  int64_t base_idx = site_index(e.base);
  int64_t off = 0;
  for (int32_t a = 0; a < e.axis; ++a)
    if (e.base.coords[static_cast<size_t>(a)] < box_.radius) ++off;
  return first_edge_[static_cast<size_t>(base_idx)] + off;
}

EdgeId BoxGeometry::edge_from_index(int64_t idx) const {
  if (idx < 0 || idx >= edge_count_)
    throw std::domain_error("edge index out of range");
  // binary search the prefix-sum table for the owning base site
  int64_t lo = 0, hi = site_count_;
  while (hi - lo > 1) {
    int64_t mid = lo + (hi - lo) / 2;
    if (first_edge_[static_cast<size_t>(mid)] <= idx)
      lo = mid;
    else
      hi = mid;
  }
  EdgeId e;
  e.base = site_from_index(lo);
  int64_t off = idx - first_edge_[static_cast<size_t>(lo)];
  for (int32_t a = 0; a < box_.dim; ++a) {
    if (e.base.coords[static_cast<size_t>(a)] < box_.radius) {
      if (off == 0) {
        e.axis = a;
        return e;
      }
      --off;
    }
  }
  throw std::logic_error("edge_from_index: inconsistent prefix table");
}

std::vector<std::pair<Site, EdgeId>> BoxGeometry::neighbors(
    const Site& s) const {
  if (!contains(s)) throw std::domain_error("site outside box");
  std::vector<std::pair<Site, EdgeId>> out;
  out.reserve(static_cast<size_t>(2 * box_.dim));
  for (int32_t a = 0; a < box_.dim; ++a) {
    int32_t c = s.coords[static_cast<size_t>(a)];
    if (c > -box_.radius) {
      Site t = s;
      --t.coords[static_cast<size_t>(a)];
      out.emplace_back(t, EdgeId{t, a});  // t is the smaller endpoint
    }
    if (c < box_.radius) {
      Site t = s;
      ++t.coords[static_cast<size_t>(a)];
      out.emplace_back(t, EdgeId{s, a});
    }
  }
  return out;
}

int BoxGeometry::neighbor_indices(int64_t site_idx, int64_t* out_sites,
                                  int64_t* out_edges) const {
  // Edge offset of (base, axis a) within base's out-edges is the number of
  // axes b < a with base.coord[b] < L.  For the minus direction the base is
  // the neighbor, which agrees with this site on all axes below a, so the
  // same running prefix count applies to both directions.
  int n = 0;
  int64_t rem = site_idx;
  int64_t prefix = 0;
  const int64_t top = 2 * static_cast<int64_t>(box_.radius);  // digit of +L
  for (int32_t a = 0; a < box_.dim; ++a) {
    const int64_t stride = site_stride_[static_cast<size_t>(a)];
    const int64_t digit = rem / stride;  // coord[a] + L
    rem -= digit * stride;
    if (digit > 0) {
      const int64_t t = site_idx - stride;
      out_sites[n] = t;
      out_edges[n] = first_edge_[static_cast<size_t>(t)] + prefix;
      ++n;
    }
    if (digit < top) {
      out_sites[n] = site_idx + stride;
      out_edges[n] = first_edge_[static_cast<size_t>(site_idx)] + prefix;
      ++n;
      ++prefix;
    }
  }
  return n;
}

std::vector<std::pair<Site, EdgeId>> neighbors(const Site& s, Box box) {
  return BoxGeometry(box).neighbors(s);
}

int64_t edge_index(const EdgeId& e, Box box) {
  return BoxGeometry(box).edge_index(e);
}

Site make_site(std::initializer_list<int32_t> coords) {
  Site s;
  s.coords.assign(coords.begin(), coords.end());
  return s;
}

Site axis_site(int32_t d, int32_t n) {
  Site s;
  s.coords.assign(static_cast<size_t>(d), 0);
  s.coords[0] = n;
  return s;
}

EdgeId axis_edge(int32_t d, int32_t i) {
  EdgeId e;
  e.base = axis_site(d, i - 1);
  e.axis = 0;
  return e;
}

int64_t l1_distance(const Site& a, const Site& b) {
  int64_t d = 0;
  for (size_t i = 0; i < a.coords.size(); ++i)
    d += std::abs(static_cast<int64_t>(a.coords[i]) - b.coords[i]);
  return d;
}

}  // namespace fpp
