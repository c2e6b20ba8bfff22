#include "gmt/content.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gmt/simd.hpp"

namespace gmt {

namespace {

struct ContentWork {
  const std::array<const double*, 3>* coords;
  int dim;
  int d;
  std::vector<std::uint32_t>* idx;
};

double cell_cost(double diag2, int d) {
  if (d == 1) return std::sqrt(diag2);
  if (d == 2) return diag2;
  return std::pow(diag2, 0.5 * d);
}

// Exact cheapest keep-or-split dyadic cover of the points in idx[begin,end).
// The cell is centered at `center` with half-width `half`; kept cells cost
// (bbox diameter of their samples)^d.
double cover_cost(ContentWork& w, std::size_t begin, std::size_t end, const double* center,
                  double half, int depth) {
  if (begin == end) return 0.0;
  const auto& c = *w.coords;
  auto& idx = *w.idx;

  double lo[3], hi[3];
  for (int k = 0; k < w.dim; ++k) {
    lo[k] = hi[k] = c[k][idx[begin]];
  }
  for (std::size_t i = begin + 1; i < end; ++i) {
    for (int k = 0; k < w.dim; ++k) {
      double v = c[k][idx[i]];
      lo[k] = std::min(lo[k], v);
      hi[k] = std::max(hi[k], v);
    }
  }
  double diag2 = 0;
  for (int k = 0; k < w.dim; ++k) diag2 += (hi[k] - lo[k]) * (hi[k] - lo[k]);
  if (diag2 == 0.0) return 0.0;
  const double whole = cell_cost(diag2, w.d);
  if (depth == 0 || end - begin == 1) return whole;

  // quadtree/octree split: partition the span axis by axis
  std::size_t bounds[9];
  bounds[0] = begin;
  std::size_t nspans = 1;
  for (int k = 0; k < w.dim; ++k) {
    const double mid = center[k];
    std::size_t nb = 0;
    std::size_t newb[9];
    for (std::size_t s = 0; s < nspans; ++s) {
      std::size_t b = bounds[s];
      std::size_t e = (s + 1 < nspans) ? bounds[s + 1] : end;
      auto pivot = std::partition(idx.begin() + b, idx.begin() + e,
                                  [&](std::uint32_t i) { return c[k][i] < mid; });
      newb[nb++] = b;
      newb[nb++] = static_cast<std::size_t>(pivot - idx.begin());
    }
    for (std::size_t s = 0; s < nb; ++s) bounds[s] = newb[s];
    nspans = nb;
  }

  double split = 0;
  const double h2 = half * 0.5;
  for (std::size_t s = 0; s < nspans; ++s) {
    std::size_t b = bounds[s];
    std::size_t e = (s + 1 < nspans) ? bounds[s + 1] : end;
    if (b == e) continue;
    double child_center[3];
    for (int k = 0; k < w.dim; ++k) {
      // axis 0 was partitioned first, so its low/high choice is the top bit
      bool high = (s >> (w.dim - 1 - k)) & 1u;
      child_center[k] = center[k] + (high ? h2 : -h2);
    }
    split += cover_cost(w, b, e, child_center, h2, depth - 1);
    if (split >= whole) return whole;  // cannot beat keeping the cell
  }
  return std::min(whole, split);
}

// Depth at which cells stay >= 4x the sampling resolution; below that scale
// every sample would sit alone in its own zero-cost cell and the cover would
// collapse to dust instead of following the underlying set.
int clamp_depth(int depth, double r, double resolution) {
  if (!(resolution > 0.0)) return depth;
  const double lim = std::log2(r / (2.0 * resolution));
  if (!(lim > 0.0)) return 0;
  return std::min(depth, static_cast<int>(lim));
}

}  // namespace

double content_of_subset(const std::array<const double*, 3>& coords, int dim,
                         std::vector<std::uint32_t>& idx, double r, int d, int depth) {
  if (idx.empty()) return 0.0;
  ContentWork w{&coords, dim, d, &idx};
  double center[3] = {0, 0, 0};
  return cover_cost(w, 0, idx.size(), center, r, depth);
}

double hausdorff_content(const SampledSet& s, const Ball& b, int d, int depth) {
  if (!(b.radius > 0)) fail(Errc::invalid_argument, "content needs a positive radius");
  auto ids = s.index().within(b);
  if (ids.empty()) return 0.0;
  const int n = s.ambient_dim;
  std::array<std::vector<double>, 3> rel;
  for (int k = 0; k < n; ++k) {
    rel[k].resize(ids.size());
    const auto& ax = s.points.axis(k);
    for (std::size_t i = 0; i < ids.size(); ++i) rel[k][i] = ax[ids[i]] - b.center[k];
  }
  std::array<const double*, 3> ptrs{rel[0].data(), rel[1].data(), rel[2].data()};
  std::vector<std::uint32_t> idx(ids.size());
  std::iota(idx.begin(), idx.end(), 0u);
  return content_of_subset(ptrs, n, idx, b.radius, d, clamp_depth(depth, b.radius, s.resolution));
}

DistProfile plane_distance_stats(const SampledSet& s, const Ball& b, const Plane& l, int d,
                                 const ProfileOptions& opts) {
  if (!(b.radius > 0)) fail(Errc::invalid_argument, "profile needs a positive radius");
  DistProfile prof;
  prof.r = b.radius;
  const double r = b.radius;
  const int n = s.ambient_dim;

  double t_min = std::max({opts.min_t, s.resolution > 0 ? s.resolution / r : 0.0, 1e-9});
  t_min = std::min(t_min, 1.0);
  prof.t_min = t_min;
  const int nodes = std::max(2, opts.t_nodes);
  prof.t.resize(nodes);
  const double ratio = std::log(1.0 / t_min) / (nodes - 1);
  for (int i = 0; i < nodes; ++i) prof.t[i] = t_min * std::exp(ratio * i);
  prof.t.back() = 1.0;
  prof.content.assign(nodes, 0.0);

  auto ids = s.index().within(b);
  prof.points = ids.size();
  if (ids.empty()) return prof;
  const std::size_t m = ids.size();

  // frame coordinates: tangential axes first, then normal axes
  const auto norms = l.normals();
  const int nn = static_cast<int>(norms.size());
  std::array<std::vector<double>, 3> frame;
  for (int k = 0; k < n; ++k) frame[k].resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    Vec p = s.points.get(ids[i]) - b.center;
    for (int k = 0; k < l.dim; ++k) frame[k][i] = p.dot(l.basis[k]);
    for (int j = 0; j < nn; ++j) frame[l.dim + j][i] = p.dot(norms[j]);
  }

  // squared plane distances via the normal coordinates
  Vec rel = l.base - b.center;
  double q[3] = {0, 0, 0};
  for (int j = 0; j < nn; ++j) q[j] = rel.dot(norms[j]);
  const double* nptr[3] = {frame[l.dim].data(), nn > 1 ? frame[l.dim + 1].data() : nullptr,
                           nullptr};
  std::vector<double> dist2(m);
  simd::kernels().sqdist_batch(nptr, m, nn, q, dist2.data());

  // order by distance descending (ties by index) so each threshold is a prefix
  std::vector<std::uint32_t> order(m);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t c) {
    if (dist2[a] != dist2[c]) return dist2[a] > dist2[c];
    return a < c;
  });
  std::vector<double> sorted_d2(m);
  for (std::size_t i = 0; i < m; ++i) sorted_d2[i] = dist2[order[i]];

  std::array<const double*, 3> fptrs{frame[0].data(), n > 1 ? frame[1].data() : nullptr,
                                     n > 2 ? frame[2].data() : nullptr};
  std::vector<std::uint32_t> work;
  const int depth = clamp_depth(opts.depth, r, s.resolution);
  for (int ti = 0; ti < nodes; ++ti) {
    const double thr = prof.t[ti] * r;
    const double thr2 = thr * thr;
    // count of entries with dist2 > thr2 in the descending array
    auto it = std::lower_bound(sorted_d2.begin(), sorted_d2.end(), thr2,
                               [](double val, double key) { return val > key; });
    const std::size_t cnt = static_cast<std::size_t>(it - sorted_d2.begin());
    if (cnt == 0) break;  // profile is non-increasing; later thresholds stay empty
    work.assign(order.begin(), order.begin() + cnt);
    prof.content[ti] = content_of_subset(fptrs, n, work, r, d, depth);
  }
  return prof;
}

}  // namespace gmt
