#include "gmt/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gmt/simd.hpp"

namespace gmt {

// ---- Plane ----------------------------------------------------------------

Plane Plane::line(Vec base, Vec direction) {
  Plane p;
  p.base = base;
  p.basis[0] = direction.normalized();
  p.dim = 1;
  p.ambient = base.n;
  return p;
}

Plane Plane::through(Vec base, const std::vector<Vec>& dirs, int ambient) {
  Plane p;
  p.base = base;
  p.base.n = ambient;
  p.dim = static_cast<int>(dirs.size());
  p.ambient = ambient;
  int k = 0;
  for (const Vec& dir : dirs) {
    Vec w = dir;
    w.n = ambient;
    for (int j = 0; j < k; ++j) w = w - p.basis[j] * p.basis[j].dot(w);
    double m = w.norm();
    if (m < 1e-14) fail(Errc::degenerate_input, "plane directions are linearly dependent");
    p.basis[k++] = w * (1.0 / m);
  }
  return p;
}

std::vector<Vec> Plane::normals() const {
  std::vector<Vec> out;
  if (ambient == 2 && dim == 1) {
    out.push_back(Vec(-basis[0][1], basis[0][0]));
    return out;
  }
  if (ambient == 3 && dim == 2) {
    const Vec &a = basis[0], &b = basis[1];
    Vec c(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
    out.push_back(c.normalized());
    return out;
  }
  // generic complement via Gram-Schmidt against coordinate axes
  for (int axis = 0; axis < ambient && static_cast<int>(out.size()) < ambient - dim; ++axis) {
    Vec w = Vec::zero(ambient);
    w[axis] = 1.0;
    for (int j = 0; j < dim; ++j) w = w - basis[j] * basis[j].dot(w);
    for (const Vec& u : out) w = w - u * u.dot(w);
    double m = w.norm();
    if (m > 1e-10) out.push_back(w * (1.0 / m));
  }
  return out;
}

double Plane::dist(const Vec& x) const {
  Vec r = x - base;
  double s = r.norm2();
  for (int k = 0; k < dim; ++k) {
    double t = r.dot(basis[k]);
    s -= t * t;
  }
  return std::sqrt(std::max(0.0, s));
}

Vec Plane::project(const Vec& x) const {
  Vec r = x - base;
  Vec p = base;
  for (int k = 0; k < dim; ++k) p = p + basis[k] * r.dot(basis[k]);
  return p;
}

// ---- KdIndex ---------------------------------------------------------------

KdIndex::KdIndex(const PointCloud& cloud, std::size_t leaf_size)
    : dim_(cloud.dim()), n_(cloud.size()) {
  orig_.resize(n_);
  std::iota(orig_.begin(), orig_.end(), 0u);
  for (int k = 0; k < dim_; ++k) pts_[k] = cloud.axis(k);
  if (n_ == 0) return;
  nodes_.reserve(2 * n_ / std::max<std::size_t>(1, leaf_size) + 8);
  nodes_.emplace_back();
  build(0, 0, static_cast<std::uint32_t>(n_), std::max<std::size_t>(1, leaf_size));
}

void KdIndex::build(std::uint32_t node, std::uint32_t begin, std::uint32_t end,
                    std::size_t leaf_size) {
  Node& nd0 = nodes_[node];
  nd0.begin = begin;
  nd0.end = end;
  for (int k = 0; k < 3; ++k) {
    nd0.lo[k] = 0;
    nd0.hi[k] = 0;
  }
  for (int k = 0; k < dim_; ++k) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::uint32_t i = begin; i < end; ++i) {
      lo = std::min(lo, pts_[k][i]);
      hi = std::max(hi, pts_[k][i]);
    }
    nd0.lo[k] = lo;
    nd0.hi[k] = hi;
  }
  if (end - begin <= leaf_size) return;

  int axis = 0;
  double widest = -1;
  for (int k = 0; k < dim_; ++k) {
    double w = nd0.hi[k] - nd0.lo[k];
    if (w > widest) {
      widest = w;
      axis = k;
    }
  }
  if (widest <= 0) return;  // all points coincide

  std::uint32_t mid = begin + (end - begin) / 2;
  // sort the range's permutation by (coordinate, original index) around mid
  std::vector<std::uint32_t> perm(end - begin);
  std::iota(perm.begin(), perm.end(), begin);
  std::nth_element(perm.begin(), perm.begin() + (mid - begin), perm.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     double ca = pts_[axis][a], cb = pts_[axis][b];
                     if (ca != cb) return ca < cb;
                     return orig_[a] < orig_[b];
                   });
  // apply the permutation to the stored arrays over [begin, end)
  std::array<std::vector<double>, 3> tmp;
  std::vector<std::uint32_t> tmpo(end - begin);
  for (int k = 0; k < dim_; ++k) {
    tmp[k].resize(end - begin);
    for (std::uint32_t i = 0; i < end - begin; ++i) tmp[k][i] = pts_[k][perm[i]];
  }
  for (std::uint32_t i = 0; i < end - begin; ++i) tmpo[i] = orig_[perm[i]];
  for (int k = 0; k < dim_; ++k)
    std::copy(tmp[k].begin(), tmp[k].end(), pts_[k].begin() + begin);
  std::copy(tmpo.begin(), tmpo.end(), orig_.begin() + begin);

  std::int32_t li = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();
  nodes_.emplace_back();
  nodes_[node].left = li;
  nodes_[node].right = li + 1;
  build(li, begin, mid, leaf_size);
  build(li + 1, mid, end, leaf_size);
}

double KdIndex::box_sqdist(const Node& nd, const Vec& q) const {
  double s = 0;
  for (int k = 0; k < dim_; ++k) {
    double d = 0;
    if (q[k] < nd.lo[k]) d = nd.lo[k] - q[k];
    else if (q[k] > nd.hi[k]) d = q[k] - nd.hi[k];
    s += d * d;
  }
  return s;
}

void KdIndex::nearest_rec(std::uint32_t node, const Vec& q, double& best,
                          std::size_t& best_idx) const {
  const Node& nd = nodes_[node];
  if (nd.left < 0) {
    const std::size_t m = nd.end - nd.begin;
    double buf[64];
    const double* coords[3] = {pts_[0].data() + nd.begin, pts_[1].data() + nd.begin,
                               pts_[2].data() + nd.begin};
    double q3[3] = {q[0], dim_ > 1 ? q[1] : 0.0, dim_ > 2 ? q[2] : 0.0};
    simd::kernels().sqdist_batch(coords, m, dim_, q3, buf);
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t oi = orig_[nd.begin + i];
      if (buf[i] < best || (buf[i] == best && oi < best_idx)) {
        best = buf[i];
        best_idx = oi;
      }
    }
    return;
  }
  double dl = box_sqdist(nodes_[nd.left], q);
  double dr = box_sqdist(nodes_[nd.right], q);
  std::uint32_t first = nd.left, second = nd.right;
  double dfirst = dl, dsecond = dr;
  if (dr < dl) {
    std::swap(first, second);
    std::swap(dfirst, dsecond);
  }
  if (dfirst <= best) nearest_rec(first, q, best, best_idx);
  if (dsecond <= best) nearest_rec(second, q, best, best_idx);
}

KdIndex::Hit KdIndex::nearest(const Vec& q) const {
  if (n_ == 0) fail(Errc::degenerate_input, "nearest query on empty cloud");
  double best = std::numeric_limits<double>::infinity();
  std::size_t idx = n_;
  nearest_rec(0, q, best, idx);
  return Hit{idx, std::sqrt(best)};
}

void KdIndex::within_rec(std::uint32_t node, const Ball& b, double r2,
                         std::vector<std::pair<double, std::size_t>>& out) const {
  const Node& nd = nodes_[node];
  if (box_sqdist(nd, b.center) > r2) return;
  if (nd.left < 0) {
    const std::size_t m = nd.end - nd.begin;
    double buf[64];
    const double* coords[3] = {pts_[0].data() + nd.begin, pts_[1].data() + nd.begin,
                               pts_[2].data() + nd.begin};
    double q3[3] = {b.center[0], dim_ > 1 ? b.center[1] : 0.0, dim_ > 2 ? b.center[2] : 0.0};
    simd::kernels().sqdist_batch(coords, m, dim_, q3, buf);
    for (std::size_t i = 0; i < m; ++i)
      if (buf[i] <= r2) out.push_back({buf[i], orig_[nd.begin + i]});
    return;
  }
  within_rec(nd.left, b, r2, out);
  within_rec(nd.right, b, r2, out);
}

std::vector<std::size_t> KdIndex::within(const Ball& b) const {
  std::vector<std::size_t> out;
  if (n_ == 0) return out;
  std::vector<std::pair<double, std::size_t>> hits;
  within_rec(0, b, b.radius * b.radius, hits);
  std::sort(hits.begin(), hits.end());
  out.reserve(hits.size());
  for (auto& h : hits) out.push_back(h.second);
  return out;
}

// ---- diameter --------------------------------------------------------------

namespace {

double brute_diameter(const std::vector<Vec>& p) {
  double best = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) best = std::max(best, (p[i] - p[j]).norm2());
  return std::sqrt(best);
}

// Andrew monotone chain, 2D
std::vector<Vec> convex_hull_2d(std::vector<Vec> p) {
  std::sort(p.begin(), p.end(), [](const Vec& a, const Vec& b) {
    if (a[0] != b[0]) return a[0] < b[0];
    return a[1] < b[1];
  });
  p.erase(std::unique(p.begin(), p.end(),
                      [](const Vec& a, const Vec& b) { return a[0] == b[0] && a[1] == b[1]; }),
          p.end());
  if (p.size() < 3) return p;
  auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<Vec> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

// exact farthest pair: box tree plus branch-and-bound on node pairs
struct FpNode {
  double lo[3], hi[3];
  std::size_t begin = 0, end = 0;
  int left = -1, right = -1;
};

struct FpTree {
  std::vector<FpNode> nodes;
  std::vector<Vec> pts;
  int dim;

  int build(std::size_t b, std::size_t e) {
    FpNode nd;
    nd.begin = b;
    nd.end = e;
    for (int k = 0; k < 3; ++k) {
      nd.lo[k] = std::numeric_limits<double>::infinity();
      nd.hi[k] = -std::numeric_limits<double>::infinity();
    }
    for (std::size_t i = b; i < e; ++i)
      for (int k = 0; k < dim; ++k) {
        nd.lo[k] = std::min(nd.lo[k], pts[i][k]);
        nd.hi[k] = std::max(nd.hi[k], pts[i][k]);
      }
    int id = static_cast<int>(nodes.size());
    nodes.push_back(nd);
    if (e - b > 32) {
      int axis = 0;
      double ext = -1;
      for (int k = 0; k < dim; ++k)
        if (nd.hi[k] - nd.lo[k] > ext) {
          ext = nd.hi[k] - nd.lo[k];
          axis = k;
        }
      if (ext > 0) {
        std::size_t mid = (b + e) / 2;
        std::nth_element(pts.begin() + b, pts.begin() + mid, pts.begin() + e,
                         [axis](const Vec& x, const Vec& y) { return x[axis] < y[axis]; });
        int l = build(b, mid);
        int r = build(mid, e);
        nodes[static_cast<std::size_t>(id)].left = l;
        nodes[static_cast<std::size_t>(id)].right = r;
      }
    }
    return id;
  }

  double box_bound2(const FpNode& a, const FpNode& b) const {
    double s = 0;
    for (int k = 0; k < dim; ++k) {
      double d = std::max(a.hi[k] - b.lo[k], b.hi[k] - a.lo[k]);
      s += d * d;
    }
    return s;
  }

  void rec(int ia, int ib, double& best2) const {
    const FpNode& a = nodes[static_cast<std::size_t>(ia)];
    const FpNode& b = nodes[static_cast<std::size_t>(ib)];
    if (box_bound2(a, b) <= best2) return;
    if (a.left < 0 && b.left < 0) {
      for (std::size_t i = a.begin; i < a.end; ++i) {
        std::size_t j0 = ia == ib ? i + 1 : b.begin;
        for (std::size_t j = j0; j < b.end; ++j)
          best2 = std::max(best2, (pts[i] - pts[j]).norm2());
      }
      return;
    }
    if (ia == ib) {
      rec(a.left, a.left, best2);
      rec(a.left, a.right, best2);
      rec(a.right, a.right, best2);
      return;
    }
    // split the node with the larger extent
    bool split_a = b.left < 0;
    if (a.left >= 0 && b.left >= 0) {
      double ea = 0, eb = 0;
      for (int k = 0; k < dim; ++k) {
        ea += (a.hi[k] - a.lo[k]) * (a.hi[k] - a.lo[k]);
        eb += (b.hi[k] - b.lo[k]) * (b.hi[k] - b.lo[k]);
      }
      split_a = ea >= eb;
    }
    if (split_a) {
      rec(a.left, ib, best2);
      rec(a.right, ib, best2);
    } else {
      rec(ia, b.left, best2);
      rec(ia, b.right, best2);
    }
  }
};

}  // namespace

double cloud_diameter(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  if (n < 2) return 0.0;
  std::vector<Vec> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = cloud.get(i);
  if (n <= 2048) return brute_diameter(p);
  if (cloud.dim() == 2) return brute_diameter(convex_hull_2d(std::move(p)));

  // seed with farthest-point sweeps, then certify by branch and bound
  double best2 = 0;
  std::size_t cur = 0;
  for (int round = 0; round < 8; ++round) {
    double far = -1;
    std::size_t fi = cur;
    for (std::size_t i = 0; i < n; ++i) {
      double d = (p[i] - p[cur]).norm2();
      if (d > far) {
        far = d;
        fi = i;
      }
    }
    best2 = std::max(best2, far);
    cur = fi;
  }
  FpTree tree;
  tree.pts = std::move(p);
  tree.dim = cloud.dim();
  tree.build(0, n);
  tree.rec(0, 0, best2);
  return std::sqrt(best2);
}

double SampledSet::diameter() const { return cloud_diameter(points); }

// ---- normalized distance ---------------------------------------------------

NormalizedDistance normalized_distance(const SampledSet& e, const SampledSet& f, const Ball& b) {
  if (!(b.radius > 0)) fail(Errc::invalid_argument, "normalized_distance needs diam B > 0");
  NormalizedDistance out;
  auto side = [&](const SampledSet& from, const SampledSet& to, bool& empty_flag) {
    if (from.size() == 0) {
      empty_flag = true;
      return 0.0;
    }
    auto ids = from.index().within(b);
    if (ids.empty()) {
      empty_flag = true;
      return 0.0;
    }
    double sup = 0.0;
    for (std::size_t i : ids) sup = std::max(sup, to.dist(from.points.get(i)));
    return sup;
  };
  double sup_e = side(e, f, out.empty_e);
  double sup_f = side(f, e, out.empty_f);
  out.value = std::max(sup_e, sup_f) / b.radius;
  return out;
}

// ---- PCA plane fit ----------------------------------------------------------

Plane fit_plane_pca(const PointCloud& cloud, const std::vector<std::size_t>& ids,
                    const std::vector<double>& weights, int dim) {
  const int n = cloud.dim();
  if (ids.size() < static_cast<std::size_t>(dim) + 1)
    fail(Errc::degenerate_input, "plane fit needs at least dim+1 points");
  if (!weights.empty() && weights.size() != ids.size())
    fail(Errc::invalid_argument, "weight count mismatch");
  if (dim < 1 || dim > n - 1) fail(Errc::invalid_argument, "plane fit dimension out of range");

  // gather the subset into contiguous arrays for the moments kernel
  PointCloud sub(n);
  sub.reserve(ids.size());
  for (std::size_t i : ids) sub.add(cloud.get(i));
  auto ptrs = sub.ptrs();
  double sw = 0, swx[3] = {0, 0, 0}, swxx[6] = {0, 0, 0, 0, 0, 0};
  simd::kernels().moments(ptrs.data(), ids.size(), n, weights.empty() ? nullptr : weights.data(),
                          &sw, swx, swxx);
  if (!(sw > 0)) fail(Errc::degenerate_input, "plane fit weights sum to zero");

  double mean[3] = {0, 0, 0};
  for (int c = 0; c < n; ++c) mean[c] = swx[c] / sw;
  double cov[3][3] = {};
  int p = 0;
  for (int c = 0; c < n; ++c)
    for (int c2 = c; c2 < n; ++c2) {
      double v = swxx[p++] / sw - mean[c] * mean[c2];
      cov[c][c2] = v;
      cov[c2][c] = v;
    }

  // eigenvalues ascending; take the top `dim` directions
  std::vector<Vec> dirs;
  auto push_dir = [&](const double* v) {
    Vec w = Vec::zero(n);
    for (int c = 0; c < n; ++c) w[c] = v[c];
    // deterministic sign: largest-magnitude component positive
    int arg = 0;
    for (int c = 1; c < n; ++c)
      if (std::abs(w[c]) > std::abs(w[arg])) arg = c;
    if (w[arg] < 0) w = w * -1.0;
    dirs.push_back(w);
  };
  if (n == 2) {
    Eigen::Matrix2d m;
    m << cov[0][0], cov[0][1], cov[1][0], cov[1][1];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
    for (int k = 0; k < dim; ++k) {
      Eigen::Vector2d v = es.eigenvectors().col(1 - k);
      double raw[3] = {v(0), v(1), 0.0};
      push_dir(raw);
    }
  } else {
    Eigen::Matrix3d m;
    for (int c = 0; c < 3; ++c)
      for (int c2 = 0; c2 < 3; ++c2) m(c, c2) = cov[c][c2];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m);
    for (int k = 0; k < dim; ++k) {
      Eigen::Vector3d v = es.eigenvectors().col(2 - k);
      double raw[3] = {v(0), v(1), v(2)};
      push_dir(raw);
    }
  }
  Vec base = Vec::zero(n);
  for (int c = 0; c < n; ++c) base[c] = mean[c];
  return Plane::through(base, dirs, n);
}

}  // namespace gmt
