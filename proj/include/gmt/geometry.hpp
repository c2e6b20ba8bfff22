#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gmt/common.hpp"

namespace gmt {

// Small fixed-capacity vector; ambient dimension is 2 or 3 everywhere.
struct Vec {
  std::array<double, 3> v{0.0, 0.0, 0.0};
  int n = 2;

  Vec() = default;
  Vec(double x, double y) : v{x, y, 0.0}, n(2) {}
  Vec(double x, double y, double z) : v{x, y, z}, n(3) {}
  static Vec zero(int dim) {
    Vec r;
    r.n = dim;
    return r;
  }

  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

  Vec operator+(const Vec& o) const {
    Vec r = *this;
    for (int i = 0; i < n; ++i) r.v[i] += o.v[i];
    return r;
  }
  Vec operator-(const Vec& o) const {
    Vec r = *this;
    for (int i = 0; i < n; ++i) r.v[i] -= o.v[i];
    return r;
  }
  Vec operator*(double s) const {
    Vec r = *this;
    for (int i = 0; i < n; ++i) r.v[i] *= s;
    return r;
  }
  double dot(const Vec& o) const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += v[i] * o.v[i];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
  Vec normalized() const {
    double m = norm();
    return m > 0 ? *this * (1.0 / m) : *this;
  }
};

inline Vec operator*(double s, const Vec& a) { return a * s; }

struct Ball {
  Vec center;
  double radius = 0.0;

  Ball() = default;
  Ball(Vec c, double r) : center(c), radius(r) {}
  double diameter() const { return 2.0 * radius; }
  bool contains(const Vec& p) const { return (p - center).norm2() <= radius * radius; }
  Ball scaled(double f) const { return Ball(center, radius * f); }
};

// Affine d-plane in ambient dimension n: base point plus orthonormal basis
// rows; the orthonormal complement (normals) is derived on demand.
struct Plane {
  Vec base;
  std::array<Vec, 2> basis{};
  int dim = 1;      // d
  int ambient = 2;  // n

  static Plane line(Vec base, Vec direction);
  static Plane through(Vec base, const std::vector<Vec>& dirs, int ambient);

  std::vector<Vec> normals() const;
  // distance from x to the plane (exact)
  double dist(const Vec& x) const;
  // orthogonal projection of x onto the plane
  Vec project(const Vec& x) const;
};

// Coordinate-planar point storage so kernels can stream one axis at a time.
class PointCloud {
public:
  PointCloud() = default;
  explicit PointCloud(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  std::size_t size() const { return c_[0].size(); }
  bool empty() const { return c_[0].empty(); }

  void reserve(std::size_t n) {
    for (int k = 0; k < dim_; ++k) c_[k].reserve(n);
  }
  void add(const Vec& p) {
    for (int k = 0; k < dim_; ++k) c_[k].push_back(p[k]);
  }
  Vec get(std::size_t i) const {
    Vec p = Vec::zero(dim_);
    for (int k = 0; k < dim_; ++k) p[k] = c_[k][i];
    return p;
  }
  void set(std::size_t i, const Vec& p) {
    for (int k = 0; k < dim_; ++k) c_[k][i] = p[k];
  }
  const std::vector<double>& axis(int k) const { return c_[k]; }
  std::array<const double*, 3> ptrs() const {
    return {c_[0].data(), c_[1].data(), c_[2].data()};
  }

private:
  int dim_ = 2;
  std::array<std::vector<double>, 3> c_;
};

// Exact nearest / range queries over a fixed cloud. Ties on distance resolve
// to the lowest original index regardless of traversal order.
class KdIndex {
public:
  explicit KdIndex(const PointCloud& cloud, std::size_t leaf_size = 48);

  struct Hit {
    std::size_t index = 0;
    double dist = 0.0;
  };
  Hit nearest(const Vec& q) const;
  // points with |p - c| <= r, sorted by distance then index
  std::vector<std::size_t> within(const Ball& b) const;
  std::size_t size() const { return n_; }

private:
  struct Node {
    double lo[3], hi[3];
    std::uint32_t begin, end;
    std::int32_t left = -1, right = -1;
  };
  void build(std::uint32_t node, std::uint32_t begin, std::uint32_t end, std::size_t leaf_size);
  double box_sqdist(const Node& nd, const Vec& q) const;
  void nearest_rec(std::uint32_t node, const Vec& q, double& best, std::size_t& best_idx) const;
  void within_rec(std::uint32_t node, const Ball& b, double r2,
                  std::vector<std::pair<double, std::size_t>>& out) const;

  int dim_;
  std::size_t n_;
  std::array<std::vector<double>, 3> pts_;   // reordered, leaf-contiguous
  std::vector<std::uint32_t> orig_;          // reordered position -> original index
  std::vector<Node> nodes_;
};

// A sampled metric set: the cloud, its sampling resolution, dimensions, and
// optionally an exact distance oracle plus the generator recipe that built it
// (kept for serialization sidecars).
struct SampledSet {
  PointCloud points;
  double resolution = 0.0;
  int ambient_dim = 2;
  int target_dim = 1;
  std::function<double(const Vec&)> dist_oracle;  // exact distance to the underlying set
  std::string oracle_spec;                        // JSON text of the generator, may be empty

  std::size_t size() const { return points.size(); }

  const KdIndex& index() const {
    if (!index_) index_ = std::make_shared<KdIndex>(points);
    return *index_;
  }
  void invalidate_index() { index_.reset(); }

  // distance from x to the set: oracle when present, else nearest sample
  double dist(const Vec& x) const {
    if (dist_oracle) return dist_oracle(x);
    return index().nearest(x).dist;
  }

  // exact diameter of the cloud (convex-hull based in 2D)
  double diameter() const;

private:
  mutable std::shared_ptr<KdIndex> index_;
};

struct NormalizedDistance {
  double value = 0.0;
  bool empty_e = false;
  bool empty_f = false;
};

// d_B(E,F) = (2/diam B) * max(sup_{E cap B} dist(.,F), sup_{F cap B} dist(.,E)),
// sups over samples inside B, distances via oracle when available. An empty
// side contributes 0 and is flagged.
NormalizedDistance normalized_distance(const SampledSet& e, const SampledSet& f, const Ball& b);

// Weighted PCA plane of the given points; weights may be empty (uniform).
// Throws DegenerateInput if fewer than dim+1 points are supplied.
Plane fit_plane_pca(const PointCloud& cloud, const std::vector<std::size_t>& ids,
                    const std::vector<double>& weights, int dim);

double cloud_diameter(const PointCloud& cloud);

}  // namespace gmt
