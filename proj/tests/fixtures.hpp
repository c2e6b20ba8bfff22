#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gmt/domain.hpp"
#include "gmt/geometry.hpp"
#include "gmt/rng.hpp"

namespace fx {

// [0,1] x {0}, n points inclusive of both ends
inline gmt::SampledSet segment_cloud(int n) {
  gmt::SampledSet s;
  s.points = gmt::PointCloud(2);
  double h = 1.0 / (n - 1);
  for (int i = 0; i < n; ++i) s.points.add(gmt::Vec(i * h, 0.0));
  s.resolution = h;
  s.ambient_dim = 2;
  s.target_dim = 1;
  s.dist_oracle = [](const gmt::Vec& x) {
    double t = std::clamp(x[0], 0.0, 1.0);
    return std::hypot(x[0] - t, x[1]);
  };
  return s;
}

inline gmt::SampledSet circle_cloud(int n, double r = 1.0, double cx = 0.0, double cy = 0.0) {
  gmt::SampledSet s;
  s.points = gmt::PointCloud(2);
  for (int i = 0; i < n; ++i) {
    double a = 2.0 * gmt::Rng::pi * i / n;
    s.points.add(gmt::Vec(cx + r * std::cos(a), cy + r * std::sin(a)));
  }
  s.resolution = 2.0 * gmt::Rng::pi * r / n;
  s.ambient_dim = 2;
  s.target_dim = 1;
  s.dist_oracle = [=](const gmt::Vec& x) {
    return std::abs(std::hypot(x[0] - cx, x[1] - cy) - r);
  };
  return s;
}

inline double seg_dist(const gmt::Vec& x, gmt::Vec a, gmt::Vec b) {
  gmt::Vec d = b - a;
  double t = std::clamp((x - a).dot(d) / d.norm2(), 0.0, 1.0);
  return (x - (a + d * t)).norm();
}

// unit segments [0,1]x{0} and {0}x[0,1] meeting at the origin
inline gmt::SampledSet corner_cloud(int per_leg) {
  gmt::SampledSet s;
  s.points = gmt::PointCloud(2);
  double h = 1.0 / (per_leg - 1);
  for (int i = 0; i < per_leg; ++i) s.points.add(gmt::Vec(i * h, 0.0));
  for (int i = 1; i < per_leg; ++i) s.points.add(gmt::Vec(0.0, i * h));
  s.resolution = h;
  s.ambient_dim = 2;
  s.target_dim = 1;
  s.dist_oracle = [](const gmt::Vec& x) {
    return std::min(seg_dist(x, gmt::Vec(0, 0), gmt::Vec(1, 0)),
                    seg_dist(x, gmt::Vec(0, 0), gmt::Vec(0, 1)));
  };
  return s;
}

// two unit-length strips at y = +off and y = -off, x in [-1/2, 1/2]
inline gmt::SampledSet parallel_strips(int per_strip, double off) {
  gmt::SampledSet s;
  s.points = gmt::PointCloud(2);
  double h = 1.0 / (per_strip - 1);
  for (int i = 0; i < per_strip; ++i) s.points.add(gmt::Vec(-0.5 + i * h, off));
  for (int i = 0; i < per_strip; ++i) s.points.add(gmt::Vec(-0.5 + i * h, -off));
  s.resolution = h;
  s.ambient_dim = 2;
  s.target_dim = 1;
  s.dist_oracle = [off](const gmt::Vec& x) {
    return std::min(seg_dist(x, gmt::Vec(-0.5, off), gmt::Vec(0.5, off)),
                    seg_dist(x, gmt::Vec(-0.5, -off), gmt::Vec(0.5, -off)));
  };
  return s;
}

// X shape: the lines y = x and y = -x restricted to |x| <= half
inline gmt::SampledSet cross_cloud(int per_leg, double half) {
  gmt::SampledSet s;
  s.points = gmt::PointCloud(2);
  double h = 2.0 * half / (per_leg - 1);
  for (int i = 0; i < per_leg; ++i) {
    double t = -half + i * h;
    s.points.add(gmt::Vec(t, t));
  }
  for (int i = 0; i < per_leg; ++i) {
    double t = -half + i * h;
    if (t != 0.0) s.points.add(gmt::Vec(t, -t));
  }
  s.resolution = h * std::sqrt(2.0);
  s.ambient_dim = 2;
  s.target_dim = 1;
  s.dist_oracle = [half](const gmt::Vec& x) {
    gmt::Vec a(-half, -half), b(half, half), c(-half, half), d(half, -half);
    return std::min(seg_dist(x, a, b), seg_dist(x, c, d));
  };
  return s;
}

// copy of a planar cloud rescaled to unit diameter and rotated; puts
// generator-dependent outer scales and axis alignments into one fixed frame
inline gmt::SampledSet unit_frame(const gmt::SampledSet& s, double angle) {
  const double lam = 1.0 / s.diameter();
  const double c = std::cos(angle), sn = std::sin(angle);
  gmt::SampledSet out;
  out.points = gmt::PointCloud(2);
  out.points.reserve(s.points.size());
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    gmt::Vec p = s.points.get(i) * lam;
    out.points.add(gmt::Vec(c * p[0] - sn * p[1], sn * p[0] + c * p[1]));
  }
  out.resolution = s.resolution * lam;
  out.ambient_dim = s.ambient_dim;
  out.target_dim = s.target_dim;
  return out;
}

// disk of the given radius with an exact boundary metric
inline gmt::Domain disk_domain(double r = 1.0, double cx = 0.0, double cy = 0.0,
                               int nsamp = 2048) {
  gmt::Domain d;
  d.inside = [=](const gmt::Vec& x) { return std::hypot(x[0] - cx, x[1] - cy) < r; };
  d.dist_boundary = [=](const gmt::Vec& x) {
    return std::max(0.0, r - std::hypot(x[0] - cx, x[1] - cy));
  };
  d.bbox = gmt::Box(gmt::Vec(cx - r, cy - r), gmt::Vec(cx + r, cy + r));
  d.boundary_samples = circle_cloud(nsamp, r, cx, cy);
  d.kind = gmt::DomainKind::bounded;
  return d;
}

// upper half-plane; boundary samples cover [-extent, extent] on the axis
inline gmt::Domain half_plane_domain(double extent = 8.0, int nsamp = 2048) {
  gmt::Domain d;
  d.inside = [](const gmt::Vec& x) { return x[1] > 0.0; };
  d.dist_boundary = [](const gmt::Vec& x) { return std::max(0.0, x[1]); };
  d.bbox = gmt::Box(gmt::Vec(-extent, 0.0), gmt::Vec(extent, extent));
  gmt::SampledSet s;
  s.points = gmt::PointCloud(2);
  const double h = 2.0 * extent / (nsamp - 1);
  for (int i = 0; i < nsamp; ++i) s.points.add(gmt::Vec(-extent + i * h, 0.0));
  s.resolution = h;
  s.ambient_dim = 2;
  s.target_dim = 1;
  s.dist_oracle = [](const gmt::Vec& x) { return std::abs(x[1]); };
  d.boundary_samples = std::move(s);
  d.kind = gmt::DomainKind::bounded;
  return d;
}

inline gmt::PointCloud random_cloud(int n, int dim, std::uint64_t seed) {
  gmt::Rng rng = gmt::Rng::stream(seed, 0);
  gmt::PointCloud c(dim);
  for (int i = 0; i < n; ++i) {
    gmt::Vec p = gmt::Vec::zero(dim);
    for (int k = 0; k < dim; ++k) p[k] = rng.unif(-1.0, 1.0);
    c.add(p);
  }
  return c;
}

}  // namespace fx
