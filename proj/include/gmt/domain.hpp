#pragma once

#include <functional>
#include <string>

#include "gmt/geometry.hpp"

namespace gmt {

// Axis-aligned box.
struct Box {
  Vec lo;
  Vec hi;

  Box() = default;
  Box(Vec l, Vec h) : lo(l), hi(h) {}

  bool contains(const Vec& p) const {
    for (int i = 0; i < lo.n; ++i) {
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    }
    return true;
  }
  Vec center() const { return (lo + hi) * 0.5; }
  double diagonal() const { return (hi - lo).norm(); }
};

enum class DomainKind { bounded, complement_of_compact };

// A domain in the form walk-on-spheres wants it: membership predicate,
// distance to the boundary, bounding box of the boundary, and a sampled
// boundary set. dist_boundary(x) is positive exactly on the domain and zero
// off it; it is exact unless dist_is_lower_bound is set (boundaries known
// only as point clouds certify a lower bound).
struct Domain {
  std::function<bool(const Vec&)> inside;
  std::function<double(const Vec&)> dist_boundary;
  bool dist_is_lower_bound = false;
  Box bbox;
  SampledSet boundary_samples;
  DomainKind kind = DomainKind::bounded;
  std::string spec;  // JSON recipe that rebuilds the domain, may be empty
};

}  // namespace gmt
