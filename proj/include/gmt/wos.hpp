#pragma once

#include <cstdint>
#include <vector>

#include "gmt/common.hpp"
#include "gmt/domain.hpp"
#include "gmt/geometry.hpp"

namespace gmt {

struct WosConfig {
  double shell = 0.0;     // absorption distance; 0 = 1e-4 x boundary scale
  int max_steps = 50000;  // per walker; beyond this the walker counts as escaped
  std::size_t walkers = 10000;
  std::uint64_t base_seed = 1;
  // complement-of-compact domains: walkers beyond twice this radius are
  // restarted on it by exact exterior hitting-kernel resampling (plane only);
  // 0 = 50 x boundary diameter
  double far_field_radius = 0.0;
};

// Boundary region walkers are attributed to: a ball, or an explicit member
// cloud (e.g. the samples of a lattice cube) with a match tolerance.
struct WosTarget {
  int id = 0;
  Ball ball;
  PointCloud members;       // when non-empty the cloud defines the region
  double member_tol = 0.0;  // 0 = twice the shell

  static WosTarget ball_region(int id, const Ball& b) {
    WosTarget t;
    t.id = id;
    t.ball = b;
    return t;
  }
  static WosTarget cloud_region(int id, PointCloud m, double tol = 0.0) {
    WosTarget t;
    t.id = id;
    t.members = std::move(m);
    t.member_tol = tol;
    return t;
  }
};

struct TargetMass {
  int id = 0;
  double mass = 0.0;
  double se = 0.0;  // sqrt(p(1-p)/walkers)
  std::uint64_t count = 0;
};

struct HarmonicEstimate {
  std::vector<TargetMass> masses;  // ascending id, one entry per target
  double other = 0.0;              // absorbed outside every target
  double escaped = 0.0;            // exceeded max_steps (or lost to infinity)
  std::size_t walkers = 0;
  std::uint64_t base_seed = 0;
  double shell = 0.0;
  Vec pole;

  const TargetMass& at(int id) const {
    for (const TargetMass& m : masses)
      if (m.id == id) return m;
    fail(Errc::invalid_argument, "no target with the requested id");
  }
};

// Harmonic measure of the targets seen from x: each walker jumps uniformly on
// the sphere of radius dist_boundary until within the shell, then is
// attributed to the lowest-id target containing its absorption point, or the
// nearest target within twice the shell. Walker i draws from the stream
// mix(base_seed, i), so estimates are bit-identical for every thread count.
HarmonicEstimate wos_measure(const Domain& dom, const Vec& x,
                             const std::vector<WosTarget>& targets, const WosConfig& cfg);

struct GreenEstimate {
  double value = 0.0;
  double se = 0.0;
  double escaped = 0.0;
  std::size_t walkers = 0;
  std::uint64_t base_seed = 0;
  double shell = 0.0;
};

// Green's function via the boundary identity G(pole, query) =
// Phi(query - pole) - E[Phi(X_tau - pole)], walkers started at the query;
// Phi is the fundamental solution (-log|.|/2pi in the plane, 1/(4pi|.|) in
// space). Unbiased up to the shell cutoff.
GreenEstimate wos_green(const Domain& dom, const Vec& pole, const Vec& query,
                        const WosConfig& cfg);

}  // namespace gmt
