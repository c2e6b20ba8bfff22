#pragma once

#include <cstdint>
#include <vector>

#include "gmt/domain.hpp"
#include "gmt/lattice.hpp"
#include "gmt/wos.hpp"

namespace gmt {

struct Theta {
  double value = 0.0;
  double se = 0.0;
};

// d-dimensional density mass / diam^d with the standard error propagated
Theta density(double mass, double se, double diam, int d);
inline Theta density(const TargetMass& m, double diam, int d) {
  return density(m.mass, m.se, diam, d);
}

struct BourgainResult {
  double min_mass = 0.0;  // smallest measure of 2B seen from the sampled poles
  double min_se = 0.0;
  Vec min_pole;
  std::vector<Vec> poles;
  std::vector<TargetMass> per_pole;
};

// Minimum over interior poles sampled in B of the harmonic measure of 2B.
// Poles come from rejection sampling in B; if none is found within 1e5
// attempts the ball has no reachable interior and NoInteriorPoint is thrown.
BourgainResult check_bourgain(const Domain& dom, const Ball& b, int n_poles,
                              const WosConfig& cfg);

struct DoublingResult {
  std::vector<double> ratios;  // one per ball: mass(AB) / mass(B)
  std::vector<Vec> poles;
  double max_ratio = 0.0;
};

// Measures the doubling ratio per ball from a pole sampled with
// dist(pole, AB cap boundary) >= alpha * |pole - ball center|. Attribution is
// a partition, so every ratio is >= 1 exactly.
DoublingResult check_doubling(const Domain& dom, const std::vector<Ball>& balls, double alpha,
                              const WosConfig& cfg, double A = 2.0);

struct LogCube {
  CubeId id;
  double sigma = 0.0;  // surface mass from the content estimator
  double omega = 0.0;  // harmonic-measure estimate (floored when zero)
  double se = 0.0;
  bool floored = false;
};

struct LogIntegralResult {
  double value = 0.0;
  std::vector<LogCube> per_cube;  // bottom cubes in (level, index) order
  double flagged_mass = 0.0;      // sigma-fraction of floored cubes
  double omega_q0 = 0.0;          // total mass absorbed in the bottom cubes
  double sigma_q0 = 0.0;          // total surface mass of the bottom cubes
  std::size_t walkers = 0;
  int depth = 0;
};

// Discrete entropy functional of the density omega/sigma over the bottom
// cubes `depth` levels below q0:
//   1 + sum (sigma(Q)/sigma_q0) log(sigma(Q)/omega(Q)) + log(omega_q0/sigma_q0).
// All cube masses come from a single walker pass (absorptions attributed to
// the owning bottom cube through the nearest sample). Zero-count cubes are
// floored at 1/(10 walkers) and flagged. The pole must stay outside
// pole_margin * B_q0, else PoleTooClose.
LogIntegralResult log_integral(const Domain& dom, const CubeLattice& lat, CubeId q0,
                               const Vec& pole, int depth, const WosConfig& cfg,
                               double pole_margin = 4.0);

// exp(-C (l^d / content) exp(C beta_sum / content)): the escape lower bound
// for the measure of a subset with the given content and deviation sum
double hruscev_bound(double ell_q0_d, double content_e, double beta_sum_e, double C);

}  // namespace gmt
