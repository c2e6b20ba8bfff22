#pragma once

#include <vector>

#include "gmt/content.hpp"
#include "gmt/geometry.hpp"
#include "gmt/lattice.hpp"

namespace gmt {

// beta_E^{d,p}(B, L) = (r^{-d} * integral_0^1 content{x in B cap E : dist(x,L) > t r} t^{p-1} dt)^{1/p}
// on the geometric t-grid of plane_distance_stats; below the sampling scale
// the profile is clamped to its first value and that head integrates in
// closed form. Empty B cap E gives 0.
double beta_content(const SampledSet& S, const Ball& B, const Plane& L, int d, double p,
                    const ProfileOptions& opts = {});

struct BetaInfResult {
  double beta = 0.0;
  Plane plane;     // best plane found
  int evals = 0;   // objective evaluations spent
  bool degenerate = false;  // fewer than d+1 points in B
};

// Upper bound on inf_L beta_content(S,B,L,d,p): principal-component fit to
// density-weighted samples in B, refined by derivative-free coordinate search
// (frame rotations plus base translation) until the relative improvement
// drops below 1e-6 or `search_budget` objective evaluations are spent.
BetaInfResult beta_inf(const SampledSet& S, const Ball& B, int d, double p, int search_budget,
                       const ProfileOptions& opts = {});

struct BilateralResult {
  double bbeta = 0.0;
  Plane plane;
  bool one_sided = false;  // B cap S was empty; plane constrained through the center
  int evals = 0;
};

// Bilateral beta: minimizes d_B(S, P) over affine planes P of dimension
// S.target_dim, where P enters as a fine sample grid within 2B carrying the
// exact plane distance. With no samples in B the value is the one-sided
// sup over P cap B of dist(., S), minimized over planes through the center.
BilateralResult bilateral_beta(const SampledSet& S, const Ball& B, int search_budget);

struct BetaRecord {
  CubeId cube;
  double beta = 0.0;   // beta_inf of M * B_Q
  double bbeta = 0.0;  // bilateral beta of C0 * B_Q
  Plane plane;         // plane realizing `beta`
  double M = 3.0;
  double C0 = 2.0;
  double p = 2.0;
};

struct SweepParams {
  double M = 3.0;
  double C0 = 2.0;
  double p = 2.0;
  int budget = 60;      // search budget per cube
  int sub_levels = 6;   // evaluate on net points this many levels below the cube
};

// One record per lattice cube, level-major order (index = lattice.flat_index).
// Deterministic parallel map: results are positioned by cube, not by schedule.
std::vector<BetaRecord> compute_beta_records(const CubeLattice& lattice, const SampledSet& S,
                                             const SweepParams& params);

struct DeviationEntry {
  CubeId cube;
  double beta = 0.0;
  double contribution = 0.0;  // beta^2 * side^d
};

struct DeviationReport {
  CubeId root;
  double total = 0.0;  // side(root)^d + sum of contributions, exactly
  std::vector<DeviationEntry> per_cube;  // all cubes below root, level-major
  int truncation_level = 0;
  double root_mass = 0.0;  // side(root)^d
};

// Linear-deviation sum over the subtree of `root` (root included), each beta
// from beta_inf over M * B_Q. Cubes are evaluated on subsampled nets; the
// reported total satisfies total == root_mass + sum(contributions) exactly.
DeviationReport linear_deviation(const CubeLattice& lattice, const SampledSet& S, CubeId root,
                                 double M, double p, int search_budget);

// Sum of side(Q)^d over cubes Q below `root` whose recorded bilateral beta
// (at scale C0) is >= epsilon. Requires epsilon in (0, 2], C0 >= 1, and
// records carrying the same C0.
double blwg_sum(const CubeLattice& lattice, const std::vector<BetaRecord>& betas, CubeId root,
                double epsilon, double C0);

struct BaupResult {
  bool passes = false;
  double achieved = 0.0;           // bilateral distance to the best plane union
  std::vector<Plane> planes;       // the union realizing `achieved`
};

// Bilateral approximation by unions of planes: clusters the samples of
// M * B_Q into at most `max_planes` groups by iterated nearest-plane
// assignment and refitting, and reports the best d_{MB_Q}(S, union) over
// union sizes 1..max_planes. Passes when that distance is below epsilon.
BaupResult baup_test(const SampledSet& S, const Cube& q, double M, double epsilon, int max_planes,
                     int budget);

}  // namespace gmt
