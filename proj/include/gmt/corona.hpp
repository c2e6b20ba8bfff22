#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gmt/beta.hpp"
#include "gmt/domain.hpp"
#include "gmt/harmonic.hpp"
#include "gmt/lattice.hpp"
#include "gmt/wos.hpp"

namespace gmt {

struct CoronaParams {
  double lambda = 1.0;   // ball inflation for the density ratios
  double A = 20.0;       // high-density stop threshold
  double tau = 0.05;     // low-density stop threshold
  double epsilon = 0.05; // flatness threshold for bad cubes and the Jones sum
  double M = 3.0;        // ball inflation for the betas
  int k0 = -1;           // truncation level; negative means the lattice bottom
  double c = 0.05;       // corkscrew parameter
};

enum class StopReason { btm, bad, hd, ld, bbeta };

struct TreeRecord {
  CubeId root;
  StoppingRegion tree;  // root plus descendants, stop cubes included as leaves
  Vec pole_plus;
  Vec pole_minus;
  bool has_plus = false;
  bool has_minus = false;
  double theta_plus = 0.0;   // root density seen from each interior pole
  double theta_minus = 0.0;
  std::vector<std::pair<CubeId, StopReason>> stops;  // sorted by cube id
  std::vector<double> stop_jones;  // Jones partial sum at each stop cube
};

struct CoronaResult {
  std::vector<TreeRecord> top;
  double packing = 0.0;      // sum of side(R)^d over tree roots
  double btm_packing = 0.0;  // sum of side(Q)^d over bottom stops
  CubeId q0;
  int trunc_level = 0;
  CoronaParams params;
  bool verified = false;  // set by the caller after verify_tree_densities
};

// First point of a deterministic low-discrepancy scan of B that is interior
// with dist_boundary >= 2c r_B and |x - x_B| <= (1 - 2c) r_B; absent when the
// scan budget finds none.
std::optional<Vec> find_corkscrew(const Domain& dom, const Ball& b, double c);

// Stopping-time decomposition of the truncated lattice under q0. Flat tops
// (bilateral beta of MB_R below epsilon) grow trees whose descendants stop at
// the first of: truncation bottom, flatness failure, high or low density
// relative to the root poles, or Jones partial sum >= 2 epsilon^2. Un-flat
// tops stop on themselves and hand their children to the next generation.
// Density stops fire only with a 3 stderr margin. `betas` must come from a
// sweep with M == C0 == params.M.
CoronaResult corona_decompose(const Domain& dom, const CubeLattice& lat,
                              const std::vector<BetaRecord>& betas, CubeId q0,
                              const CoronaParams& params, const WosConfig& cfg);

// Any valid decomposition's packing upper-bounds the corona infimum.
double cdhm_upper(const CoronaResult& result);

enum class VerifyMode { per_tree_pole, fixed_pole };

struct DensityCheck {
  CubeId tree_root;
  CubeId cube;
  double theta = 0.0;       // re-estimated cube density
  double theta_root = 0.0;  // re-estimated root density
  bool pass = false;
};

struct VerifyReport {
  std::size_t checked = 0;
  std::size_t passed = 0;
  double fraction = 1.0;
  std::vector<DensityCheck> failures;
  VerifyMode mode = VerifyMode::per_tree_pole;
};

// Re-estimates tree densities with fresh seeds for a deterministic sample of
// (root, cube) pairs (stop cubes excluded: the in-range band is a property of
// the un-stopped region) and reports the fraction inside
// [tau theta_R, A theta_R] with 3 stderr slack.
VerifyReport verify_tree_densities(const CoronaResult& result, const Domain& dom,
                                   const CubeLattice& lat, const WosConfig& cfg,
                                   VerifyMode mode, std::size_t max_pairs = 32);

struct FrostmanAtom {
  CubeId cube;
  Vec center;
  double weight = 0.0;
};

struct FrostmanMeasure {
  std::vector<FrostmanAtom> atoms;  // sorted by cube id
  std::vector<CubeId> fc;           // Frostman cubes, sorted by cube id

  // mass of the subtree of q
  double mass(const CubeLattice& lat, CubeId q) const;
  double total() const;
};

// Bottom-up cascade: whenever a cube's accumulated mass exceeds twice its
// side^d, the cube joins FC and its subtree is rescaled to mass side^d.
// Accumulation runs in extended precision so the post-cascade bound
// nu(Q) <= 2 side(Q)^d holds exactly for every cube.
FrostmanMeasure frostman_regularize(const CubeLattice& lat,
                                    const std::vector<std::pair<CubeId, double>>& btm_weights,
                                    CubeId q0);

}  // namespace gmt
