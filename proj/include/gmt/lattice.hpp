#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "gmt/geometry.hpp"

namespace gmt {

struct CubeId {
  int k = 0;  // level
  int j = 0;  // index within level

  friend bool operator==(const CubeId& a, const CubeId& b) {
    return a.k == b.k && a.j == b.j;
  }
  friend bool operator!=(const CubeId& a, const CubeId& b) { return !(a == b); }
  friend bool operator<(const CubeId& a, const CubeId& b) {
    return a.k != b.k ? a.k < b.k : a.j < b.j;
  }
};

struct Cube {
  CubeId id;
  Vec center;                 // net point ζ_Q
  double side = 0.0;          // ℓ(Q) = ρ^k · diam(source)
  int center_sample = -1;     // sample index of ζ_Q
  int parent = -1;            // index within level k-1, -1 at the top
  std::vector<int> children;  // indices within level k+1, ascending
  int mbegin = 0, mend = 0;   // member range in CubeLattice::member_order()

  int member_count() const { return mend - mbegin; }
  Ball ball(double scale = 1.0) const { return Ball(center, scale * side); }
};

// Nested maximal nets X_0 ⊆ X_1 ⊆ …, each an index list into the sample
// cloud, with separation ρ^k·diam at level k (strict > between distinct
// net points; each level is seeded by the previous one, then extended by a
// greedy scan in lexicographic coordinate order).
struct NetHierarchy {
  std::vector<std::vector<int>> levels;
  double rho = 0.5;
  double diam = 0.0;
  // set when the deepest separation is under 10× the sampling resolution
  bool shallow_resolution = false;
};

NetHierarchy build_nets(const SampledSet& S, double rho, int k_max);

class CubeLattice {
 public:
  double rho = 0.5;
  int max_level = 0;
  double diam = 0.0;
  bool shallow_resolution = false;
  const SampledSet* source = nullptr;

  // measured containment constants:
  //   every cube's members lie in B(ζ_Q, outer_ratio·ℓ(Q));
  //   every cube owns all samples in B(ζ_Q, c0_eff·ℓ(Q)).
  double c0_eff = 0.0;
  double outer_ratio = 0.0;

  int level_count() const { return static_cast<int>(levels_.size()); }
  const std::vector<Cube>& level(int k) const { return levels_[k]; }
  const Cube& cube(CubeId id) const { return levels_[id.k][id.j]; }
  std::size_t cube_count() const;

  std::span<const int> members(const Cube& q) const {
    return std::span<const int>(member_order_.data() + q.mbegin,
                                static_cast<std::size_t>(q.mend - q.mbegin));
  }
  std::span<const int> members(CubeId id) const { return members(cube(id)); }
  bool is_member(const Cube& q, int sample) const {
    int p = member_pos_[sample];
    return p >= q.mbegin && p < q.mend;
  }
  const std::vector<int>& member_order() const { return member_order_; }

  // level-0 cubes (singleton for any cloud whose diameter is achieved)
  std::vector<CubeId> roots() const;

  // position of a cube in level-major order (level 0 first, index within level)
  std::size_t flat_index(CubeId id) const {
    std::size_t off = 0;
    for (int k = 0; k < id.k; ++k) off += levels_[k].size();
    return off + static_cast<std::size_t>(id.j);
  }

  // cube centers of one level, in cube-index order, with a shared index
  const PointCloud& centers(int k) const { return center_clouds_[k]; }
  const KdIndex& center_index(int k) const;

 private:
  friend CubeLattice build_cubes(const NetHierarchy& nets, const SampledSet& S);

  std::vector<std::vector<Cube>> levels_;
  std::vector<int> member_order_;  // permutation of sample indices
  std::vector<int> member_pos_;    // inverse permutation
  std::vector<PointCloud> center_clouds_;
  std::vector<std::shared_ptr<KdIndex>> center_indexes_;  // built eagerly
};

CubeLattice build_cubes(const NetHierarchy& nets, const SampledSet& S);

struct StoppingRegion {
  CubeId top;
  std::vector<CubeId> cubes;    // the region, sorted by (level, index)
  std::vector<CubeId> stop;     // maximal cubes with a child meeting the predicate
  std::vector<CubeId> minimal;  // region cubes whose children left the region

  bool contains(CubeId id) const;
};

// Region grown downward from `root`: descend until a cube has a child
// satisfying `stop` (that cube stays, its subtree is cut) or the lattice
// bottoms out. Sibling coherence holds by construction: children enter or
// leave as a full set.
StoppingRegion stopping_region(const CubeLattice& lattice, CubeId root,
                               const std::function<bool(CubeId)>& stop);

}  // namespace gmt
