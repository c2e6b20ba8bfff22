#pragma once

#include <vector>

#include "gmt/geometry.hpp"

namespace gmt {

// Upper estimate of the d-dimensional Hausdorff content of S inside B.
//
// The sample cloud is covered by cells of the dyadic grid anchored at the
// ball (root cell [-r, r]^n around the center); every cell is either kept
// whole, at cost (diameter of the bounding box of its samples)^d, or split,
// and the cheapest cover over all keep/split decisions down to `depth`
// levels is returned. Costing kept cells by the spread of the samples they
// actually contain (rather than the cell's own diameter) keeps flat clouds
// at their exact content. Recursion stops before cells shrink under 4x the
// sampling resolution, where the cloud would dissolve into zero-cost dust.
double hausdorff_content(const SampledSet& s, const Ball& b, int d, int depth = 8);

// Same estimator over an explicit coordinate-planar subset; `idx` selects the
// participating points, coordinates are already relative to the cell frame
// (root cell [-r, r]^n). Used internally by the profile sweep.
double content_of_subset(const std::array<const double*, 3>& coords, int dim,
                         std::vector<std::uint32_t>& idx, double r, int d, int depth);

struct DistProfile {
  std::vector<double> t;        // thresholds, ascending, in units of r_B
  std::vector<double> content;  // content of {x in B cap E : dist(x,L) > t*r_B}
  double r = 0.0;               // ball radius
  double t_min = 0.0;           // sampling-scale clamp actually applied
  std::size_t points = 0;       // samples inside B
};

struct ProfileOptions {
  int t_nodes = 64;    // geometric grid size on [t_min, 1]
  int depth = 8;       // content recursion depth
  double min_t = 0.0;  // extra floor for the grid (0 = resolution/r only)
};

// Tabulates t -> content of the far set, computed in the frame of L (grid
// anchored at the ball center, axes along the plane) so rigid motions of
// (S, B, L) move the whole construction with them.
DistProfile plane_distance_stats(const SampledSet& s, const Ball& b, const Plane& l, int d,
                                 const ProfileOptions& opts = {});

}  // namespace gmt
