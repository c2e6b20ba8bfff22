#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gmt/domain.hpp"

namespace gmt {

// One square of the four-corner construction: the generation digits that
// select it (two bits per generation, oldest in the high pair) and its center.
struct CantorSquare {
  std::uint32_t word = 0;
  Vec center;
};

// Square tree of the four-corner set K_j: generations[g] lists the 4^g
// squares of side 4^{-g} in breadth-first order, child k of square i sitting
// at index 4*i + k.
struct CantorSpec {
  int level = 0;
  std::vector<std::vector<CantorSquare>> generations;

  double side(int g) const;
  // index into generations[g] of the square whose quadrant cascade holds x
  std::size_t locate(const Vec& x, int g) const;
};

struct CantorDomain {
  SampledSet boundary;  // samples of the union of level-j square boundaries
  Domain domain;        // the complement of K_j
  CantorSpec spec;
};

// Four-corner Cantor iterate K_j inside the unit square [-1/2,1/2]^2: each
// square spawns children of quarter size in its four corners. Boundary
// distances come from exact descent over the square tree; j is capped at 8.
CantorDomain four_corner_cantor(int j);

// Koch snowflake of the given iteration depth (0 = triangle with unit side,
// centered at the origin); interior domain. Boundary sampled at spacing at
// most `resolution` (0 picks perimeter/1024).
Domain koch_snowflake(int iter, double resolution = 0.0);

// Interior of a simple polygon; throws on self-intersection, repeated
// vertices, or fewer than three vertices.
Domain polygon_domain(const std::vector<Vec>& vertices, double resolution = 0.0);

// Region above the graph of `profile` inside `box`. The profile is sampled
// on a uniform x-grid at the boundary resolution and the domain is the
// polygon above that polyline; the profile must stay strictly between the
// box heights.
Domain lipschitz_graph_domain(const std::function<double(double)>& profile, const Box& box,
                              double resolution = 0.0);

}  // namespace gmt
