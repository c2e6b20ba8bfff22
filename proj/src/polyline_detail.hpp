#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gmt/domain.hpp"

namespace gmt::detail {

// Closed polyline with a bounding-volume tree over its segments: exact
// distance queries, ray-parity membership, and arc-length sampling.
class PolylineShape {
 public:
  // vertices of a closed loop; the final edge closes back to the first
  explicit PolylineShape(std::vector<Vec> vertices);

  std::size_t edge_count() const { return pts_.size(); }
  const std::vector<Vec>& vertices() const { return pts_; }
  double perimeter() const;
  double area() const;  // signed (positive counterclockwise)
  Box bounds() const;

  double dist(const Vec& x) const;  // distance to the boundary curve
  bool inside(const Vec& x) const;  // crossing parity of a rightward ray

  // points along every edge with gaps at most `spacing`; resolution records
  // the worst actual gap
  SampledSet sample_points(double spacing) const;

  // true when any two non-adjacent edges touch (degenerate edges count)
  bool self_intersects() const;

 private:
  struct Node {
    Vec lo, hi;
    int begin = 0, end = 0;     // leaf: segment range in seg_
    int left = -1, right = -1;  // internal: children
  };

  std::vector<Vec> pts_;
  std::vector<int> seg_;
  std::vector<Node> nodes_;

  Vec seg_a(int s) const { return pts_[static_cast<std::size_t>(seg_[static_cast<std::size_t>(s)])]; }
  Vec seg_b(int s) const {
    return pts_[(static_cast<std::size_t>(seg_[static_cast<std::size_t>(s)]) + 1) % pts_.size()];
  }
  int build(int begin, int end);
  double box_dist(const Node& nd, const Vec& x) const;
  void dist_rec(int ni, const Vec& x, double& best) const;
};

// Bounded domain whose boundary is the polyline; `spec` is stored verbatim.
Domain polyline_domain(std::shared_ptr<const PolylineShape> shape, double spacing,
                       std::string spec);

}  // namespace gmt::detail
