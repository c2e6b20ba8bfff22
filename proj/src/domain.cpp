#include "gmt/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "gmt/common.hpp"
#include "gmt/fractals.hpp"
#include "json.hpp"
#include "polyline_detail.hpp"

namespace gmt::detail {
namespace {

double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

double segment_dist(const Vec& x, const Vec& a, const Vec& b) {
  const Vec e = b - a;
  const double len2 = e.norm2();
  double t = len2 > 0.0 ? (x - a).dot(e) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (x - (a + e * t)).norm();
}

bool on_segment(const Vec& a, const Vec& b, const Vec& p) {
  return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) &&
         std::min(a[1], b[1]) <= p[1] && p[1] <= std::max(a[1], b[1]);
}

// closed-segment intersection test, touching included
bool segments_touch(const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
  const double d1 = cross2(d - c, a - c);
  const double d2 = cross2(d - c, b - c);
  const double d3 = cross2(b - a, c - a);
  const double d4 = cross2(b - a, d - a);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && on_segment(c, d, a)) return true;
  if (d2 == 0 && on_segment(c, d, b)) return true;
  if (d3 == 0 && on_segment(a, b, c)) return true;
  if (d4 == 0 && on_segment(a, b, d)) return true;
  return false;
}

}  // namespace

PolylineShape::PolylineShape(std::vector<Vec> vertices) : pts_(std::move(vertices)) {
  if (pts_.size() < 3) fail(Errc::invalid_argument, "a closed polyline needs three vertices");
  seg_.resize(pts_.size());
  for (std::size_t i = 0; i < seg_.size(); ++i) seg_[i] = static_cast<int>(i);
  nodes_.reserve(2 * pts_.size());
  build(0, static_cast<int>(seg_.size()));
}

int PolylineShape::build(int begin, int end) {
  const int ni = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{});
  Node nd;
  nd.lo = Vec(std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
  nd.hi = Vec(std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest());
  for (int s = begin; s < end; ++s) {
    for (const Vec& p : {seg_a(s), seg_b(s)}) {
      for (int k = 0; k < 2; ++k) {
        nd.lo[k] = std::min(nd.lo[k], p[k]);
        nd.hi[k] = std::max(nd.hi[k], p[k]);
      }
    }
  }
  nd.begin = begin;
  nd.end = end;
  if (end - begin > 8) {
    const int axis = (nd.hi[0] - nd.lo[0] >= nd.hi[1] - nd.lo[1]) ? 0 : 1;
    const int mid = begin + (end - begin) / 2;
    // keys must come from the segment id itself: reading through seg_ while
    // nth_element permutes it would make the comparison unstable
    const auto key = [&](int id) {
      const std::size_t v = static_cast<std::size_t>(id);
      return pts_[v][axis] + pts_[(v + 1) % pts_.size()][axis];
    };
    std::nth_element(seg_.begin() + begin, seg_.begin() + mid, seg_.begin() + end,
                     [&](int p, int q) {
                       const double mp = key(p);
                       const double mq = key(q);
                       if (mp != mq) return mp < mq;
                       return p < q;
                     });
    nd.left = build(begin, mid);
    nd.right = build(mid, end);
  }
  nodes_[static_cast<std::size_t>(ni)] = nd;
  return ni;
}

double PolylineShape::perimeter() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    sum += (pts_[(i + 1) % pts_.size()] - pts_[i]).norm();
  }
  return sum;
}

double PolylineShape::area() const {
  double twice = 0.0;
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    twice += cross2(pts_[i], pts_[(i + 1) % pts_.size()]);
  }
  return 0.5 * twice;
}

Box PolylineShape::bounds() const {
  const Node& root = nodes_.front();
  return Box(root.lo, root.hi);
}

double PolylineShape::box_dist(const Node& nd, const Vec& x) const {
  const double dx = std::max({nd.lo[0] - x[0], 0.0, x[0] - nd.hi[0]});
  const double dy = std::max({nd.lo[1] - x[1], 0.0, x[1] - nd.hi[1]});
  return std::hypot(dx, dy);
}

void PolylineShape::dist_rec(int ni, const Vec& x, double& best) const {
  const Node& nd = nodes_[static_cast<std::size_t>(ni)];
  if (box_dist(nd, x) >= best) return;
  if (nd.left < 0) {
    for (int s = nd.begin; s < nd.end; ++s) {
      best = std::min(best, segment_dist(x, seg_a(s), seg_b(s)));
    }
    return;
  }
  const double dl = box_dist(nodes_[static_cast<std::size_t>(nd.left)], x);
  const double dr = box_dist(nodes_[static_cast<std::size_t>(nd.right)], x);
  if (dl <= dr) {
    dist_rec(nd.left, x, best);
    dist_rec(nd.right, x, best);
  } else {
    dist_rec(nd.right, x, best);
    dist_rec(nd.left, x, best);
  }
}

double PolylineShape::dist(const Vec& x) const {
  double best = std::numeric_limits<double>::max();
  dist_rec(0, x, best);
  return best;
}

bool PolylineShape::inside(const Vec& x) const {
  bool odd = false;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const Node& nd = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (x[1] < nd.lo[1] || x[1] >= nd.hi[1] || x[0] >= nd.hi[0]) continue;
    if (nd.left >= 0) {
      stack.push_back(nd.left);
      stack.push_back(nd.right);
      continue;
    }
    for (int s = nd.begin; s < nd.end; ++s) {
      const Vec a = seg_a(s);
      const Vec b = seg_b(s);
      if ((a[1] > x[1]) != (b[1] > x[1])) {
        const double t = (x[1] - a[1]) / (b[1] - a[1]);
        if (x[0] < a[0] + t * (b[0] - a[0])) odd = !odd;
      }
    }
  }
  return odd;
}

SampledSet PolylineShape::sample_points(double spacing) const {
  if (!(spacing > 0.0)) fail(Errc::invalid_argument, "sampling spacing must be positive");
  SampledSet out;
  out.points = PointCloud(2);
  double worst = 0.0;
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    const Vec a = pts_[i];
    const Vec b = pts_[(i + 1) % pts_.size()];
    const double len = (b - a).norm();
    const int m = std::max(1, static_cast<int>(std::ceil(len / spacing - 1e-12)));
    worst = std::max(worst, len / m);
    for (int t = 0; t < m; ++t) {
      out.points.add(a + (b - a) * (static_cast<double>(t) / m));
    }
  }
  out.resolution = worst;
  out.ambient_dim = 2;
  out.target_dim = 1;
  return out;
}

bool PolylineShape::self_intersects() const {
  const std::size_t n = pts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if ((pts_[(i + 1) % n] - pts_[i]).norm2() == 0.0) return true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent around the loop
      if (segments_touch(pts_[i], pts_[(i + 1) % n], pts_[j], pts_[(j + 1) % n])) {
        return true;
      }
    }
  }
  return false;
}

Domain polyline_domain(std::shared_ptr<const PolylineShape> shape, double spacing,
                       std::string spec) {
  Domain dom;
  dom.inside = [shape](const Vec& x) { return shape->inside(x); };
  dom.dist_boundary = [shape](const Vec& x) {
    return shape->inside(x) ? shape->dist(x) : 0.0;
  };
  dom.bbox = shape->bounds();
  dom.kind = DomainKind::bounded;
  dom.boundary_samples = shape->sample_points(spacing);
  dom.boundary_samples.dist_oracle = [shape](const Vec& x) { return shape->dist(x); };
  dom.boundary_samples.oracle_spec = spec;
  dom.spec = std::move(spec);
  return dom;
}

}  // namespace gmt::detail

namespace gmt {

Domain polygon_domain(const std::vector<Vec>& vertices, double resolution) {
  if (vertices.size() < 3) fail(Errc::invalid_argument, "polygon needs at least three vertices");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if ((vertices[i] - vertices[j]).norm2() == 0.0) {
        fail(Errc::invalid_argument, "polygon repeats a vertex");
      }
    }
  }
  auto shape = std::make_shared<detail::PolylineShape>(vertices);
  if (shape->self_intersects()) fail(Errc::invalid_argument, "polygon must be simple");
  if (!(std::abs(shape->area()) > 0.0)) fail(Errc::degenerate_input, "polygon has no interior");

  const double spacing = resolution > 0.0 ? resolution : shape->perimeter() / 1024.0;
  nlohmann::json js;
  js["kind"] = "polygon";
  js["resolution"] = spacing;
  for (const Vec& v : vertices) js["vertices"].push_back({v[0], v[1]});
  return detail::polyline_domain(std::move(shape), spacing, js.dump());
}

Domain lipschitz_graph_domain(const std::function<double(double)>& profile, const Box& box,
                              double resolution) {
  if (!profile) fail(Errc::invalid_argument, "graph profile must be callable");
  if (!(box.hi[0] > box.lo[0]) || !(box.hi[1] > box.lo[1])) {
    fail(Errc::invalid_argument, "box must have positive extent");
  }
  const double width = box.hi[0] - box.lo[0];
  const double spacing = resolution > 0.0 ? resolution : width / 256.0;
  const int nseg = std::max(8, static_cast<int>(std::ceil(width / spacing - 1e-12)));

  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(nseg) + 3);
  for (int i = 0; i <= nseg; ++i) {
    const double x = box.lo[0] + width * (static_cast<double>(i) / nseg);
    const double y = profile(x);
    if (!(y > box.lo[1]) || !(y < box.hi[1])) {
      fail(Errc::invalid_argument, "profile must stay strictly between the box heights");
    }
    pts.push_back(Vec(x, y));
  }
  pts.push_back(Vec(box.hi[0], box.hi[1]));
  pts.push_back(Vec(box.lo[0], box.hi[1]));

  // x-monotone graph plus three wall edges: simple by construction
  auto shape = std::make_shared<detail::PolylineShape>(std::move(pts));
  nlohmann::json js;
  js["kind"] = "graph";
  js["resolution"] = spacing;
  js["box"] = {{box.lo[0], box.lo[1]}, {box.hi[0], box.hi[1]}};
  for (const Vec& v : shape->vertices()) js["vertices"].push_back({v[0], v[1]});
  return detail::polyline_domain(std::move(shape), spacing, js.dump());
}

}  // namespace gmt
