#include "gmt/fractals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <utility>

#include "gmt/common.hpp"
#include "json.hpp"
#include "polyline_detail.hpp"

namespace gmt {
namespace {

// corner directions in child order: (+,+), (-,+), (-,-), (+,-)
constexpr std::array<double, 4> kCx{1.0, -1.0, -1.0, 1.0};
constexpr std::array<double, 4> kCy{1.0, 1.0, -1.0, -1.0};

double square_outer_dist(const Vec& x, const Vec& c, double half) {
  const double dx = std::max(std::abs(x[0] - c[0]) - half, 0.0);
  const double dy = std::max(std::abs(x[1] - c[1]) - half, 0.0);
  return std::hypot(dx, dy);
}

double square_edge_dist(const Vec& x, const Vec& c, double half) {
  const double ax = std::abs(x[0] - c[0]);
  const double ay = std::abs(x[1] - c[1]);
  if (ax <= half && ay <= half) return half - std::max(ax, ay);
  return std::hypot(std::max(ax - half, 0.0), std::max(ay - half, 0.0));
}

// branch-and-bound over the square tree; edge=false measures to the solid
// squares (zero inside), edge=true to the union of their boundaries
void cantor_descend(const CantorSpec& sp, const Vec& x, int g, std::size_t i, bool edge,
                    double& best) {
  const Vec& c = sp.generations[static_cast<std::size_t>(g)][i].center;
  const double half = 0.5 * sp.side(g);
  if (square_outer_dist(x, c, half) >= best) return;
  if (g == sp.level) {
    const double d = edge ? square_edge_dist(x, c, half) : square_outer_dist(x, c, half);
    best = std::min(best, d);
    return;
  }
  const double off = 0.5 * half;
  std::array<std::pair<double, int>, 4> kids;
  for (int k = 0; k < 4; ++k) {
    const Vec cc = c + Vec(kCx[static_cast<std::size_t>(k)], kCy[static_cast<std::size_t>(k)]) * off;
    kids[static_cast<std::size_t>(k)] = {square_outer_dist(x, cc, half * 0.25), k};
  }
  std::sort(kids.begin(), kids.end());
  for (const auto& [bound, k] : kids) {
    if (bound >= best) break;
    cantor_descend(sp, x, g + 1, 4 * i + static_cast<std::size_t>(k), edge, best);
  }
}

double cantor_dist(const CantorSpec& sp, const Vec& x, bool edge) {
  double best = std::numeric_limits<double>::max();
  cantor_descend(sp, x, 0, 0, edge, best);
  return best;
}

}  // namespace

double CantorSpec::side(int g) const { return std::pow(0.25, g); }

std::size_t CantorSpec::locate(const Vec& x, int g) const {
  std::size_t idx = 0;
  Vec c(0.0, 0.0);
  for (int gg = 0; gg < g; ++gg) {
    const double off = 0.125 * side(gg);
    int k;
    if (x[0] >= c[0]) {
      k = (x[1] >= c[1]) ? 0 : 3;
    } else {
      k = (x[1] >= c[1]) ? 1 : 2;
    }
    c = c + Vec(kCx[static_cast<std::size_t>(k)], kCy[static_cast<std::size_t>(k)]) * (2.0 * off);
    idx = 4 * idx + static_cast<std::size_t>(k);
  }
  return idx;
}

CantorDomain four_corner_cantor(int j) {
  if (j < 0 || j > 8) fail(Errc::invalid_argument, "cantor level must lie in [0, 8]");

  CantorSpec spec;
  spec.level = j;
  spec.generations.resize(static_cast<std::size_t>(j) + 1);
  spec.generations[0] = {CantorSquare{0, Vec(0.0, 0.0)}};
  for (int g = 1; g <= j; ++g) {
    const auto& parents = spec.generations[static_cast<std::size_t>(g) - 1];
    auto& out = spec.generations[static_cast<std::size_t>(g)];
    out.reserve(parents.size() * 4);
    const double off = 0.25 * spec.side(g - 1);
    for (const CantorSquare& p : parents) {
      for (int k = 0; k < 4; ++k) {
        const Vec c =
            p.center + Vec(kCx[static_cast<std::size_t>(k)], kCy[static_cast<std::size_t>(k)]) * off;
        out.push_back(CantorSquare{(p.word << 2) | static_cast<std::uint32_t>(k), c});
      }
    }
  }

  // perimeter samples of every level-j square, counterclockwise from the
  // bottom-left corner; coarser iterates get proportionally finer sampling,
  // and deep iterates keep at least eight points per edge so the net
  // hierarchy can resolve two levels per generation
  const int m = std::max(8, 64 >> j);
  const double s = spec.side(j);
  SampledSet boundary;
  boundary.points = PointCloud(2);
  boundary.points.reserve(spec.generations.back().size() * 4 * static_cast<std::size_t>(m));
  for (const CantorSquare& q : spec.generations.back()) {
    const Vec bl = q.center + Vec(-0.5 * s, -0.5 * s);
    const Vec br = q.center + Vec(0.5 * s, -0.5 * s);
    const Vec tr = q.center + Vec(0.5 * s, 0.5 * s);
    const Vec tl = q.center + Vec(-0.5 * s, 0.5 * s);
    const std::array<std::pair<Vec, Vec>, 4> edges{
        std::pair{bl, br}, std::pair{br, tr}, std::pair{tr, tl}, std::pair{tl, bl}};
    for (const auto& [a, b] : edges) {
      for (int t = 0; t < m; ++t) {
        boundary.points.add(a + (b - a) * (static_cast<double>(t) / m));
      }
    }
  }
  boundary.resolution = s / m;
  boundary.ambient_dim = 2;
  boundary.target_dim = 1;

  auto sp = std::make_shared<const CantorSpec>(spec);
  boundary.dist_oracle = [sp](const Vec& x) { return cantor_dist(*sp, x, true); };

  nlohmann::json js;
  js["kind"] = "cantor";
  js["level"] = j;
  boundary.oracle_spec = js.dump();

  Domain dom;
  dom.inside = [sp](const Vec& x) { return cantor_dist(*sp, x, false) > 0.0; };
  dom.dist_boundary = [sp](const Vec& x) { return cantor_dist(*sp, x, false); };
  dom.bbox = Box(Vec(-0.5, -0.5), Vec(0.5, 0.5));
  dom.kind = DomainKind::complement_of_compact;
  dom.boundary_samples = boundary;
  dom.spec = js.dump();

  return CantorDomain{std::move(boundary), std::move(dom), std::move(spec)};
}

Domain koch_snowflake(int iter, double resolution) {
  if (iter < 0 || iter > 6) fail(Errc::invalid_argument, "snowflake iteration must lie in [0, 6]");

  const double circum = 1.0 / std::sqrt(3.0);
  std::vector<Vec> pts;
  for (int k = 0; k < 3; ++k) {
    const double a = std::numbers::pi * (0.5 + 2.0 * k / 3.0);
    pts.push_back(Vec(circum * std::cos(a), circum * std::sin(a)));
  }
  for (int it = 0; it < iter; ++it) {
    std::vector<Vec> next;
    next.reserve(pts.size() * 4);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec a = pts[i];
      const Vec b = pts[(i + 1) % pts.size()];
      const Vec e = b - a;
      // bump points right of the travel direction: outward for this
      // counterclockwise loop
      const Vec peak = (a + b) * 0.5 + Vec(e[1], -e[0]) * (std::sqrt(3.0) / 6.0);
      next.push_back(a);
      next.push_back(a + e * (1.0 / 3.0));
      next.push_back(peak);
      next.push_back(a + e * (2.0 / 3.0));
    }
    pts = std::move(next);
  }

  auto shape = std::make_shared<detail::PolylineShape>(std::move(pts));
  const double spacing = resolution > 0.0 ? resolution : shape->perimeter() / 1024.0;
  nlohmann::json js;
  js["kind"] = "snowflake";
  js["iter"] = iter;
  js["resolution"] = spacing;
  return detail::polyline_domain(std::move(shape), spacing, js.dump());
}

}  // namespace gmt
