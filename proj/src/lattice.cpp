#include "gmt/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "gmt/common.hpp"

namespace gmt {
namespace {

// ρ^k·diam via repeated multiplication so every module computing a level
// scale lands on the same double
double level_scale(double diam, double rho, int k) {
  double s = diam;
  for (int i = 0; i < k; ++i) s *= rho;
  return s;
}

struct CellKey {
  std::int64_t c[3];
  bool operator==(const CellKey& o) const {
    return c[0] == o.c[0] && c[1] == o.c[1] && c[2] == o.c[2];
  }
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (int i = 0; i < 3; ++i)
      h ^= static_cast<std::uint64_t>(k.c[i]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

// uniform hash grid over already-accepted net points; cell size equals the
// separation so a blocking point always sits in one of the 3^dim neighbors
class SepGrid {
 public:
  SepGrid(double cell, int dim) : cell_(cell > 0.0 ? cell : 1.0), dim_(dim) {}

  void insert(const Vec& p, int idx) { map_[key(p)].push_back(idx); }

  bool blocked(const Vec& p, const PointCloud& pts, double sep) const {
    double sep2 = sep * sep;
    CellKey base = key(p);
    std::int64_t zlo = dim_ == 3 ? -1 : 0, zhi = dim_ == 3 ? 1 : 0;
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        for (std::int64_t dz = zlo; dz <= zhi; ++dz) {
          auto it = map_.find(CellKey{{base.c[0] + dx, base.c[1] + dy, base.c[2] + dz}});
          if (it == map_.end()) continue;
          for (int idx : it->second)
            if ((pts.get(idx) - p).norm2() <= sep2) return true;
        }
    return false;
  }

 private:
  CellKey key(const Vec& p) const {
    CellKey k{{0, 0, 0}};
    for (int i = 0; i < dim_; ++i)
      k.c[i] = static_cast<std::int64_t>(std::floor(p[i] / cell_));
    return k;
  }

  double cell_;
  int dim_;
  std::unordered_map<CellKey, std::vector<int>, CellHash> map_;
};

}  // namespace

NetHierarchy build_nets(const SampledSet& S, double rho, int k_max) {
  const PointCloud& pts = S.points;
  std::size_t n = pts.size();
  if (n == 0) fail(Errc::degenerate_input, "build_nets: empty sample set");
  if (!(rho > 0.0 && rho < 1.0))
    fail(Errc::invalid_argument, "build_nets: rho must lie in (0,1)");
  if (k_max < 0) fail(Errc::invalid_argument, "build_nets: negative k_max");

  NetHierarchy out;
  out.rho = rho;
  out.diam = S.diameter();

  if (out.diam > 0.0 && S.resolution > 0.0) {
    int k_valid = 0;
    double s = out.diam;
    while (k_valid < k_max && s * rho >= 2.0 * S.resolution) {
      s *= rho;
      ++k_valid;
    }
    if (k_valid < k_max)
      fail(Errc::resolution_exceeded,
           "build_nets: net separation at level " + std::to_string(k_valid + 1) +
               " falls below twice the sampling resolution; deepest valid level is " +
               std::to_string(k_valid));
    out.shallow_resolution = level_scale(out.diam, rho, k_max) < 10.0 * S.resolution;
  }

  // one deterministic scan order: lexicographic by coordinates, then index
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    for (int c = 0; c < pts.dim(); ++c) {
      double xa = pts.axis(c)[static_cast<std::size_t>(a)];
      double xb = pts.axis(c)[static_cast<std::size_t>(b)];
      if (xa != xb) return xa < xb;
    }
    return a < b;
  });

  out.levels.resize(static_cast<std::size_t>(k_max) + 1);
  std::vector<char> in_net(n, 0);
  std::vector<int> current;
  for (int k = 0; k <= k_max; ++k) {
    double sep = level_scale(out.diam, rho, k);
    SepGrid grid(sep, pts.dim());
    for (int idx : current) grid.insert(pts.get(idx), idx);
    for (int idx : order) {
      if (in_net[idx]) continue;
      Vec p = pts.get(idx);
      if (grid.blocked(p, pts, sep)) continue;
      in_net[idx] = 1;
      current.push_back(idx);
      grid.insert(p, idx);
    }
    out.levels[k] = current;
  }
  return out;
}

std::size_t CubeLattice::cube_count() const {
  std::size_t c = 0;
  for (const auto& lv : levels_) c += lv.size();
  return c;
}

std::vector<CubeId> CubeLattice::roots() const {
  std::vector<CubeId> r;
  for (int j = 0; j < static_cast<int>(levels_[0].size()); ++j) r.push_back({0, j});
  return r;
}

const KdIndex& CubeLattice::center_index(int k) const {
  const auto& slot = center_indexes_[static_cast<std::size_t>(k)];
  if (!slot) fail(Errc::invalid_argument, "center_index: lattice not built");
  return *slot;
}

CubeLattice build_cubes(const NetHierarchy& nets, const SampledSet& S) {
  if (nets.levels.empty()) fail(Errc::invalid_argument, "build_cubes: no net levels");
  const PointCloud& pts = S.points;
  int n = static_cast<int>(pts.size());
  for (const auto& lv : nets.levels)
    for (int i : lv)
      if (i < 0 || i >= n) fail(Errc::invalid_argument, "build_cubes: net index out of range");

  CubeLattice lat;
  lat.rho = nets.rho;
  lat.diam = nets.diam;
  lat.max_level = static_cast<int>(nets.levels.size()) - 1;
  lat.shallow_resolution = nets.shallow_resolution;
  lat.source = &S;

  int L = static_cast<int>(nets.levels.size());
  lat.levels_.resize(static_cast<std::size_t>(L));
  lat.center_clouds_.reserve(static_cast<std::size_t>(L));
  for (int k = 0; k < L; ++k) {
    const auto& net = nets.levels[static_cast<std::size_t>(k)];
    PointCloud cc(pts.dim());
    cc.reserve(net.size());
    for (int idx : net) cc.add(pts.get(idx));
    lat.center_clouds_.push_back(std::move(cc));

    double side = level_scale(nets.diam, nets.rho, k);
    auto& cubes = lat.levels_[static_cast<std::size_t>(k)];
    cubes.resize(net.size());
    for (int j = 0; j < static_cast<int>(net.size()); ++j) {
      Cube& q = cubes[static_cast<std::size_t>(j)];
      q.id = {k, j};
      q.center = pts.get(net[static_cast<std::size_t>(j)]);
      q.side = side;
      q.center_sample = net[static_cast<std::size_t>(j)];
    }
  }
  lat.center_indexes_.resize(static_cast<std::size_t>(L));
  for (int k = 0; k < L; ++k)
    lat.center_indexes_[static_cast<std::size_t>(k)] =
        std::make_shared<KdIndex>(lat.center_clouds_[static_cast<std::size_t>(k)]);

  // assignment forest: each level-(k+1) net point to its nearest level-k net
  // point; KdIndex breaks distance ties toward the smaller cube index
  for (int k = 0; k + 1 < L; ++k) {
    const KdIndex& up = *lat.center_indexes_[static_cast<std::size_t>(k)];
    auto& fine = lat.levels_[static_cast<std::size_t>(k) + 1];
    auto& coarse = lat.levels_[static_cast<std::size_t>(k)];
    for (int j = 0; j < static_cast<int>(fine.size()); ++j) {
      int pj = static_cast<int>(up.nearest(fine[static_cast<std::size_t>(j)].center).index);
      fine[static_cast<std::size_t>(j)].parent = pj;
      coarse[static_cast<std::size_t>(pj)].children.push_back(j);
    }
  }

  // samples join the nearest bottom-level net point, then propagate upward
  const KdIndex& deep = *lat.center_indexes_[static_cast<std::size_t>(L) - 1];
  std::vector<std::vector<int>> deep_members(lat.levels_[static_cast<std::size_t>(L) - 1].size());
  for (int i = 0; i < n; ++i)
    deep_members[deep.nearest(pts.get(i)).index].push_back(i);

  lat.member_order_.resize(static_cast<std::size_t>(n));
  lat.member_pos_.resize(static_cast<std::size_t>(n));
  int cursor = 0;
  std::function<void(int, int)> dfs = [&](int k, int j) {
    Cube& q = lat.levels_[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    q.mbegin = cursor;
    if (k == L - 1) {
      for (int s : deep_members[static_cast<std::size_t>(j)])
        lat.member_order_[static_cast<std::size_t>(cursor++)] = s;
    } else {
      for (int cj : q.children) dfs(k + 1, cj);
    }
    q.mend = cursor;
  };
  for (int j = 0; j < static_cast<int>(lat.levels_[0].size()); ++j) dfs(0, j);
  if (cursor != n) fail(Errc::degenerate_input, "build_cubes: member ranges do not cover the samples");
  for (int p = 0; p < n; ++p) lat.member_pos_[static_cast<std::size_t>(lat.member_order_[static_cast<std::size_t>(p)])] = p;

  // measured containment constants
  double outer = 0.0;
  for (const auto& lv : lat.levels_)
    for (const Cube& q : lv) {
      if (q.side <= 0.0) continue;
      double worst2 = 0.0;
      for (int p = q.mbegin; p < q.mend; ++p) {
        int s = lat.member_order_[static_cast<std::size_t>(p)];
        worst2 = std::max(worst2, (pts.get(s) - q.center).norm2());
      }
      outer = std::max(outer, std::sqrt(worst2) / q.side);
    }
  lat.outer_ratio = outer;

  const KdIndex& sidx = S.index();
  double c0 = std::numeric_limits<double>::infinity();
  for (const auto& lv : lat.levels_)
    for (const Cube& q : lv) {
      if (q.member_count() == n || q.side <= 0.0) continue;
      double r = 0.25 * q.side;
      for (;;) {
        auto hits = sidx.within(Ball(q.center, r));
        int found = -1;
        for (std::size_t h : hits)
          if (!lat.is_member(q, static_cast<int>(h))) {
            found = static_cast<int>(h);
            break;
          }
        if (found >= 0) {
          c0 = std::min(c0, (pts.get(found) - q.center).norm() / q.side);
          break;
        }
        if (hits.size() == static_cast<std::size_t>(n)) break;
        r *= 2.0;
      }
    }
  lat.c0_eff = c0;
  return lat;
}

bool StoppingRegion::contains(CubeId id) const {
  return std::binary_search(cubes.begin(), cubes.end(), id);
}

StoppingRegion stopping_region(const CubeLattice& lattice, CubeId root,
                               const std::function<bool(CubeId)>& stop) {
  if (root.k < 0 || root.k >= lattice.level_count() || root.j < 0 ||
      root.j >= static_cast<int>(lattice.level(root.k).size()))
    fail(Errc::invalid_argument, "stopping_region: no such cube");
  if (!stop) fail(Errc::invalid_argument, "stopping_region: empty predicate");

  StoppingRegion out;
  out.top = root;
  std::vector<CubeId> stack{root};
  while (!stack.empty()) {
    CubeId id = stack.back();
    stack.pop_back();
    const Cube& q = lattice.cube(id);
    out.cubes.push_back(id);

    bool stop_here = false;
    for (int cj : q.children)
      if (stop(CubeId{id.k + 1, cj})) {
        stop_here = true;
        break;
      }
    if (stop_here) {
      out.stop.push_back(id);
      out.minimal.push_back(id);
    } else if (q.children.empty()) {
      out.minimal.push_back(id);
    } else {
      for (int cj : q.children) stack.push_back({id.k + 1, cj});
    }
  }
  std::sort(out.cubes.begin(), out.cubes.end());
  std::sort(out.stop.begin(), out.stop.end());
  std::sort(out.minimal.begin(), out.minimal.end());
  return out;
}

}  // namespace gmt
