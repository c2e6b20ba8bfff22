#include "gmt/beta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <utility>

#include "gmt/common.hpp"
#include "gmt/parallel.hpp"

namespace gmt {
namespace {

double pow_int(double x, int d) {
  double r = 1.0;
  for (int i = 0; i < d; ++i) r *= x;
  return r;
}

// Orthonormal frame of a plane: spanning basis plus normal complement.
struct PlaneFrame {
  Vec base;
  std::vector<Vec> basis;
  std::vector<Vec> normals;
  int dim = 1;
  int ambient = 2;
};

PlaneFrame make_frame(const Plane& p) {
  PlaneFrame f;
  f.base = p.base;
  f.dim = p.dim;
  f.ambient = p.ambient;
  for (int i = 0; i < p.dim; ++i) f.basis.push_back(p.basis[static_cast<std::size_t>(i)]);
  f.normals = p.normals();
  return f;
}

// Search coordinates: one Givens angle per (basis, normal) pair, then one
// offset along each (rotated) normal. Rebuilt from the initial frame every
// evaluation so rounding never accumulates across steps.
Plane plane_with_params(const PlaneFrame& f0, const std::vector<double>& u) {
  const int d = f0.dim;
  const int nd = f0.ambient - d;
  std::vector<Vec> basis = f0.basis;
  std::vector<Vec> normals = f0.normals;
  std::size_t t = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < nd; ++j) {
      const double a = u[t++];
      const double c = std::cos(a), s = std::sin(a);
      const Vec bi = basis[static_cast<std::size_t>(i)];
      const Vec nj = normals[static_cast<std::size_t>(j)];
      basis[static_cast<std::size_t>(i)] = bi * c + nj * s;
      normals[static_cast<std::size_t>(j)] = nj * c - bi * s;
    }
  }
  Vec base = f0.base;
  for (int j = 0; j < nd; ++j) {
    if (t < u.size()) base = base + normals[static_cast<std::size_t>(j)] * u[t++];
  }
  Plane out;
  out.base = base;
  out.dim = d;
  out.ambient = f0.ambient;
  for (int i = 0; i < d && i < 2; ++i) {
    out.basis[static_cast<std::size_t>(i)] = basis[static_cast<std::size_t>(i)];
  }
  return out;
}

struct SearchResult {
  std::vector<double> x;
  double value = 0.0;
  int evals = 0;
};

// Greedy coordinate descent with step halving; stops on budget, on steps
// shrunk 1e4-fold, or when a successful pass improves by less than rel_tol.
SearchResult coordinate_search(const std::function<double(const std::vector<double>&)>& f,
                               std::vector<double> x0, std::vector<double> step, int budget,
                               double rel_tol) {
  SearchResult r;
  r.x = std::move(x0);
  r.value = f(r.x);
  r.evals = 1;
  double floor = 0.0;
  for (double s : step) floor = std::max(floor, s);
  floor *= 1e-4;
  while (r.evals < budget) {
    const double before = r.value;
    bool moved = false;
    for (std::size_t i = 0; i < r.x.size() && r.evals < budget; ++i) {
      for (double sgn : {1.0, -1.0}) {
        if (r.evals >= budget) break;
        std::vector<double> y = r.x;
        y[i] += sgn * step[i];
        const double fy = f(y);
        ++r.evals;
        if (fy < r.value) {
          r.value = fy;
          r.x = std::move(y);
          moved = true;
          break;
        }
      }
    }
    if (!moved) {
      double mx = 0.0;
      for (double& s : step) {
        s *= 0.5;
        mx = std::max(mx, s);
      }
      if (mx < floor) break;
    } else if (before - r.value < rel_tol * std::max(std::abs(before), 1e-300)) {
      break;
    }
  }
  return r;
}

Plane canonical_plane(Vec base, int d, int n) {
  Plane pl;
  pl.base = base;
  pl.dim = d;
  pl.ambient = n;
  for (int i = 0; i < d && i < 2; ++i) {
    Vec e = Vec::zero(n);
    e[i] = 1.0;
    pl.basis[static_cast<std::size_t>(i)] = e;
  }
  return pl;
}

// Local-spacing weights (k-th neighbour distance to the power d) so denser-
// sampled stretches do not dominate the principal-component fit.
std::vector<double> density_weights(const SampledSet& S, const std::vector<std::size_t>& ids,
                                    int d, double r) {
  const std::size_t m = ids.size();
  std::vector<double> w(m, 1.0);
  if (m < 3) return w;
  const auto k = static_cast<std::size_t>(std::min<std::size_t>(4, m - 1));
  const KdIndex& idx = S.index();
  const double r0 = std::max(S.resolution, 1e-3 * r);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec x = S.points.get(ids[i]);
    double rr = r0;
    double dk = rr;
    for (int round = 0; round < 48; ++round) {
      auto hits = idx.within(Ball(x, rr));
      if (hits.size() > k) {
        dk = (S.points.get(hits[k]) - x).norm();
        break;
      }
      rr *= 2.0;
    }
    w[i] = pow_int(dk, d);
  }
  return w;
}

// The plane as a sampled set: a grid of pitch delta within 2B, carrying the
// exact plane distance as its oracle.
SampledSet plane_grid(const Plane& pl, const Ball& B, double delta) {
  const int n = pl.ambient;
  SampledSet g;
  g.points = PointCloud(n);
  g.resolution = delta;
  g.ambient_dim = n;
  g.target_dim = pl.dim;
  const Vec c0 = pl.project(B.center);
  const double R = 2.0 * B.radius;
  const double R2 = R * R;
  const int m = static_cast<int>(std::floor(R / delta));
  if (pl.dim == 1) {
    for (int i = -m; i <= m; ++i) {
      const Vec x = c0 + pl.basis[0] * (i * delta);
      if ((x - B.center).norm2() <= R2) g.points.add(x);
    }
  } else {
    for (int i = -m; i <= m; ++i) {
      for (int j = -m; j <= m; ++j) {
        const Vec x = c0 + pl.basis[0] * (i * delta) + pl.basis[1] * (j * delta);
        if ((x - B.center).norm2() <= R2) g.points.add(x);
      }
    }
  }
  g.dist_oracle = [pl](const Vec& x) { return pl.dist(x); };
  return g;
}

double grid_pitch(const SampledSet& S, const Ball& B) {
  const double base = S.target_dim == 1 ? B.radius / 128.0 : B.radius / 32.0;
  return std::max(base, S.resolution);
}

// Evaluation cloud for one cube: net points `sub_levels` below the cube's
// level inside scale*B_Q, falling back to the full-set distance oracle.
// When the lattice has no level that deep, the window is filled from the
// source cloud instead so shallow lattices do not starve the estimate.
SampledSet cube_subsample(const CubeLattice& lat, const SampledSet& S, const Cube& q,
                          double scale, int sub_levels) {
  const int n = S.points.dim();
  SampledSet sub;
  sub.points = PointCloud(n);
  const int L = q.id.k + sub_levels;
  if (L <= lat.max_level) {
    const auto ids = lat.center_index(L).within(q.ball(scale));
    const PointCloud& cs = lat.centers(L);
    for (auto i : ids) sub.points.add(cs.get(i));
    double sep = lat.diam;
    for (int k = 0; k < L; ++k) sep *= lat.rho;
    sub.resolution = std::max(sep, S.resolution);
  } else {
    const auto ids = S.index().within(q.ball(scale));
    for (auto i : ids) sub.points.add(S.points.get(i));
    sub.resolution = S.resolution;
  }
  sub.ambient_dim = n;
  sub.target_dim = S.target_dim;
  if (S.dist_oracle) {
    sub.dist_oracle = S.dist_oracle;
  } else {
    sub.dist_oracle = [&S](const Vec& x) { return S.index().nearest(x).dist; };
  }
  return sub;
}

// Subtree of `root`, level-major, each level sorted by cube index.
std::vector<CubeId> subtree_cubes(const CubeLattice& lat, CubeId root) {
  std::vector<CubeId> out;
  std::vector<int> cur{root.j};
  int k = root.k;
  while (!cur.empty()) {
    std::sort(cur.begin(), cur.end());
    for (int j : cur) out.push_back(CubeId{k, j});
    std::vector<int> next;
    for (int j : cur) {
      const Cube& q = lat.cube(CubeId{k, j});
      next.insert(next.end(), q.children.begin(), q.children.end());
    }
    cur = std::move(next);
    ++k;
  }
  return out;
}

void check_cube_id(const CubeLattice& lat, CubeId id, const char* what) {
  if (id.k < 0 || id.k >= lat.level_count() ||
      id.j < 0 || static_cast<std::size_t>(id.j) >= lat.level(id.k).size()) {
    fail(Errc::invalid_argument, std::string(what) + " is not a cube of this lattice");
  }
}

}  // namespace

double beta_content(const SampledSet& S, const Ball& B, const Plane& L, int d, double p,
                    const ProfileOptions& opts) {
  if (!(p > 0.0)) fail(Errc::invalid_argument, "beta exponent must be positive");
  if (d < 1) fail(Errc::invalid_argument, "beta dimension must be at least 1");
  const DistProfile prof = plane_distance_stats(S, B, L, d, opts);
  if (prof.points == 0 || prof.t.empty()) return 0.0;
  // clamped head: constant content on [0, t_0] integrates in closed form
  double acc = prof.content.front() * std::pow(prof.t.front(), p) / p;
  for (std::size_t i = 0; i + 1 < prof.t.size(); ++i) {
    const double f0 = prof.content[i] * std::pow(prof.t[i], p - 1.0);
    const double f1 = prof.content[i + 1] * std::pow(prof.t[i + 1], p - 1.0);
    acc += 0.5 * (f0 + f1) * (prof.t[i + 1] - prof.t[i]);
  }
  acc /= pow_int(B.radius, d);
  return std::pow(acc, 1.0 / p);
}

BetaInfResult beta_inf(const SampledSet& S, const Ball& B, int d, double p, int search_budget,
                       const ProfileOptions& opts) {
  if (search_budget < 1) fail(Errc::invalid_argument, "search budget must be at least 1");
  if (!(p > 0.0)) fail(Errc::invalid_argument, "beta exponent must be positive");
  const int n = S.points.dim();
  if (d < 1 || d >= n) fail(Errc::invalid_argument, "beta dimension out of range");
  if (!(B.radius > 0.0)) fail(Errc::invalid_argument, "ball radius must be positive");

  BetaInfResult out;
  std::vector<std::size_t> ids;
  if (S.size() > 0) ids = S.index().within(B);
  if (ids.size() < static_cast<std::size_t>(d) + 1) {
    out.degenerate = true;
    Vec base = B.center;
    if (!ids.empty()) {
      base = Vec::zero(n);
      for (auto i : ids) base = base + S.points.get(i);
      base = base * (1.0 / static_cast<double>(ids.size()));
    }
    out.plane = canonical_plane(base, d, n);
    return out;
  }

  const std::vector<double> w = density_weights(S, ids, d, B.radius);
  const PlaneFrame f0 = make_frame(fit_plane_pca(S.points, ids, w, d));
  const int nd = n - d;
  const int nrot = d * nd;
  std::vector<double> x0(static_cast<std::size_t>(nrot + nd), 0.0);
  std::vector<double> step(x0.size());
  for (int i = 0; i < nrot; ++i) step[static_cast<std::size_t>(i)] = std::numbers::pi / 12.0;
  for (int i = nrot; i < nrot + nd; ++i) step[static_cast<std::size_t>(i)] = 0.05 * B.radius;

  const auto objective = [&](const std::vector<double>& u) {
    return beta_content(S, B, plane_with_params(f0, u), d, p, opts);
  };
  SearchResult sr = coordinate_search(objective, std::move(x0), std::move(step), search_budget, 1e-6);
  out.beta = sr.value;
  out.plane = plane_with_params(f0, sr.x);
  out.evals = sr.evals;
  return out;
}

BilateralResult bilateral_beta(const SampledSet& S, const Ball& B, int search_budget) {
  if (search_budget < 1) fail(Errc::invalid_argument, "search budget must be at least 1");
  if (!(B.radius > 0.0)) fail(Errc::invalid_argument, "ball radius must be positive");
  if (S.size() == 0) fail(Errc::degenerate_input, "bilateral beta needs a nonempty set");
  const int n = S.points.dim();
  const int d = S.target_dim;
  if (d < 1 || d >= n) fail(Errc::invalid_argument, "target dimension out of range");

  const std::vector<std::size_t> ids = S.index().within(B);
  BilateralResult out;
  out.one_sided = ids.empty();

  // restriction of S to B, still answering distance queries for the full set
  SampledSet sb;
  sb.points = PointCloud(n);
  for (auto i : ids) sb.points.add(S.points.get(i));
  sb.resolution = S.resolution;
  sb.ambient_dim = n;
  sb.target_dim = d;
  if (S.dist_oracle) {
    sb.dist_oracle = S.dist_oracle;
  } else {
    sb.dist_oracle = [&S](const Vec& x) { return S.index().nearest(x).dist; };
  }

  Plane init;
  if (ids.size() >= static_cast<std::size_t>(d) + 1) {
    const std::vector<double> w = density_weights(S, ids, d, B.radius);
    init = fit_plane_pca(S.points, ids, w, d);
  } else {
    Vec base = B.center;
    if (!ids.empty()) base = S.points.get(ids.front());
    init = canonical_plane(base, d, n);
  }
  if (out.one_sided) init.base = B.center;

  const PlaneFrame f0 = make_frame(init);
  const int nd = n - d;
  const int nrot = d * nd;
  const int nparams = out.one_sided ? nrot : nrot + nd;
  std::vector<double> x0(static_cast<std::size_t>(nparams), 0.0);
  std::vector<double> step(x0.size());
  for (int i = 0; i < nrot; ++i) step[static_cast<std::size_t>(i)] = std::numbers::pi / 12.0;
  for (int i = nrot; i < nparams; ++i) step[static_cast<std::size_t>(i)] = 0.05 * B.radius;

  const double delta = grid_pitch(S, B);
  const bool one_sided = out.one_sided;
  const auto objective = [&](const std::vector<double>& u) {
    const Plane pl = plane_with_params(f0, u);
    const SampledSet pg = plane_grid(pl, B, delta);
    if (pg.size() == 0) return 4.0;  // plane left 2B entirely; worse than any real value
    const NormalizedDistance nv = normalized_distance(sb, pg, B);
    if (one_sided && nv.empty_f) return 4.0;
    return nv.value;
  };

  // Every tilt of a plane through the fitted base can exit the far side of the
  // ball at nearly full radius, leaving the descent on a flat ridge.  Restarts
  // a quarter turn away break that symmetry.
  std::vector<std::vector<double>> starts;
  starts.push_back(x0);
  for (int j = 0; j < nrot; ++j) {
    std::vector<double> s(x0.size(), 0.0);
    s[static_cast<std::size_t>(j)] = std::numbers::pi / 2.0;
    starts.push_back(std::move(s));
  }
  SearchResult best;
  best.value = std::numeric_limits<double>::infinity();
  int total_evals = 0;
  for (std::vector<double>& st : starts) {
    SearchResult sr = coordinate_search(objective, std::move(st), step, search_budget, 1e-6);
    total_evals += sr.evals;
    if (sr.value < best.value) best = std::move(sr);
  }
  out.bbeta = best.value;
  out.plane = plane_with_params(f0, best.x);
  out.evals = total_evals;
  return out;
}

std::vector<BetaRecord> compute_beta_records(const CubeLattice& lattice, const SampledSet& S,
                                             const SweepParams& params) {
  if (!(params.M >= 1.0) || !(params.C0 >= 1.0)) {
    fail(Errc::invalid_argument, "ball scales must be at least 1");
  }
  if (!(params.p > 0.0)) fail(Errc::invalid_argument, "beta exponent must be positive");
  if (params.budget < 1) fail(Errc::invalid_argument, "search budget must be at least 1");
  if (params.sub_levels < 0) fail(Errc::invalid_argument, "sub_levels must be nonnegative");

  std::vector<CubeId> all;
  for (int k = 0; k < lattice.level_count(); ++k) {
    for (std::size_t j = 0; j < lattice.level(k).size(); ++j) {
      all.push_back(CubeId{k, static_cast<int>(j)});
    }
  }
  if (S.size() > 0) S.index();  // materialize before the parallel map

  const double scale = std::max(params.M, params.C0);
  const int d = S.target_dim;
  std::vector<BetaRecord> records(all.size());
  parallel_for(all.size(), [&](std::size_t i) {
    const Cube& q = lattice.cube(all[i]);
    const SampledSet sub = cube_subsample(lattice, S, q, scale, params.sub_levels);
    const BetaInfResult bi = beta_inf(sub, q.ball(params.M), d, params.p, params.budget);
    const BilateralResult bb = bilateral_beta(sub, q.ball(params.C0), params.budget);
    BetaRecord rec;
    rec.cube = all[i];
    rec.beta = bi.beta;
    rec.bbeta = bb.bbeta;
    rec.plane = bi.plane;
    rec.M = params.M;
    rec.C0 = params.C0;
    rec.p = params.p;
    records[i] = std::move(rec);
  });
  return records;
}

DeviationReport linear_deviation(const CubeLattice& lattice, const SampledSet& S, CubeId root,
                                 double M, double p, int search_budget) {
  check_cube_id(lattice, root, "root");
  if (!(M >= 1.0)) fail(Errc::invalid_argument, "ball scale must be at least 1");
  if (!(p > 0.0)) fail(Errc::invalid_argument, "beta exponent must be positive");
  if (search_budget < 1) fail(Errc::invalid_argument, "search budget must be at least 1");

  const std::vector<CubeId> list = subtree_cubes(lattice, root);
  if (S.size() > 0) S.index();
  const int d = S.target_dim;
  const int sub_levels = 6;

  DeviationReport rep;
  rep.root = root;
  rep.truncation_level = lattice.max_level;
  rep.per_cube.resize(list.size());
  parallel_for(list.size(), [&](std::size_t i) {
    const Cube& q = lattice.cube(list[i]);
    const SampledSet sub = cube_subsample(lattice, S, q, M, sub_levels);
    const BetaInfResult bi = beta_inf(sub, q.ball(M), d, p, search_budget);
    rep.per_cube[i] = DeviationEntry{list[i], bi.beta, bi.beta * bi.beta * pow_int(q.side, d)};
  });

  rep.root_mass = pow_int(lattice.cube(root).side, d);
  double total = rep.root_mass;
  for (const DeviationEntry& e : rep.per_cube) total += e.contribution;
  rep.total = total;
  return rep;
}

double blwg_sum(const CubeLattice& lattice, const std::vector<BetaRecord>& betas, CubeId root,
                double epsilon, double C0) {
  if (!(epsilon > 0.0 && epsilon <= 2.0)) {
    fail(Errc::invalid_argument, "epsilon must lie in (0, 2]");
  }
  if (!(C0 >= 1.0)) fail(Errc::invalid_argument, "C0 must be at least 1");
  check_cube_id(lattice, root, "root");
  if (betas.size() != lattice.cube_count()) {
    fail(Errc::invalid_argument, "beta records do not match the lattice");
  }
  const int d = lattice.source ? lattice.source->target_dim : 1;
  double sum = 0.0;
  for (CubeId id : subtree_cubes(lattice, root)) {
    const BetaRecord& rec = betas[lattice.flat_index(id)];
    if (rec.cube != id) fail(Errc::invalid_argument, "beta records are not in lattice order");
    if (rec.C0 != C0) fail(Errc::invalid_argument, "beta records carry a different C0");
    if (rec.bbeta >= epsilon) sum += pow_int(lattice.cube(id).side, d);
  }
  return sum;
}

BaupResult baup_test(const SampledSet& S, const Cube& q, double M, double epsilon, int max_planes,
                     int budget) {
  if (!(M >= 1.0)) fail(Errc::invalid_argument, "ball scale must be at least 1");
  if (!(epsilon > 0.0)) fail(Errc::invalid_argument, "epsilon must be positive");
  if (max_planes < 1) fail(Errc::invalid_argument, "need at least one plane");
  if (budget < 1) fail(Errc::invalid_argument, "budget must be at least 1");
  if (S.size() == 0) fail(Errc::degenerate_input, "plane-union test needs a nonempty set");

  const Ball B = q.ball(M);
  const int d = S.target_dim;
  const std::vector<std::size_t> ids = S.index().within(B);

  BaupResult out;
  {
    const BilateralResult one = bilateral_beta(S, B, budget);
    out.achieved = one.bbeta;
    out.planes = {one.plane};
  }

  const double delta = grid_pitch(S, B);
  const std::size_t need = static_cast<std::size_t>(d) + 1;
  for (int c = 2; c <= max_planes; ++c) {
    if (ids.size() < static_cast<std::size_t>(c) * need) break;

    const Plane g = fit_plane_pca(S.points, ids, {}, d);
    const PlaneFrame gf = make_frame(g);
    const std::vector<std::size_t>& order = ids;
    const std::size_t m = order.size();

    const auto slab_seed = [&](const Vec& v) {
      std::vector<std::size_t> perm(m);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        const double ca = (S.points.get(order[a]) - g.base).dot(v);
        const double cb = (S.points.get(order[b]) - g.base).dot(v);
        if (ca != cb) return ca < cb;
        return order[a] < order[b];
      });
      std::vector<int> grp(m);
      for (std::size_t i = 0; i < m; ++i) {
        grp[perm[i]] = static_cast<int>(i * static_cast<std::size_t>(c) / m);
      }
      return grp;
    };

    // Seeds: slabs across the dominant and the flattest fitted directions,
    // plus angular sectors about the base -- the split that untangles
    // crossings, where every slab seed collapses to one shared local minimum.
    std::vector<std::vector<int>> seeds;
    seeds.push_back(slab_seed(gf.basis[0]));
    seeds.push_back(slab_seed(gf.normals.back()));
    {
      std::vector<int> grp(m);
      for (std::size_t i = 0; i < m; ++i) {
        const Vec u = S.points.get(order[i]) - g.base;
        double a = std::atan2(u.dot(gf.normals[0]), u.dot(gf.basis[0]));
        if (a < 0.0) a += std::numbers::pi;
        if (a >= std::numbers::pi) a -= std::numbers::pi;
        grp[i] = std::min(c - 1, static_cast<int>(a / std::numbers::pi * c));
      }
      seeds.push_back(std::move(grp));
    }

    std::vector<std::vector<int>> evaluated;
    for (std::vector<int>& group : seeds) {
      std::vector<Plane> planes(static_cast<std::size_t>(c), g);
      const auto refit = [&]() {
        for (int gi = 0; gi < c; ++gi) {
          std::vector<std::size_t> members;
          for (std::size_t i = 0; i < m; ++i) {
            if (group[i] == gi) members.push_back(order[i]);
          }
          if (members.size() >= need) {
            planes[static_cast<std::size_t>(gi)] = fit_plane_pca(S.points, members, {}, d);
          }
        }
      };
      refit();
      for (int round = 0; round < budget; ++round) {
        bool changed = false;
        for (std::size_t i = 0; i < m; ++i) {
          const Vec x = S.points.get(order[i]);
          int best = 0;
          double bd = planes[0].dist(x);
          for (int gi = 1; gi < c; ++gi) {
            const double dd = planes[static_cast<std::size_t>(gi)].dist(x);
            if (dd < bd) {
              bd = dd;
              best = gi;
            }
          }
          if (group[i] != best) {
            group[i] = best;
            changed = true;
          }
        }
        if (!changed) break;
        refit();
      }
      if (std::find(evaluated.begin(), evaluated.end(), group) != evaluated.end()) continue;
      evaluated.push_back(group);

      // bilateral distance to the union of the fitted planes
      double eside = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const Vec x = S.points.get(order[i]);
        double bd = planes[0].dist(x);
        for (int gi = 1; gi < c; ++gi) {
          bd = std::min(bd, planes[static_cast<std::size_t>(gi)].dist(x));
        }
        eside = std::max(eside, bd);
      }
      double pside = 0.0;
      const double r2 = B.radius * B.radius;
      for (const Plane& pl : planes) {
        const SampledSet pg = plane_grid(pl, B, delta);
        for (std::size_t i = 0; i < pg.size(); ++i) {
          const Vec x = pg.points.get(i);
          if ((x - B.center).norm2() > r2) continue;
          pside = std::max(pside, S.dist(x));
        }
      }
      const double achieved = std::max(eside, pside) / B.radius;
      if (achieved < out.achieved) {
        out.achieved = achieved;
        out.planes = planes;
      }
    }
  }

  out.passes = out.achieved < epsilon;
  return out;
}

}  // namespace gmt
