#include "gmt/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "gmt/content.hpp"
#include "gmt/parallel.hpp"
#include "gmt/rng.hpp"
#include "wos_detail.hpp"

namespace gmt {

Theta density(double mass, double se, double diam, int d) {
  if (!(diam > 0.0)) fail(Errc::invalid_argument, "diameter must be positive");
  if (d < 0) fail(Errc::invalid_argument, "dimension must be nonnegative");
  const double scale = std::pow(diam, d);
  return Theta{mass / scale, se / scale};
}

BourgainResult check_bourgain(const Domain& dom, const Ball& b, int n_poles,
                              const WosConfig& cfg) {
  if (n_poles < 1) fail(Errc::invalid_argument, "need at least one pole");
  if (!(b.radius > 0.0)) fail(Errc::invalid_argument, "ball radius must be positive");
  const detail::WalkPlan plan = detail::make_plan(dom, cfg);

  Rng rng(mix_seed(cfg.base_seed, 0x626f7572ULL));
  std::vector<Vec> poles;
  const int budget = 100000;
  for (int attempt = 0; attempt < budget && static_cast<int>(poles.size()) < n_poles;
       ++attempt) {
    Vec p = b.center;
    for (int k = 0; k < plan.dim; ++k) p[k] += b.radius * rng.unif(-1.0, 1.0);
    if (!b.contains(p)) continue;
    if (!dom.inside(p)) continue;
    if (dom.dist_boundary(p) <= plan.shell) continue;
    poles.push_back(p);
  }
  if (poles.empty()) {
    fail(Errc::no_interior_point, "no interior point found in the ball after 100000 attempts");
  }

  BourgainResult out;
  out.min_mass = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < poles.size(); ++k) {
    WosConfig run = cfg;
    run.base_seed = mix_seed(cfg.base_seed, 0x706f6c65ULL, k);
    const HarmonicEstimate est =
        wos_measure(dom, poles[k], {WosTarget::ball_region(0, b.scaled(2.0))}, run);
    const TargetMass& m = est.masses.front();
    out.poles.push_back(poles[k]);
    out.per_pole.push_back(m);
    if (m.mass < out.min_mass) {
      out.min_mass = m.mass;
      out.min_se = m.se;
      out.min_pole = poles[k];
    }
  }
  return out;
}

DoublingResult check_doubling(const Domain& dom, const std::vector<Ball>& balls, double alpha,
                              const WosConfig& cfg, double A) {
  if (!(alpha > 0.0)) fail(Errc::invalid_argument, "alpha must be positive");
  if (!(A > 1.0)) fail(Errc::invalid_argument, "dilation must exceed 1");
  const detail::WalkPlan plan = detail::make_plan(dom, cfg);

  DoublingResult out;
  for (std::size_t bi = 0; bi < balls.size(); ++bi) {
    const Ball& b = balls[bi];
    if (!(b.radius > 0.0)) fail(Errc::invalid_argument, "ball radius must be positive");
    const Ball big = b.scaled(A);
    const auto near_ids = dom.boundary_samples.index().within(big);
    if (near_ids.empty()) {
      fail(Errc::degenerate_input, "ball misses the boundary samples");
    }
    std::vector<Vec> wall;
    wall.reserve(near_ids.size());
    for (auto i : near_ids) wall.push_back(dom.boundary_samples.points.get(i));

    // pole in AB, interior, and separated from the boundary patch in
    // proportion to its distance from the ball center
    Rng rng(mix_seed(cfg.base_seed, 0x64626cULL, bi));
    Vec pole;
    bool found = false;
    for (int attempt = 0; attempt < 100000 && !found; ++attempt) {
      Vec p = big.center;
      for (int k = 0; k < plan.dim; ++k) p[k] += big.radius * rng.unif(-1.0, 1.0);
      if (!big.contains(p)) continue;
      if (!dom.inside(p)) continue;
      if (dom.dist_boundary(p) <= plan.shell) continue;
      double wall_dist = std::numeric_limits<double>::infinity();
      for (const Vec& s : wall) wall_dist = std::min(wall_dist, (p - s).norm());
      if (wall_dist < alpha * (p - b.center).norm()) continue;
      pole = p;
      found = true;
    }
    if (!found) {
      fail(Errc::no_interior_point,
           "no admissible pole found near the ball after 100000 attempts");
    }

    WosConfig run = cfg;
    run.base_seed = mix_seed(cfg.base_seed, 0x646d61ULL, bi);
    const HarmonicEstimate est = wos_measure(
        dom, pole, {WosTarget::ball_region(0, b), WosTarget::ball_region(1, big)}, run);
    const double inner = est.at(0).mass;
    const double outer = inner + est.at(1).mass;  // attribution partitions AB
    out.poles.push_back(pole);
    out.ratios.push_back(inner > 0.0 ? outer / inner
                                     : std::numeric_limits<double>::infinity());
  }
  out.max_ratio = 0.0;
  for (double r : out.ratios) out.max_ratio = std::max(out.max_ratio, r);
  return out;
}

namespace {

// surface mass of one cube from the content estimator, in the cube's frame
double cube_surface_mass(const CubeLattice& lat, const Cube& q, int depth) {
  const SampledSet& S = *lat.source;
  PointCloud rel(S.points.dim());
  const auto mem = lat.members(q);
  rel.reserve(mem.size());
  for (int m : mem) rel.add(S.points.get(static_cast<std::size_t>(m)) - q.center);
  std::vector<std::uint32_t> idx(rel.size());
  std::iota(idx.begin(), idx.end(), 0u);
  const double r = q.side * std::max(1.0, lat.outer_ratio);
  // keep cover cells above the sampling pitch or isolated samples read as dust
  if (S.resolution > 0.0) {
    const double lim = std::log2(r / (2.0 * S.resolution));
    depth = lim > 0.0 ? std::min(depth, static_cast<int>(lim)) : 0;
  }
  return content_of_subset(rel.ptrs(), rel.dim(), idx, r, S.target_dim, depth);
}

}  // namespace

LogIntegralResult log_integral(const Domain& dom, const CubeLattice& lat, CubeId q0,
                               const Vec& pole, int depth, const WosConfig& cfg,
                               double pole_margin) {
  if (lat.source == nullptr) fail(Errc::invalid_argument, "lattice has no source set");
  if (q0.k < 0 || q0.k >= lat.level_count() ||
      q0.j >= static_cast<int>(lat.level(q0.k).size())) {
    fail(Errc::invalid_argument, "no such cube");
  }
  if (depth < 1) fail(Errc::invalid_argument, "depth must be positive");
  if (q0.k + depth >= lat.level_count()) {
    fail(Errc::invalid_argument, "depth reaches below the lattice bottom");
  }
  const Cube& root = lat.cube(q0);
  if ((pole - root.center).norm() <= pole_margin * root.side) {
    fail(Errc::pole_too_close, "pole must stay outside the dilated root ball");
  }
  const detail::WalkPlan plan = detail::make_plan(dom, cfg);
  if (!dom.inside(pole)) fail(Errc::pole_outside_domain, "pole is not an interior point");

  std::vector<CubeId> bottom{q0};
  for (int step = 0; step < depth; ++step) {
    std::vector<CubeId> next;
    for (CubeId id : bottom) {
      for (int c : lat.cube(id).children) next.push_back(CubeId{id.k + 1, c});
    }
    bottom = std::move(next);
  }
  std::sort(bottom.begin(), bottom.end());

  const SampledSet& S = *lat.source;
  std::vector<int> owner(S.size(), -1);
  for (std::size_t s = 0; s < bottom.size(); ++s) {
    for (int m : lat.members(bottom[s])) owner[static_cast<std::size_t>(m)] = static_cast<int>(s);
  }
  S.index();  // built once, read concurrently below

  const std::size_t nb = bottom.size();
  const std::size_t slots = nb + 2;
  const std::size_t nchunks = (cfg.walkers + detail::kWalkChunk - 1) / detail::kWalkChunk;
  std::vector<std::uint64_t> tally(nchunks * slots, 0);
  parallel_chunks(cfg.walkers, detail::kWalkChunk, [&](std::size_t b, std::size_t e) {
    std::uint64_t* t = tally.data() + (b / detail::kWalkChunk) * slots;
    for (std::size_t i = b; i < e; ++i) {
      Rng rng = Rng::stream(cfg.base_seed, i);
      Vec y;
      if (!detail::walk(plan, pole, rng, y)) {
        ++t[nb + 1];
        continue;
      }
      const int slot = owner[S.index().nearest(y).index];
      ++t[slot < 0 ? nb : static_cast<std::size_t>(slot)];
    }
  });
  std::vector<std::uint64_t> counts(slots, 0);
  for (std::size_t c = 0; c < nchunks; ++c) {
    for (std::size_t s = 0; s < slots; ++s) counts[s] += tally[c * slots + s];
  }

  const double w = static_cast<double>(cfg.walkers);
  const double floor_mass = 1.0 / (10.0 * w);
  LogIntegralResult out;
  out.walkers = cfg.walkers;
  out.depth = depth;
  out.per_cube.reserve(nb);
  for (std::size_t s = 0; s < nb; ++s) {
    LogCube lc;
    lc.id = bottom[s];
    lc.sigma = cube_surface_mass(lat, lat.cube(bottom[s]), 8);
    const double p = static_cast<double>(counts[s]) / w;
    lc.se = std::sqrt(p * (1.0 - p) / w);
    lc.floored = counts[s] == 0;
    lc.omega = lc.floored ? floor_mass : p;
    out.sigma_q0 += lc.sigma;
    out.omega_q0 += lc.omega;
    out.per_cube.push_back(lc);
  }
  if (!(out.sigma_q0 > 0.0)) {
    fail(Errc::degenerate_input, "bottom cubes carry no surface mass");
  }

  double jensen = 0.0;
  for (const LogCube& lc : out.per_cube) {
    if (lc.sigma > 0.0) jensen += (lc.sigma / out.sigma_q0) * std::log(lc.sigma / lc.omega);
    if (lc.floored) out.flagged_mass += lc.sigma / out.sigma_q0;
  }
  out.value = 1.0 + jensen + std::log(out.omega_q0 / out.sigma_q0);
  return out;
}

double hruscev_bound(double ell_q0_d, double content_e, double beta_sum_e, double C) {
  if (!(content_e > 0.0)) fail(Errc::invalid_argument, "content must be positive");
  return std::exp(-C * (ell_q0_d / content_e) * std::exp(C * beta_sum_e / content_e));
}

}  // namespace gmt
