#include "gmt/wos.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "gmt/parallel.hpp"
#include "gmt/rng.hpp"
#include "wos_detail.hpp"

namespace gmt::detail {

WalkPlan make_plan(const Domain& dom, const WosConfig& cfg) {
  if (cfg.walkers < 1) fail(Errc::invalid_argument, "walker count must be positive");
  if (cfg.max_steps < 1) fail(Errc::invalid_argument, "step cap must be positive");
  if (cfg.shell < 0.0) fail(Errc::invalid_argument, "shell must be positive");

  WalkPlan plan;
  plan.dom = &dom;
  plan.dim = dom.bbox.lo.n;
  plan.max_steps = cfg.max_steps;
  plan.scale =
      dom.boundary_samples.size() > 0 ? dom.boundary_samples.diameter() : dom.bbox.diagonal();
  if (!(plan.scale > 0.0)) fail(Errc::degenerate_input, "domain has no boundary scale");

  plan.shell = cfg.shell > 0.0 ? cfg.shell : 1e-4 * plan.scale;
  // a lower-bound oracle undershoots by up to the sampling resolution, so the
  // absorption band has to clear it
  if (dom.dist_is_lower_bound) {
    plan.shell = std::max(plan.shell, 3.0 * dom.boundary_samples.resolution);
  }

  if (dom.kind == DomainKind::complement_of_compact) {
    plan.far_center = dom.bbox.center();
    plan.far_radius =
        cfg.far_field_radius > 0.0 ? cfg.far_field_radius : 50.0 * plan.scale;
    plan.far_trigger = 2.0 * plan.far_radius;
    plan.reinsert = plan.dim == 2;
    plan.far_escape = plan.dim != 2;
  }
  return plan;
}

namespace {

// pull a walker at radius rho back onto the circle of radius R: the exterior
// hitting distribution of the plane walk is the interior kernel seen from the
// inverted point, a wrapped Cauchy with parameter R/rho sampled by inverse CDF
Vec pull_back(const Vec& c, double R, const Vec& rel, double rho, Rng& rng) {
  const double a = R / rho;
  const double u = rng.unif();
  const double th =
      2.0 * std::atan(((1.0 - a) / (1.0 + a)) * std::tan(Rng::pi * (u - 0.5)));
  const double cs = std::cos(th), sn = std::sin(th);
  const double ex = rel[0] / rho, ey = rel[1] / rho;
  return Vec(c[0] + R * (ex * cs - ey * sn), c[1] + R * (ex * sn + ey * cs));
}

}  // namespace

bool walk(const WalkPlan& plan, Vec x, Rng& rng, Vec& out) {
  for (int step = 0; step < plan.max_steps; ++step) {
    const double d = plan.dom->dist_boundary(x);
    if (d <= plan.shell) {
      out = x;
      return true;
    }
    if (plan.far_trigger > 0.0) {
      const Vec rel = x - plan.far_center;
      const double rho = rel.norm();
      if (rho > plan.far_trigger) {
        if (plan.far_escape) return false;
        x = pull_back(plan.far_center, plan.far_radius, rel, rho, rng);
        continue;
      }
    }
    const auto dir = rng.sphere_dir(plan.dim);
    for (int k = 0; k < plan.dim; ++k) x[k] += d * dir[k];
  }
  return false;
}

}  // namespace gmt::detail

namespace gmt {

namespace {

struct ResolvedTarget {
  const WosTarget* t = nullptr;
  std::unique_ptr<KdIndex> members;
  double tol = 0.0;
};

// lowest-id containing target, else the nearest within twice the shell
int attribute(const std::vector<ResolvedTarget>& targets, const Vec& y, double shell) {
  for (std::size_t s = 0; s < targets.size(); ++s) {
    const ResolvedTarget& rt = targets[s];
    if (rt.members) {
      if (rt.members->nearest(y).dist <= rt.tol) return static_cast<int>(s);
    } else if (rt.t->ball.contains(y)) {
      return static_cast<int>(s);
    }
  }
  double best = 2.0 * shell;
  int best_slot = -1;
  for (std::size_t s = 0; s < targets.size(); ++s) {
    const ResolvedTarget& rt = targets[s];
    const double d = rt.members
                         ? rt.members->nearest(y).dist
                         : std::max(0.0, (y - rt.t->ball.center).norm() - rt.t->ball.radius);
    if (d < best) {
      best = d;
      best_slot = static_cast<int>(s);
    }
  }
  return best_slot;
}

}  // namespace

HarmonicEstimate wos_measure(const Domain& dom, const Vec& x,
                             const std::vector<WosTarget>& targets, const WosConfig& cfg) {
  const detail::WalkPlan plan = detail::make_plan(dom, cfg);
  if (!dom.inside(x)) fail(Errc::pole_outside_domain, "pole is not an interior point");

  // attribution order is ascending id so overlaps resolve to the lowest id
  std::vector<ResolvedTarget> res(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) res[i].t = &targets[i];
  std::sort(res.begin(), res.end(), [](const ResolvedTarget& a, const ResolvedTarget& b) {
    return a.t->id < b.t->id;
  });
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (i > 0 && res[i].t->id == res[i - 1].t->id) {
      fail(Errc::invalid_argument, "target ids must be unique");
    }
    if (res[i].t->members.size() > 0) {
      res[i].members = std::make_unique<KdIndex>(res[i].t->members);
      res[i].tol = res[i].t->member_tol > 0.0 ? res[i].t->member_tol : 2.0 * plan.shell;
    } else if (!(res[i].t->ball.radius > 0.0)) {
      fail(Errc::invalid_argument, "target needs a ball of positive radius or member points");
    }
  }

  const std::size_t nt = res.size();
  const std::size_t slots = nt + 2;  // targets..., other, escaped
  const std::size_t nchunks = (cfg.walkers + detail::kWalkChunk - 1) / detail::kWalkChunk;
  std::vector<std::uint64_t> tally(nchunks * slots, 0);

  parallel_chunks(cfg.walkers, detail::kWalkChunk, [&](std::size_t b, std::size_t e) {
    std::uint64_t* t = tally.data() + (b / detail::kWalkChunk) * slots;
    for (std::size_t i = b; i < e; ++i) {
      Rng rng = Rng::stream(cfg.base_seed, i);
      Vec y;
      if (!detail::walk(plan, x, rng, y)) {
        ++t[nt + 1];
        continue;
      }
      const int slot = attribute(res, y, plan.shell);
      ++t[slot < 0 ? nt : static_cast<std::size_t>(slot)];
    }
  });

  std::vector<std::uint64_t> total(slots, 0);
  for (std::size_t c = 0; c < nchunks; ++c) {
    for (std::size_t s = 0; s < slots; ++s) total[s] += tally[c * slots + s];
  }

  const double w = static_cast<double>(cfg.walkers);
  HarmonicEstimate est;
  est.walkers = cfg.walkers;
  est.base_seed = cfg.base_seed;
  est.shell = plan.shell;
  est.pole = x;
  est.masses.reserve(nt);
  for (std::size_t s = 0; s < nt; ++s) {
    TargetMass m;
    m.id = res[s].t->id;
    m.count = total[s];
    m.mass = static_cast<double>(total[s]) / w;
    m.se = std::sqrt(m.mass * (1.0 - m.mass) / w);
    est.masses.push_back(m);
  }
  est.other = static_cast<double>(total[nt]) / w;
  est.escaped = static_cast<double>(total[nt + 1]) / w;
  return est;
}

namespace {

double fundamental(double r, int dim) {
  return dim == 2 ? -std::log(r) / (2.0 * Rng::pi) : 1.0 / (4.0 * Rng::pi * r);
}

}  // namespace

GreenEstimate wos_green(const Domain& dom, const Vec& pole, const Vec& query,
                        const WosConfig& cfg) {
  const detail::WalkPlan plan = detail::make_plan(dom, cfg);
  if (!dom.inside(pole)) fail(Errc::pole_outside_domain, "pole is not an interior point");
  if (!dom.inside(query)) fail(Errc::pole_outside_domain, "query is not an interior point");
  const double sep = (query - pole).norm();
  if (!(sep > 0.0)) fail(Errc::invalid_argument, "pole and query must be distinct");

  struct Part {
    double s = 0.0, s2 = 0.0;
    std::uint64_t m = 0, esc = 0;
  };
  const std::size_t nchunks = (cfg.walkers + detail::kWalkChunk - 1) / detail::kWalkChunk;
  std::vector<Part> parts(nchunks);

  parallel_chunks(cfg.walkers, detail::kWalkChunk, [&](std::size_t b, std::size_t e) {
    Part& p = parts[b / detail::kWalkChunk];
    for (std::size_t i = b; i < e; ++i) {
      Rng rng = Rng::stream(cfg.base_seed, i);
      Vec y;
      if (!detail::walk(plan, query, rng, y)) {
        ++p.esc;
        continue;
      }
      const double phi = fundamental((y - pole).norm(), plan.dim);
      p.s += phi;
      p.s2 += phi * phi;
      ++p.m;
    }
  });

  double s = 0.0, s2 = 0.0;
  std::uint64_t m = 0, esc = 0;
  for (const Part& p : parts) {
    s += p.s;
    s2 += p.s2;
    m += p.m;
    esc += p.esc;
  }
  if (m == 0) fail(Errc::degenerate_input, "every walker hit the step cap");

  const double dm = static_cast<double>(m);
  GreenEstimate est;
  est.walkers = cfg.walkers;
  est.base_seed = cfg.base_seed;
  est.shell = plan.shell;
  est.value = fundamental(sep, plan.dim) - s / dm;
  const double var = std::max(0.0, (s2 - s * s / dm) / std::max(1.0, dm - 1.0));
  est.se = std::sqrt(var / dm);
  est.escaped = static_cast<double>(esc) / static_cast<double>(cfg.walkers);
  return est;
}

}  // namespace gmt
