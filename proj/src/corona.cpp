#include "gmt/corona.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "gmt/parallel.hpp"
#include "gmt/rng.hpp"
#include "wos_detail.hpp"

namespace gmt {
namespace {

constexpr std::uint64_t kTreeTag = 0x636f72ULL;
constexpr std::uint64_t kVerifyTag = 0x76657269ULL;

double radical_inverse(std::uint64_t i, std::uint32_t base) {
  const double inv = 1.0 / base;
  double f = inv, r = 0.0;
  while (i != 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

// absorption points of one walker batch, walker order
struct PoleBatch {
  std::vector<Vec> hits;
  std::size_t walkers = 0;
};

PoleBatch run_pole(const detail::WalkPlan& plan, const Vec& pole, std::uint64_t seed,
                   std::size_t walkers) {
  const std::size_t nchunk = (walkers + detail::kWalkChunk - 1) / detail::kWalkChunk;
  std::vector<std::vector<Vec>> part(nchunk);
  parallel_chunks(walkers, detail::kWalkChunk, [&](std::size_t b, std::size_t e) {
    auto& out = part[b / detail::kWalkChunk];
    out.reserve(e - b);
    for (std::size_t i = b; i < e; ++i) {
      Rng rng = Rng::stream(seed, i);
      Vec y;
      if (detail::walk(plan, pole, rng, y)) out.push_back(y);
    }
  });
  PoleBatch pb;
  pb.walkers = walkers;
  std::size_t total = 0;
  for (const auto& p : part) total += p.size();
  pb.hits.reserve(total);
  for (const auto& p : part) pb.hits.insert(pb.hits.end(), p.begin(), p.end());
  return pb;
}

Theta ball_density(const PoleBatch& pb, const Ball& b, int d) {
  std::size_t hit = 0;
  for (const Vec& y : pb.hits)
    if (b.contains(y)) ++hit;
  const double w = static_cast<double>(pb.walkers);
  const double p = static_cast<double>(hit) / w;
  return density(p, std::sqrt(p * (1.0 - p) / w), b.diameter(), d);
}

void check_params(const CoronaParams& pr) {
  if (!(pr.lambda >= 1.0)) fail(Errc::invalid_argument, "ball inflation must be at least 1");
  if (!(pr.A > 1.0)) fail(Errc::invalid_argument, "high-density threshold must exceed 1");
  if (!(pr.tau > 0.0 && pr.tau < 1.0))
    fail(Errc::invalid_argument, "low-density threshold must lie in (0, 1)");
  if (!(pr.epsilon > 0.0 && pr.epsilon < 1.0))
    fail(Errc::invalid_argument, "flatness threshold must lie in (0, 1)");
  if (!(pr.M >= 3.0)) fail(Errc::invalid_argument, "beta inflation must be at least 3");
  if (!(pr.c > 0.0 && pr.c < 0.5))
    fail(Errc::invalid_argument, "corkscrew parameter must lie in (0, 1/2)");
}

double side_pow(double side, int d) {
  double r = 1.0;
  for (int i = 0; i < d; ++i) r *= side;
  return r;
}

}  // namespace

std::optional<Vec> find_corkscrew(const Domain& dom, const Ball& b, double c) {
  if (!(b.radius > 0.0)) fail(Errc::invalid_argument, "ball radius must be positive");
  if (!(c > 0.0 && c < 0.5))
    fail(Errc::invalid_argument, "corkscrew parameter must lie in (0, 1/2)");
  const double rin = (1.0 - 2.0 * c) * b.radius;
  const double clearance = 2.0 * c * b.radius;
  for (std::uint64_t i = 0; i < 4096; ++i) {
    Vec x = b.center;
    x[0] += (2.0 * radical_inverse(i, 2) - 1.0) * rin;
    x[1] += (2.0 * radical_inverse(i, 3) - 1.0) * rin;
    if ((x - b.center).norm() > rin) continue;
    if (!dom.inside(x)) continue;
    if (dom.dist_boundary(x) >= clearance) return x;
  }
  return std::nullopt;
}

CoronaResult corona_decompose(const Domain& dom, const CubeLattice& lat,
                              const std::vector<BetaRecord>& betas, CubeId q0,
                              const CoronaParams& params, const WosConfig& cfg) {
  check_params(params);
  if (lat.source == nullptr) fail(Errc::invalid_argument, "lattice has no source set");
  if (q0.k < 0 || q0.k >= lat.level_count() ||
      q0.j < 0 || q0.j >= static_cast<int>(lat.level(q0.k).size()))
    fail(Errc::invalid_argument, "no such cube");
  if (betas.size() != lat.cube_count())
    fail(Errc::invalid_argument, "beta records do not cover the lattice");
  if (cfg.walkers < 1) fail(Errc::invalid_argument, "need at least one walker");

  const int d = lat.source->target_dim;
  const int bottom = lat.level_count() - 1;
  const int trunc = params.k0 < 0 ? bottom : std::min(params.k0, bottom);
  if (q0.k > trunc) fail(Errc::invalid_argument, "root lies below the truncation level");

  auto rec = [&](CubeId id) -> const BetaRecord& {
    const BetaRecord& r = betas[lat.flat_index(id)];
    if (r.cube != id) fail(Errc::invalid_argument, "beta records are not in sweep order");
    return r;
  };
  // the flatness and Jones scores must live on the same ball
  if (rec(q0).M != params.M || rec(q0).C0 != params.M)
    fail(Errc::invalid_argument, "beta records must be swept at the corona inflation");

  const detail::WalkPlan plan = detail::make_plan(dom, cfg);

  CoronaResult res;
  res.q0 = q0;
  res.trunc_level = trunc;
  res.params = params;

  std::vector<CubeId> gen{q0};
  while (!gen.empty()) {
    std::sort(gen.begin(), gen.end());
    std::vector<CubeId> next;
    for (CubeId rid : gen) {
      const Cube& R = lat.cube(rid);
      TreeRecord tr;
      tr.root = rid;
      tr.tree.top = rid;
      std::vector<CubeId> cubes{rid};
      std::vector<std::pair<CubeId, StopReason>> stops;
      std::vector<double> sjones;
      const double jr = rec(rid).beta * rec(rid).beta;

      if (rid.k >= trunc) {
        stops.emplace_back(rid, StopReason::btm);
        sjones.push_back(jr);
      } else if (rec(rid).bbeta >= params.epsilon) {
        stops.emplace_back(rid, StopReason::bad);
        sjones.push_back(jr);
        for (int cj : R.children) next.push_back(CubeId{rid.k + 1, cj});
      } else {
        const Vec nu = rec(rid).plane.normals()[0];
        const Vec xp = R.center + (R.side / 2.0) * nu;
        const Vec xm = R.center - (R.side / 2.0) * nu;
        tr.has_plus = dom.inside(xp) && dom.dist_boundary(xp) > R.side / 8.0;
        tr.has_minus = dom.inside(xm) && dom.dist_boundary(xm) > R.side / 8.0;
        if (!tr.has_plus && !tr.has_minus)
          fail(Errc::corkscrew_failure, "both tree poles fall outside the domain");
        if (tr.has_plus) tr.pole_plus = xp;
        if (tr.has_minus) tr.pole_minus = xm;

        const std::uint64_t fi = lat.flat_index(rid);
        const Ball broot = R.ball(params.lambda);
        std::vector<PoleBatch> batch;
        std::vector<Theta> troot;
        if (tr.has_plus) {
          batch.push_back(run_pole(plan, xp, mix_seed(cfg.base_seed, kTreeTag, fi, 1), cfg.walkers));
          troot.push_back(ball_density(batch.back(), broot, d));
          tr.theta_plus = troot.back().value;
        }
        if (tr.has_minus) {
          batch.push_back(run_pole(plan, xm, mix_seed(cfg.base_seed, kTreeTag, fi, 2), cfg.walkers));
          troot.push_back(ball_density(batch.back(), broot, d));
          tr.theta_minus = troot.back().value;
        }

        std::vector<CubeId> queue{rid};
        std::vector<double> qjones{jr};
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
          const Cube& T = lat.cube(queue[qi]);
          for (int cj : T.children) {
            const CubeId cid{queue[qi].k + 1, cj};
            const BetaRecord& rc = rec(cid);
            const double jc = qjones[qi] + rc.beta * rc.beta;
            bool stop = true;
            StopReason why = StopReason::btm;
            if (cid.k >= trunc) {
              why = StopReason::btm;
            } else if (rc.bbeta >= params.epsilon) {
              why = StopReason::bad;
            } else {
              bool high = false, low = false;
              const Ball bc = lat.cube(cid).ball(params.lambda);
              for (std::size_t pi = 0; pi < batch.size(); ++pi) {
                const Theta tc = ball_density(batch[pi], bc, d);
                const Theta& tR = troot[pi];
                const double se_hi =
                    std::sqrt(tc.se * tc.se + params.A * params.A * tR.se * tR.se);
                const double se_lo =
                    std::sqrt(tc.se * tc.se + params.tau * params.tau * tR.se * tR.se);
                if (tc.value > params.A * tR.value + 3.0 * se_hi) high = true;
                if (tc.value < params.tau * tR.value - 3.0 * se_lo) low = true;
              }
              if (high) {
                why = StopReason::hd;
              } else if (low) {
                why = StopReason::ld;
              } else if (jc >= 2.0 * params.epsilon * params.epsilon) {
                why = StopReason::bbeta;
              } else {
                stop = false;
              }
            }
            cubes.push_back(cid);
            if (stop) {
              stops.emplace_back(cid, why);
              sjones.push_back(jc);
              if (cid.k < trunc)
                for (int gj : lat.cube(cid).children) next.push_back(CubeId{cid.k + 1, gj});
            } else {
              queue.push_back(cid);
              qjones.push_back(jc);
            }
          }
        }
      }

      std::sort(cubes.begin(), cubes.end());
      std::vector<std::size_t> order(stops.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return stops[a].first < stops[b].first; });
      tr.tree.cubes = std::move(cubes);
      for (std::size_t oi : order) {
        tr.tree.stop.push_back(stops[oi].first);
        tr.stops.push_back(stops[oi]);
        tr.stop_jones.push_back(sjones[oi]);
      }
      tr.tree.minimal = tr.tree.stop;
      res.top.push_back(std::move(tr));
    }
    gen = std::move(next);
  }

  std::sort(res.top.begin(), res.top.end(),
            [](const TreeRecord& a, const TreeRecord& b) { return a.root < b.root; });
  for (const TreeRecord& t : res.top) {
    res.packing += side_pow(lat.cube(t.root).side, d);
    for (std::size_t i = 0; i < t.stops.size(); ++i)
      if (t.stops[i].second == StopReason::btm)
        res.btm_packing += side_pow(lat.cube(t.stops[i].first).side, d);
  }
  return res;
}

double cdhm_upper(const CoronaResult& result) { return result.packing; }

VerifyReport verify_tree_densities(const CoronaResult& result, const Domain& dom,
                                   const CubeLattice& lat, const WosConfig& cfg,
                                   VerifyMode mode, std::size_t max_pairs) {
  VerifyReport rep;
  rep.mode = mode;
  if (cfg.walkers < 1) fail(Errc::invalid_argument, "need at least one walker");
  if (lat.source == nullptr) fail(Errc::invalid_argument, "lattice has no source set");

  // candidate pairs: un-stopped cubes of trees that carry a pole
  struct Pair {
    std::size_t tree;
    CubeId cube;
  };
  std::vector<Pair> pool;
  const Vec* fixed_pole = nullptr;
  for (std::size_t ti = 0; ti < result.top.size(); ++ti) {
    const TreeRecord& t = result.top[ti];
    if (!t.has_plus && !t.has_minus) continue;
    if (fixed_pole == nullptr) fixed_pole = t.has_plus ? &t.pole_plus : &t.pole_minus;
    for (CubeId id : t.tree.cubes) {
      bool stopped = std::binary_search(t.tree.stop.begin(), t.tree.stop.end(), id);
      if (!stopped) pool.push_back(Pair{ti, id});
    }
  }
  if (pool.empty()) return rep;
  if (mode == VerifyMode::fixed_pole && fixed_pole == nullptr)
    fail(Errc::degenerate_input, "no tree carries an interior pole");

  // deterministic prefix shuffle
  Rng rng = Rng::stream(cfg.base_seed, kVerifyTag);
  const std::size_t take = std::min(max_pairs, pool.size());
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t span = pool.size() - i;
    std::size_t j = i + std::min(span - 1, static_cast<std::size_t>(rng.unif() * span));
    std::swap(pool[i], pool[j]);
  }

  const int d = lat.source->target_dim;
  const double lam = result.params.lambda;
  const detail::WalkPlan plan = detail::make_plan(dom, cfg);
  const double A = result.params.A, tau = result.params.tau;
  for (std::size_t i = 0; i < take; ++i) {
    const TreeRecord& t = result.top[pool[i].tree];
    const Vec& pole = mode == VerifyMode::fixed_pole
                          ? *fixed_pole
                          : (t.has_plus ? t.pole_plus : t.pole_minus);
    const PoleBatch pb = run_pole(plan, pole, mix_seed(cfg.base_seed, kVerifyTag, i + 1),
                                  cfg.walkers);
    const Theta tq = ball_density(pb, lat.cube(pool[i].cube).ball(lam), d);
    const Theta tr2 = ball_density(pb, lat.cube(t.root).ball(lam), d);
    const double se_hi = std::sqrt(tq.se * tq.se + A * A * tr2.se * tr2.se);
    const double se_lo = std::sqrt(tq.se * tq.se + tau * tau * tr2.se * tr2.se);
    const bool ok = tq.value <= A * tr2.value + 3.0 * se_hi &&
                    tq.value >= tau * tr2.value - 3.0 * se_lo;
    DensityCheck chk{t.root, pool[i].cube, tq.value, tr2.value, ok};
    ++rep.checked;
    if (ok)
      ++rep.passed;
    else
      rep.failures.push_back(chk);
  }
  rep.fraction = rep.checked == 0 ? 1.0 : static_cast<double>(rep.passed) /
                                              static_cast<double>(rep.checked);
  return rep;
}

}  // namespace gmt
