#pragma once

#include "gmt/domain.hpp"
#include "gmt/rng.hpp"
#include "gmt/wos.hpp"

namespace gmt::detail {

// fixed accumulation granularity: partial tallies are kept per chunk and
// combined in chunk order, so results never depend on the worker count
inline constexpr std::size_t kWalkChunk = 1024;

// One walker run resolved against a domain: shell, step cap, and the
// far-field recurrence for planar complements.
struct WalkPlan {
  const Domain* dom = nullptr;
  double shell = 0.0;
  int max_steps = 0;
  int dim = 2;
  bool reinsert = false;    // planar complement: resample leavers back in
  bool far_escape = false;  // spatial complement: leavers are lost mass
  Vec far_center;
  double far_radius = 0.0;
  double far_trigger = 0.0;
  double scale = 0.0;  // boundary scale behind the shell default
};

WalkPlan make_plan(const Domain& dom, const WosConfig& cfg);

// one walker from x; true = absorbed with `out` the absorption point,
// false = the step cap was hit (or the walker left a spatial complement)
bool walk(const WalkPlan& plan, Vec x, Rng& rng, Vec& out);

}  // namespace gmt::detail
