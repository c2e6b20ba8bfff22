#include <complex>

#include "doctest.h"
#include "fixtures.hpp"
#include "gmt/common.hpp"
#include "gmt/parallel.hpp"
#include "gmt/wos.hpp"

using namespace gmt;

namespace {

// harmonic measure of [a,b]x{0} in the upper half-plane seen from p
double half_plane_interval(const Vec& p, double a, double b) {
  return (std::atan((b - p[0]) / p[1]) - std::atan((a - p[0]) / p[1])) / Rng::pi;
}

// Green function of the unit disk
double disk_green(std::complex<double> x, std::complex<double> y) {
  return std::log(std::abs(1.0 - std::conj(x) * y) / std::abs(x - y)) / (2 * Rng::pi);
}

WosTarget arc_ball(int id, double angle, double arc_len) {
  const double r = 2.0 * std::sin(arc_len / 4.0);
  return WosTarget::ball_region(id, Ball(Vec(std::cos(angle), std::sin(angle)), r));
}

double total_mass(const HarmonicEstimate& est) {
  double s = est.other + est.escaped;
  for (const TargetMass& t : est.masses) s += t.mass;
  return s;
}

}  // namespace

TEST_CASE("half-plane harmonic measure matches the Poisson integral") {
  Domain hp = fx::half_plane_domain();
  WosConfig cfg;
  cfg.walkers = 100000;
  cfg.base_seed = 42;
  auto est = wos_measure(hp, Vec(0, 1), {WosTarget::ball_region(0, Ball(Vec(0, 0), 1.0))}, cfg);
  const TargetMass& t = est.at(0);
  CHECK(std::abs(t.mass - 0.5) <= 3 * t.se);
  CHECK(t.se == doctest::Approx(std::sqrt(t.mass * (1 - t.mass) / cfg.walkers)).epsilon(1e-12));
  CHECK(est.escaped == 0.0);
  CHECK(est.other > 0.3);  // the rest of the boundary line
  CHECK(std::abs(total_mass(est) - 1.0) <= 1e-9);
  CHECK(est.shell == doctest::Approx(1e-4 * hp.boundary_samples.diameter()));
}

TEST_CASE("disk arcs absorb their angular share") {
  Domain dk = fx::disk_domain();
  WosConfig cfg;
  cfg.walkers = 100000;
  cfg.base_seed = 42;

  // four quarter arcs partition the circle
  std::vector<WosTarget> quarters;
  for (int k = 0; k < 4; ++k)
    quarters.push_back(arc_ball(k, Rng::pi / 4 + k * Rng::pi / 2, Rng::pi / 2));
  auto est = wos_measure(dk, Vec(0, 0), quarters, cfg);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(est.at(k).mass - 0.25) <= 3 * est.at(k).se);
  CHECK(est.other == 0.0);
  CHECK(est.escaped == 0.0);
  CHECK(std::abs(total_mass(est) - 1.0) <= 1e-9);

  // narrower arcs away from any symmetry axis
  auto est2 = wos_measure(dk, Vec(0, 0),
                          {arc_ball(0, 0.7, Rng::pi / 6), arc_ball(1, 2.0, Rng::pi / 3)}, cfg);
  CHECK(std::abs(est2.at(0).mass - 1.0 / 12) <= 3 * est2.at(0).se);
  CHECK(std::abs(est2.at(1).mass - 1.0 / 6) <= 3 * est2.at(1).se);
}

TEST_CASE("boundary pieces given as sample clouds absorb their share") {
  Domain dk = fx::disk_domain();
  WosConfig cfg;
  cfg.walkers = 100000;
  cfg.base_seed = 13;
  PointCloud arc(2);
  const double half = 0.2;
  for (int i = 0; i < 800; ++i) {
    double t = -half + 2 * half * (i + 0.5) / 800;
    arc.add(Vec(std::cos(t), std::sin(t)));
  }
  auto est = wos_measure(dk, Vec(0, 0), {WosTarget::cloud_region(0, arc, 2e-3)}, cfg);
  const double want = 2 * half / (2 * Rng::pi);
  // 3 sigma plus the endpoint smear allowed by the membership tolerance
  CHECK(std::abs(est.at(0).mass - want) <= 3 * est.at(0).se + 2e-3 / Rng::pi);
}

TEST_CASE("nested boundary targets stay monotone under partition attribution") {
  Domain hp = fx::half_plane_domain();
  WosConfig cfg;
  cfg.walkers = 100000;
  cfg.base_seed = 5;
  // id 0 claims E = [0,1], id 1 catches the rest of Q = [-1,1]
  auto est = wos_measure(hp, Vec(0, 1.5),
                         {WosTarget::ball_region(0, Ball(Vec(0.5, 0), 0.5)),
                          WosTarget::ball_region(1, Ball(Vec(0, 0), 1.0))},
                         cfg);
  const double m_e = est.at(0).mass;
  const double m_q = m_e + est.at(1).mass;
  CHECK(m_e <= m_q);  // exact: attribution partitions the absorptions
  CHECK(std::abs(m_e - half_plane_interval(Vec(0, 1.5), 0, 1)) <= 3 * est.at(0).se);
  CHECK(std::abs(m_q - half_plane_interval(Vec(0, 1.5), -1, 1)) <=
        3 * std::hypot(est.at(0).se, est.at(1).se));
}

TEST_CASE("green function of the disk matches the closed form") {
  Domain dk = fx::disk_domain();
  WosConfig cfg;
  cfg.walkers = 100000;
  cfg.base_seed = 42;

  auto g = wos_green(dk, Vec(0.5, 0), Vec(0, 0), cfg);
  CHECK(std::abs(g.value - std::log(2.0) / (2 * Rng::pi)) <= 3 * g.se);
  CHECK(g.se < 2.5e-4);
  CHECK(g.escaped == 0.0);

  // query close to the boundary: small value, bounded shell bias
  WosConfig cn = cfg;
  cn.base_seed = 21;
  auto gn = wos_green(dk, Vec(0.5, 0), Vec(0.97, 0), cn);
  CHECK(std::abs(gn.value - disk_green({0.5, 0}, {0.97, 0})) <= 3e-4);

  // symmetry of the pole/query pair
  auto ga = wos_green(dk, Vec(0.3, 0), Vec(-0.2, 0.4), cn);
  auto gb = wos_green(dk, Vec(-0.2, 0.4), Vec(0.3, 0), cn);
  const double want = disk_green({0.3, 0}, {-0.2, 0.4});
  CHECK(std::abs(ga.value - gb.value) <= 3 * std::hypot(ga.se, gb.se));
  CHECK(std::abs(ga.value - want) <= 3 * ga.se);
  CHECK(std::abs(gb.value - want) <= 3 * gb.se);
}

TEST_CASE("stderr shrinks like the square root of the walker count") {
  Domain dk = fx::disk_domain();
  WosConfig cfg;
  cfg.walkers = 20000;
  cfg.base_seed = 3;
  auto g1 = wos_green(dk, Vec(0.5, 0), Vec(0, 0), cfg);
  cfg.walkers *= 2;
  auto g2 = wos_green(dk, Vec(0.5, 0), Vec(0, 0), cfg);
  const double ratio = g1.se / g2.se;
  CHECK(ratio >= std::sqrt(2.0) * 0.9);
  CHECK(ratio <= std::sqrt(2.0) * 1.1);
}

TEST_CASE("estimates translate exactly and rotate within noise") {
  WosConfig cfg;
  cfg.walkers = 20000;
  cfg.base_seed = 7;
  const double r = 2.0 * std::sin(Rng::pi / 8);

  Domain d0 = fx::disk_domain();
  Domain d1 = fx::disk_domain(1.0, 5.0, -2.0);
  auto e0 = wos_measure(d0, Vec(0.3, 0.1),
                        {WosTarget::ball_region(0, Ball(Vec(std::cos(0.5), std::sin(0.5)), r))}, cfg);
  auto e1 = wos_measure(d1, Vec(5.3, -1.9),
                        {WosTarget::ball_region(0, Ball(Vec(5 + std::cos(0.5), -2 + std::sin(0.5)), r))},
                        cfg);
  CHECK(e0.at(0).mass == e1.at(0).mass);  // same walk, shifted frame

  const double rot = 1.1;
  const double c = std::cos(rot), s = std::sin(rot);
  auto e2 = wos_measure(d0, Vec(0.3 * c - 0.1 * s, 0.3 * s + 0.1 * c),
                        {WosTarget::ball_region(0, Ball(Vec(std::cos(0.5 + rot), std::sin(0.5 + rot)), r))},
                        cfg);
  CHECK(std::abs(e2.at(0).mass - e0.at(0).mass) <= 3 * std::hypot(e0.at(0).se, e2.at(0).se));
}

TEST_CASE("identical seeds give identical estimates at any thread count") {
  Domain dk = fx::disk_domain();
  WosConfig cfg;
  cfg.walkers = 50000;
  cfg.base_seed = 42;
  const unsigned before = thread_count();
  std::vector<double> mass, green;
  for (unsigned tc : {1u, 4u, 8u}) {
    set_thread_count(tc);
    auto est = wos_measure(dk, Vec(0.2, -0.3), {arc_ball(0, 1.0, Rng::pi / 2)}, cfg);
    auto g = wos_green(dk, Vec(0.5, 0), Vec(0, 0), cfg);
    mass.push_back(est.at(0).mass);
    green.push_back(g.value);
  }
  set_thread_count(before);
  CHECK(mass[0] == mass[1]);
  CHECK(mass[0] == mass[2]);
  CHECK(green[0] == green[1]);
  CHECK(green[0] == green[2]);
}

TEST_CASE("degenerate walker configurations are rejected") {
  Domain dk = fx::disk_domain();
  WosConfig cfg;
  cfg.walkers = 100;
  cfg.base_seed = 1;
  auto tgt = WosTarget::ball_region(0, Ball(Vec(1, 0), 0.3));

  CHECK_THROWS_WITH_AS(wos_measure(dk, Vec(2, 0), {tgt}, cfg), "pole is not an interior point",
                       Error);
  CHECK_THROWS_AS(wos_green(dk, Vec(2, 0), Vec(0, 0), cfg), Error);
  CHECK_THROWS_AS(wos_green(dk, Vec(0.5, 0), Vec(0.5, 0), cfg), Error);

  WosConfig bad = cfg;
  bad.walkers = 0;
  CHECK_THROWS_AS(wos_measure(dk, Vec(0, 0), {tgt}, bad), Error);
  CHECK_THROWS_AS(wos_measure(dk, Vec(0, 0),
                              {tgt, WosTarget::ball_region(0, Ball(Vec(-1, 0), 0.3))}, cfg),
                  Error);  // duplicate ids
  CHECK_THROWS_AS(wos_measure(dk, Vec(0, 0), {WosTarget::ball_region(0, Ball(Vec(1, 0), 0.0))}, cfg),
                  Error);

  // a one-step cap strands nearly every walker
  WosConfig capped = cfg;
  capped.walkers = 1000;
  capped.max_steps = 1;
  auto est = wos_measure(dk, Vec(0, 0), {tgt}, capped);
  CHECK(est.escaped >= 0.99);
  CHECK(std::abs(total_mass(est) - 1.0) <= 1e-9);
}
