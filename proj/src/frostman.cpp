#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "gmt/corona.hpp"

namespace gmt {
namespace {

CubeId ancestor_at(const CubeLattice& lat, CubeId id, int level) {
  while (id.k > level) id = CubeId{id.k - 1, lat.cube(id).parent};
  return id;
}

long double side_powl(double side, int d) {
  long double r = 1.0L;
  for (int i = 0; i < d; ++i) r *= static_cast<long double>(side);
  return r;
}

}  // namespace

double FrostmanMeasure::mass(const CubeLattice& lat, CubeId q) const {
  double s = 0.0;
  for (const FrostmanAtom& a : atoms) {
    if (a.cube.k < q.k) continue;
    if (ancestor_at(lat, a.cube, q.k) == q) s += a.weight;
  }
  return s;
}

double FrostmanMeasure::total() const {
  double s = 0.0;
  for (const FrostmanAtom& a : atoms) s += a.weight;
  return s;
}

FrostmanMeasure frostman_regularize(const CubeLattice& lat,
                                    const std::vector<std::pair<CubeId, double>>& btm_weights,
                                    CubeId q0) {
  if (lat.source == nullptr) fail(Errc::invalid_argument, "lattice has no source set");
  if (q0.k < 0 || q0.k >= lat.level_count() ||
      q0.j < 0 || q0.j >= static_cast<int>(lat.level(q0.k).size()))
    fail(Errc::invalid_argument, "no such cube");

  struct Atom {
    CubeId cube;  // original carrier
    CubeId cur;   // ancestor at the level currently being swept
    long double w = 0.0L;
  };
  std::vector<Atom> atoms;
  atoms.reserve(btm_weights.size());
  int deepest = q0.k;
  for (const auto& [id, w] : btm_weights) {
    if (id.k < 0 || id.k >= lat.level_count() ||
        id.j < 0 || id.j >= static_cast<int>(lat.level(id.k).size()))
      fail(Errc::invalid_argument, "no such cube");
    if (!(w >= 0.0)) fail(Errc::invalid_argument, "weights must be nonnegative");
    if (id.k < q0.k || ancestor_at(lat, id, q0.k) != q0)
      fail(Errc::invalid_argument, "weight cube lies outside the root subtree");
    atoms.push_back(Atom{id, id, static_cast<long double>(w)});
    deepest = std::max(deepest, id.k);
  }
  {
    std::vector<CubeId> ids;
    ids.reserve(atoms.size());
    for (const Atom& a : atoms) ids.push_back(a.cube);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
      fail(Errc::invalid_argument, "duplicate weight cube");
  }

  const int d = lat.source->target_dim;
  std::vector<CubeId> fc;
  for (int k = deepest; k >= q0.k; --k) {
    for (Atom& a : atoms)
      if (a.cur.k == k + 1) a.cur = CubeId{k, lat.cube(a.cur).parent};
    std::map<CubeId, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (atoms[i].cur.k == k) groups[atoms[i].cur].push_back(i);
    for (const auto& [id, idx] : groups) {
      long double m = 0.0L;
      for (std::size_t i : idx) m += atoms[i].w;
      const long double cap = side_powl(lat.cube(id).side, d);
      if (m > 2.0L * cap) {
        fc.push_back(id);
        const long double scale = cap / m;
        for (std::size_t i : idx) atoms[i].w *= scale;
      }
    }
  }

  FrostmanMeasure nu;
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.cube < b.cube; });
  nu.atoms.reserve(atoms.size());
  for (const Atom& a : atoms)
    nu.atoms.push_back(FrostmanAtom{a.cube, lat.cube(a.cube).center,
                                    static_cast<double>(a.w)});
  std::sort(fc.begin(), fc.end());
  nu.fc = std::move(fc);
  return nu;
}

}  // namespace gmt
