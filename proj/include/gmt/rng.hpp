#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace gmt {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Mixes a base seed with one or more stream indices. Used to give every
// walker / tree / criterion its own independent, order-free stream.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
  std::uint64_t s = base;
  s ^= splitmix64(a) + 0x9e3779b97f4a7c15ULL;
  std::uint64_t t = s;
  s ^= splitmix64(b) + (splitmix64(t) << 1);
  std::uint64_t u = s;
  s ^= splitmix64(c) + (splitmix64(u) >> 1);
  return splitmix64(s);
}

// xoshiro256++, seeded via splitmix64. Fully specified arithmetic so results
// are identical across compilers and thread counts.
class Rng {
public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : s_) w = splitmix64(s);
  }

  static Rng stream(std::uint64_t base, std::uint64_t idx) { return Rng(mix_seed(base, idx)); }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0,1)
  double unif() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double unif(double a, double b) { return a + (b - a) * unif(); }

  // uniform direction on the unit sphere in dim 2 or 3
  std::array<double, 3> sphere_dir(int dim) {
    if (dim == 2) {
      double ang = 2.0 * pi * unif();
      return {std::cos(ang), std::sin(ang), 0.0};
    }
    double z = 2.0 * unif() - 1.0;
    double phi = 2.0 * pi * unif();
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
  }

  static constexpr double pi = 3.14159265358979323846;

private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> s_;
};

}  // namespace gmt
