#pragma once

#include <cstddef>
#include <string>

namespace gmt::simd {

// Point clouds are stored coordinate-planar (one contiguous array per axis);
// kernels take an array of up to 3 coordinate pointers.
//
// Every kernel has a scalar reference and an AVX2 variant. Reductions follow
// a fixed 4-lane stratified pattern (lane j accumulates elements with index
// congruent to j mod 4, lanes combined as (l0+l1)+(l2+l3), then the tail in
// index order) in BOTH backends, so results are bit-identical and the active
// backend never changes numbers.

struct KernelTable {
  // out[i] = squared euclidean distance from q to point i
  void (*sqdist_batch)(const double* const* coords, std::size_t n, int dim, const double* q,
                       double* out);

  // min over points of squared distance to q; *idx = lowest attaining index.
  // n must be > 0.
  double (*min_sqdist)(const double* const* coords, std::size_t n, int dim, const double* q,
                       std::size_t* idx);

  // Squared distance from each point to the affine subspace with base point
  // `base` and orthonormal rows basis[k*dim..], k < sub_dim. Clamped at 0.
  void (*plane_sqdist_batch)(const double* const* coords, std::size_t n, int dim,
                             const double* base, const double* basis, int sub_dim, double* out);

  // Stratified sum of x[0..n)
  double (*sum)(const double* x, std::size_t n);

  // max of x with lowest attaining index; n must be > 0
  double (*max_value)(const double* x, std::size_t n, std::size_t* idx);

  // Weighted first/second moment accumulators: sw = sum w, swx[c] = sum w*x_c,
  // swxx packs the upper triangle (c<=c') row-major: sum w*x_c*x_c'.
  void (*moments)(const double* const* coords, std::size_t n, int dim, const double* w,
                  double* sw, double* swx, double* swxx);
};

enum class Backend { scalar, avx2 };

const KernelTable& table(Backend b);

// Active backend: AVX2 when the CPU supports it, unless CORONA_TST_SIMD
// forces "scalar" (or "avx2").
Backend active_backend();
const KernelTable& kernels();
std::string backend_name(Backend b);
bool cpu_has_avx2();

}  // namespace gmt::simd
