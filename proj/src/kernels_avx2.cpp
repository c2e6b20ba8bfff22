#include <cstddef>

#include "gmt/simd.hpp"

#include "kernels_detail.hpp"

// AVX2 variants. Each kernel reproduces the scalar reference's arithmetic
// exactly: four stratified lanes, lane combine as (l0+l1)+(l2+l3), tail in
// index order, no FMA contraction (the TU is built with -mavx2 only).

#if defined(__AVX2__)

#include <immintrin.h>

namespace gmt::simd::detail {

namespace {

inline __m256d load4(const double* p) { return _mm256_loadu_pd(p); }

inline __m256d sqdist4(const double* const* c, std::size_t i, int dim, const double* q) {
  __m256d d0 = _mm256_sub_pd(load4(c[0] + i), _mm256_set1_pd(q[0]));
  __m256d s = _mm256_mul_pd(d0, d0);
  if (dim > 1) {
    __m256d d1 = _mm256_sub_pd(load4(c[1] + i), _mm256_set1_pd(q[1]));
    s = _mm256_add_pd(s, _mm256_mul_pd(d1, d1));
  }
  if (dim > 2) {
    __m256d d2 = _mm256_sub_pd(load4(c[2] + i), _mm256_set1_pd(q[2]));
    s = _mm256_add_pd(s, _mm256_mul_pd(d2, d2));
  }
  return s;
}

inline double combine_lanes_sum(__m256d v) {
  alignas(32) double l[4];
  _mm256_store_pd(l, v);
  return (l[0] + l[1]) + (l[2] + l[3]);
}

inline double point_sqdist(const double* const* c, std::size_t i, int dim, const double* q) {
  double d0 = c[0][i] - q[0];
  double s = d0 * d0;
  if (dim > 1) {
    double d1 = c[1][i] - q[1];
    s += d1 * d1;
  }
  if (dim > 2) {
    double d2 = c[2][i] - q[2];
    s += d2 * d2;
  }
  return s;
}

}  // namespace

void sqdist_batch_avx2(const double* const* coords, std::size_t n, int dim, const double* q,
                       double* out) {
  const std::size_t main = n & ~std::size_t(3);
  for (std::size_t i = 0; i < main; i += 4) _mm256_storeu_pd(out + i, sqdist4(coords, i, dim, q));
  for (std::size_t i = main; i < n; ++i) out[i] = point_sqdist(coords, i, dim, q);
}

double min_sqdist_avx2(const double* const* coords, std::size_t n, int dim, const double* q,
                       std::size_t* idx) {
  const std::size_t main = n & ~std::size_t(3);
  double best;
  std::size_t bi;
  if (main) {
    __m256d lane_v = sqdist4(coords, 0, dim, q);
    __m256i lane_i = _mm256_set_epi64x(3, 2, 1, 0);
    for (std::size_t i = 4; i < main; i += 4) {
      __m256d v = sqdist4(coords, i, dim, q);
      __m256d lt = _mm256_cmp_pd(v, lane_v, _CMP_LT_OQ);
      __m256i idx4 = _mm256_set_epi64x(i + 3, i + 2, i + 1, i);
      lane_v = _mm256_blendv_pd(lane_v, v, lt);
      lane_i = _mm256_castpd_si256(
          _mm256_blendv_pd(_mm256_castsi256_pd(lane_i), _mm256_castsi256_pd(idx4), lt));
    }
    alignas(32) double lv[4];
    alignas(32) long long li[4];
    _mm256_store_pd(lv, lane_v);
    _mm256_store_si256(reinterpret_cast<__m256i*>(li), lane_i);
    best = lv[0];
    bi = static_cast<std::size_t>(li[0]);
    for (int l = 1; l < 4; ++l)
      if (lv[l] < best || (lv[l] == best && static_cast<std::size_t>(li[l]) < bi)) {
        best = lv[l];
        bi = static_cast<std::size_t>(li[l]);
      }
  } else {
    best = point_sqdist(coords, 0, dim, q);
    bi = 0;
  }
  for (std::size_t i = main ? main : 1; i < n; ++i) {
    double v = point_sqdist(coords, i, dim, q);
    if (v < best) {
      best = v;
      bi = i;
    }
  }
  *idx = bi;
  return best;
}

void plane_sqdist_batch_avx2(const double* const* coords, std::size_t n, int dim,
                             const double* base, const double* basis, int sub_dim, double* out) {
  const std::size_t main = n & ~std::size_t(3);
  const __m256d zero = _mm256_setzero_pd();
  for (std::size_t i = 0; i < main; i += 4) {
    __m256d r0 = _mm256_sub_pd(load4(coords[0] + i), _mm256_set1_pd(base[0]));
    __m256d r1 = dim > 1 ? _mm256_sub_pd(load4(coords[1] + i), _mm256_set1_pd(base[1])) : zero;
    __m256d r2 = dim > 2 ? _mm256_sub_pd(load4(coords[2] + i), _mm256_set1_pd(base[2])) : zero;
    __m256d s = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(r0, r0), _mm256_mul_pd(r1, r1)),
                              _mm256_mul_pd(r2, r2));
    for (int k = 0; k < sub_dim; ++k) {
      const double* b = basis + std::size_t(k) * dim;
      __m256d t = _mm256_mul_pd(r0, _mm256_set1_pd(b[0]));
      if (dim > 1) t = _mm256_add_pd(t, _mm256_mul_pd(r1, _mm256_set1_pd(b[1])));
      if (dim > 2) t = _mm256_add_pd(t, _mm256_mul_pd(r2, _mm256_set1_pd(b[2])));
      s = _mm256_sub_pd(s, _mm256_mul_pd(t, t));
    }
    _mm256_storeu_pd(out + i, _mm256_max_pd(s, zero));
  }
  if (main < n) {
    const double* tail_coords[3];
    for (int c = 0; c < dim; ++c) tail_coords[c] = coords[c] + main;
    plane_sqdist_batch_scalar(tail_coords, n - main, dim, base, basis, sub_dim, out + main);
  }
}

double sum_avx2(const double* x, std::size_t n) {
  const std::size_t main = n & ~std::size_t(3);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < main; i += 4) acc = _mm256_add_pd(acc, load4(x + i));
  double s = combine_lanes_sum(acc);
  for (std::size_t i = main; i < n; ++i) s += x[i];
  return s;
}

double max_value_avx2(const double* x, std::size_t n, std::size_t* idx) {
  const std::size_t main = n & ~std::size_t(3);
  double best;
  std::size_t bi;
  if (main) {
    __m256d lane_v = load4(x);
    __m256i lane_i = _mm256_set_epi64x(3, 2, 1, 0);
    for (std::size_t i = 4; i < main; i += 4) {
      __m256d v = load4(x + i);
      __m256d gt = _mm256_cmp_pd(v, lane_v, _CMP_GT_OQ);
      __m256i idx4 = _mm256_set_epi64x(i + 3, i + 2, i + 1, i);
      lane_v = _mm256_blendv_pd(lane_v, v, gt);
      lane_i = _mm256_castpd_si256(
          _mm256_blendv_pd(_mm256_castsi256_pd(lane_i), _mm256_castsi256_pd(idx4), gt));
    }
    alignas(32) double lv[4];
    alignas(32) long long li[4];
    _mm256_store_pd(lv, lane_v);
    _mm256_store_si256(reinterpret_cast<__m256i*>(li), lane_i);
    best = lv[0];
    bi = static_cast<std::size_t>(li[0]);
    for (int l = 1; l < 4; ++l)
      if (lv[l] > best || (lv[l] == best && static_cast<std::size_t>(li[l]) < bi)) {
        best = lv[l];
        bi = static_cast<std::size_t>(li[l]);
      }
  } else {
    best = x[0];
    bi = 0;
  }
  for (std::size_t i = main ? main : 1; i < n; ++i)
    if (x[i] > best) {
      best = x[i];
      bi = i;
    }
  *idx = bi;
  return best;
}

void moments_avx2(const double* const* coords, std::size_t n, int dim, const double* w,
                  double* sw, double* swx, double* swxx) {
  const int pairs = dim * (dim + 1) / 2;
  const std::size_t main = n & ~std::size_t(3);
  __m256d lw = _mm256_setzero_pd();
  __m256d lx[3] = {_mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd()};
  __m256d lxx[6] = {_mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd(),
                    _mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd()};
  const __m256d one = _mm256_set1_pd(1.0);
  for (std::size_t i = 0; i < main; i += 4) {
    __m256d wv = w ? load4(w + i) : one;
    lw = _mm256_add_pd(lw, wv);
    __m256d xc_all[3];
    for (int c = 0; c < dim; ++c) xc_all[c] = load4(coords[c] + i);
    int p = 0;
    for (int c = 0; c < dim; ++c) {
      __m256d wx = _mm256_mul_pd(wv, xc_all[c]);
      lx[c] = _mm256_add_pd(lx[c], wx);
      for (int c2 = c; c2 < dim; ++c2)
        lxx[p] = _mm256_add_pd(lxx[p], _mm256_mul_pd(wx, xc_all[c2])), ++p;
    }
  }
  *sw = combine_lanes_sum(lw);
  for (int c = 0; c < dim; ++c) swx[c] = combine_lanes_sum(lx[c]);
  for (int p = 0; p < pairs; ++p) swxx[p] = combine_lanes_sum(lxx[p]);
  for (std::size_t j = main; j < n; ++j) {
    const double wj = w ? w[j] : 1.0;
    *sw += wj;
    int p = 0;
    for (int c = 0; c < dim; ++c) {
      const double xc = coords[c][j];
      const double wx = wj * xc;
      swx[c] += wx;
      for (int c2 = c; c2 < dim; ++c2) swxx[p++] += wx * coords[c2][j];
    }
  }
}

}  // namespace gmt::simd::detail

#else  // !__AVX2__: forward to the scalar reference so the table still links.

namespace gmt::simd::detail {

void sqdist_batch_avx2(const double* const* coords, std::size_t n, int dim, const double* q,
                       double* out) {
  sqdist_batch_scalar(coords, n, dim, q, out);
}
double min_sqdist_avx2(const double* const* coords, std::size_t n, int dim, const double* q,
                       std::size_t* idx) {
  return min_sqdist_scalar(coords, n, dim, q, idx);
}
void plane_sqdist_batch_avx2(const double* const* coords, std::size_t n, int dim,
                             const double* base, const double* basis, int sub_dim, double* out) {
  plane_sqdist_batch_scalar(coords, n, dim, base, basis, sub_dim, out);
}
double sum_avx2(const double* x, std::size_t n) { return sum_scalar(x, n); }
double max_value_avx2(const double* x, std::size_t n, std::size_t* idx) {
  return max_value_scalar(x, n, idx);
}
void moments_avx2(const double* const* coords, std::size_t n, int dim, const double* w, double* sw,
                  double* swx, double* swxx) {
  moments_scalar(coords, n, dim, w, sw, swx, swxx);
}

}  // namespace gmt::simd::detail

#endif
