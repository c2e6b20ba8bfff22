#include <cstddef>

#include "gmt/simd.hpp"

#include "kernels_detail.hpp"

// Scalar reference kernels. These spell out the exact 4-lane stratified
// accumulation pattern the AVX2 variants realize with vector registers; the
// equivalence tests assert bit-identical outputs between the two.

namespace gmt::simd::detail {

namespace {

inline double sq(double v) { return v * v; }

inline double point_sqdist(const double* const* c, std::size_t i, int dim, const double* q) {
  double s = sq(c[0][i] - q[0]);
  if (dim > 1) s += sq(c[1][i] - q[1]);
  if (dim > 2) s += sq(c[2][i] - q[2]);
  return s;
}

}  // namespace

void sqdist_batch_scalar(const double* const* coords, std::size_t n, int dim, const double* q,
                         double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = point_sqdist(coords, i, dim, q);
}

double min_sqdist_scalar(const double* const* coords, std::size_t n, int dim, const double* q,
                         std::size_t* idx) {
  const std::size_t main = n & ~std::size_t(3);
  double best;
  std::size_t bi;
  if (main) {
    double lane_v[4];
    std::size_t lane_i[4];
    for (int l = 0; l < 4; ++l) {
      lane_v[l] = point_sqdist(coords, l, dim, q);
      lane_i[l] = l;
    }
    for (std::size_t i = 4; i < main; i += 4) {
      for (int l = 0; l < 4; ++l) {
        double v = point_sqdist(coords, i + l, dim, q);
        if (v < lane_v[l]) {
          lane_v[l] = v;
          lane_i[l] = i + l;
        }
      }
    }
    best = lane_v[0];
    bi = lane_i[0];
    for (int l = 1; l < 4; ++l)
      if (lane_v[l] < best || (lane_v[l] == best && lane_i[l] < bi)) {
        best = lane_v[l];
        bi = lane_i[l];
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

void plane_sqdist_batch_scalar(const double* const* coords, std::size_t n, int dim,
                               const double* base, const double* basis, int sub_dim, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double r0 = coords[0][i] - base[0];
    double r1 = dim > 1 ? coords[1][i] - base[1] : 0.0;
    double r2 = dim > 2 ? coords[2][i] - base[2] : 0.0;
    double s = r0 * r0 + r1 * r1 + r2 * r2;
    for (int k = 0; k < sub_dim; ++k) {
      const double* b = basis + std::size_t(k) * dim;
      double t = r0 * b[0];
      if (dim > 1) t += r1 * b[1];
      if (dim > 2) t += r2 * b[2];
      s -= t * t;
    }
    out[i] = s > 0.0 ? s : 0.0;
  }
}

double sum_scalar(const double* x, std::size_t n) {
  const std::size_t main = n & ~std::size_t(3);
  double l0 = 0, l1 = 0, l2 = 0, l3 = 0;
  for (std::size_t i = 0; i < main; i += 4) {
    l0 += x[i];
    l1 += x[i + 1];
    l2 += x[i + 2];
    l3 += x[i + 3];
  }
  double acc = (l0 + l1) + (l2 + l3);
  for (std::size_t i = main; i < n; ++i) acc += x[i];
  return acc;
}

double max_value_scalar(const double* x, std::size_t n, std::size_t* idx) {
  const std::size_t main = n & ~std::size_t(3);
  double best;
  std::size_t bi;
  if (main) {
    double lane_v[4];
    std::size_t lane_i[4];
    for (int l = 0; l < 4; ++l) {
      lane_v[l] = x[l];
      lane_i[l] = l;
    }
    for (std::size_t i = 4; i < main; i += 4) {
      for (int l = 0; l < 4; ++l)
        if (x[i + l] > lane_v[l]) {
          lane_v[l] = x[i + l];
          lane_i[l] = i + l;
        }
    }
    best = lane_v[0];
    bi = lane_i[0];
    for (int l = 1; l < 4; ++l)
      if (lane_v[l] > best || (lane_v[l] == best && lane_i[l] < bi)) {
        best = lane_v[l];
        bi = lane_i[l];
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

void moments_scalar(const double* const* coords, std::size_t n, int dim, const double* w,
                    double* sw, double* swx, double* swxx) {
  const int pairs = dim * (dim + 1) / 2;
  double lw[4] = {0, 0, 0, 0};
  double lx[4][3] = {};
  double lxx[4][6] = {};
  const std::size_t main = n & ~std::size_t(3);
  for (std::size_t i = 0; i < main; i += 4) {
    for (int l = 0; l < 4; ++l) {
      const std::size_t j = i + l;
      const double wj = w ? w[j] : 1.0;
      lw[l] += wj;
      int p = 0;
      for (int c = 0; c < dim; ++c) {
        const double xc = coords[c][j];
        lx[l][c] += wj * xc;
        for (int c2 = c; c2 < dim; ++c2) lxx[l][p++] += wj * xc * coords[c2][j];
      }
    }
  }
  *sw = (lw[0] + lw[1]) + (lw[2] + lw[3]);
  for (int c = 0; c < dim; ++c) swx[c] = (lx[0][c] + lx[1][c]) + (lx[2][c] + lx[3][c]);
  for (int p = 0; p < pairs; ++p) swxx[p] = (lxx[0][p] + lxx[1][p]) + (lxx[2][p] + lxx[3][p]);
  for (std::size_t j = main; j < n; ++j) {
    const double wj = w ? w[j] : 1.0;
    *sw += wj;
    int p = 0;
    for (int c = 0; c < dim; ++c) {
      const double xc = coords[c][j];
      swx[c] += wj * xc;
      for (int c2 = c; c2 < dim; ++c2) swxx[p++] += wj * xc * coords[c2][j];
    }
  }
}

}  // namespace gmt::simd::detail
