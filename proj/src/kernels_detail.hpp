#pragma once

#include <cstddef>

// Internal: per-backend kernel entry points. Scalar lives in
// kernels_scalar.cpp, AVX2 in kernels_avx2.cpp (compiled with -mavx2 and only
// invoked after a cpuid check).

namespace gmt::simd::detail {

void sqdist_batch_scalar(const double* const* coords, std::size_t n, int dim, const double* q,
                         double* out);
double min_sqdist_scalar(const double* const* coords, std::size_t n, int dim, const double* q,
                         std::size_t* idx);
void plane_sqdist_batch_scalar(const double* const* coords, std::size_t n, int dim,
                               const double* base, const double* basis, int sub_dim, double* out);
double sum_scalar(const double* x, std::size_t n);
double max_value_scalar(const double* x, std::size_t n, std::size_t* idx);
void moments_scalar(const double* const* coords, std::size_t n, int dim, const double* w,
                    double* sw, double* swx, double* swxx);

void sqdist_batch_avx2(const double* const* coords, std::size_t n, int dim, const double* q,
                       double* out);
double min_sqdist_avx2(const double* const* coords, std::size_t n, int dim, const double* q,
                       std::size_t* idx);
void plane_sqdist_batch_avx2(const double* const* coords, std::size_t n, int dim,
                             const double* base, const double* basis, int sub_dim, double* out);
double sum_avx2(const double* x, std::size_t n);
double max_value_avx2(const double* x, std::size_t n, std::size_t* idx);
void moments_avx2(const double* const* coords, std::size_t n, int dim, const double* w, double* sw,
                  double* swx, double* swxx);

}  // namespace gmt::simd::detail
