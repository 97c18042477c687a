#pragma once

#include <cstddef>

namespace mvsrc::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
double sq_dist_scalar(const double* a, const double* b, std::size_t n);

#if defined(MVSRC_HAVE_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
double sq_dist_avx2(const double* a, const double* b, std::size_t n);
#endif

#if defined(MVSRC_HAVE_NEON)
double dot_neon(const double* a, const double* b, std::size_t n);
void axpy_neon(double alpha, const double* x, double* y, std::size_t n);
double sq_dist_neon(const double* a, const double* b, std::size_t n);
#endif

}  // namespace mvsrc::kernels::detail
