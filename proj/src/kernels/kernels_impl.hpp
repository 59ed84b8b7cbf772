#pragma once

#include <cstddef>

namespace epibias::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void vecmat_relu_scalar(const double* x, const double* m, std::size_t rows, std::size_t cols,
                        double* out);

#if defined(EPIBIAS_HAVE_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void vecmat_relu_avx2(const double* x, const double* m, std::size_t rows, std::size_t cols,
                      double* out);
#endif

}  // namespace epibias::kernels::detail
