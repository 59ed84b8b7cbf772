#include <cmath>

#include "kernels_impl.hpp"

// Mirrors the AVX2 lane layout and fused multiply-adds so both tables return
// identical bits; recorded fixtures depend on that.
namespace epibias::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc0[4] = {0.0, 0.0, 0.0, 0.0};
  double acc1[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (std::size_t k = 0; k < 4; ++k) {
      acc0[k] = std::fma(a[i + k], b[i + k], acc0[k]);
      acc1[k] = std::fma(a[i + 4 + k], b[i + 4 + k], acc1[k]);
    }
  }
  for (; i + 4 <= n; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) acc0[k] = std::fma(a[i + k], b[i + k], acc0[k]);
  }
  double v[4];
  for (std::size_t k = 0; k < 4; ++k) v[k] = acc0[k] + acc1[k];
  const double lo0 = v[0] + v[2];
  const double lo1 = v[1] + v[3];
  double sum = lo0 + lo1;
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  const std::size_t vec = n - n % 4;
  std::size_t i = 0;
  for (; i < vec; ++i) y[i] = std::fma(alpha, x[i], y[i]);
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void vecmat_relu_scalar(const double* x, const double* m, std::size_t rows, std::size_t cols,
                        double* out) {
  for (std::size_t j = 0; j < cols; ++j) out[j] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (x[r] == 0.0) continue;
    axpy_scalar(x[r], m + r * cols, out, cols);
  }
  for (std::size_t j = 0; j < cols; ++j) out[j] = out[j] > 0.0 ? out[j] : 0.0;
}

}  // namespace epibias::kernels::detail
