#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

#include "epibias/error.hpp"
#include "epibias/kernels.hpp"
#include "kernels_impl.hpp"

namespace epibias::kernels {

namespace {

const KernelTable kScalar{Isa::Scalar, &detail::dot_scalar, &detail::axpy_scalar,
                          &detail::vecmat_relu_scalar};

#if defined(EPIBIAS_HAVE_AVX2)
const KernelTable kAvx2{Isa::Avx2, &detail::dot_avx2, &detail::axpy_avx2,
                        &detail::vecmat_relu_avx2};
#endif

#if defined(EPIBIAS_HAVE_AVX2)
bool cpu_has_avx2() {
#if defined(__GNUC__) || defined(__clang__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}
#endif

const KernelTable* select_default() {
  if (const char* env = std::getenv("EPIBIAS_SIMD"); env && std::string(env) == "scalar") {
    return &kScalar;
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &kScalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{select_default()};
  return table;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if defined(EPIBIAS_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void force_isa(Isa isa) {
  const KernelTable* t = &kScalar;
  if (isa == Isa::Avx2 && avx2_table()) t = avx2_table();
  current().store(t, std::memory_order_release);
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "dot: length " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  return active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "axpy: length mismatch");
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void vecmat_relu(std::span<const double> x, std::span<const double> m, std::size_t cols,
                 std::span<double> out) {
  if (m.size() != x.size() * cols || out.size() != cols) {
    throw Error(ErrorCode::DimensionMismatch, "vecmat_relu: matrix is not rows x cols");
  }
  active().vecmat_relu(x.data(), m.data(), x.size(), cols, out.data());
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "cosine: length mismatch");
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::ZeroVector, "cosine: zero-norm vector");
  double c = dot(a, b) / (na * nb);
  // rounding can push |c| a hair past 1
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return c;
}

}  // namespace epibias::kernels
