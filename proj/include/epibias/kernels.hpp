#pragma once

// Dense double-precision kernels behind the scorer and the cosine ranker.
//
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The variant is chosen once at startup from CPUID; set
// EPIBIAS_SIMD=scalar in the environment to force the reference path.
// Variants may differ in the last few ulps (FMA, summation order).

#include <cstddef>
#include <span>
#include <string_view>

namespace epibias::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]; a.size() == b.size()
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[j] = max(0, sum_r x[r] * m[r * cols + j]) for a row-major rows x cols matrix
  void (*vecmat_relu)(const double* x, const double* m, std::size_t rows, std::size_t cols,
                      double* out);
};

const KernelTable& scalar_table();
// nullptr when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2_table();

// The table selected for this process.
const KernelTable& active();
void force_isa(Isa isa);  // tests only; falls back to scalar if unsupported

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void vecmat_relu(std::span<const double> x, std::span<const double> m, std::size_t cols,
                 std::span<double> out);

// Euclidean norm.
double norm(std::span<const double> v);

// Cosine similarity. Throws Error(ZeroVector) if either vector has zero norm,
// Error(DimensionMismatch) on length mismatch.
double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace epibias::kernels
