#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "epibias/error.hpp"
#include "epibias/kernels.hpp"

using namespace epibias;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

double naive_dot(const std::vector<double>& a, const std::vector<double>& b) {
  long double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("scalar kernels agree with a long-double reference") {
  std::mt19937_64 rng(7);
  const kernels::KernelTable& t = kernels::scalar_table();
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 17u, 64u, 129u}) {
    const auto a = random_vector(rng, n), b = random_vector(rng, n);
    CHECK(t.dot(a.data(), b.data(), n) == doctest::Approx(naive_dot(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("AVX2 and scalar kernels return identical bits") {
  const kernels::KernelTable* avx = kernels::avx2_table();
  if (!avx) {
    MESSAGE("AVX2 unavailable; scalar path only");
    return;
  }
  const kernels::KernelTable& sc = kernels::scalar_table();
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = static_cast<std::size_t>(trial % 67);
    const auto a = random_vector(rng, n), b = random_vector(rng, n);
    const double ref = sc.dot(a.data(), b.data(), n);
    CHECK(avx->dot(a.data(), b.data(), n) == ref);

    auto y1 = random_vector(rng, n);
    auto y2 = y1;
    sc.axpy(0.37, a.data(), y1.data(), n);
    avx->axpy(0.37, a.data(), y2.data(), n);
    CHECK(y1 == y2);

    const std::size_t rows = 1 + static_cast<std::size_t>(trial % 23), cols = 1 + static_cast<std::size_t>(trial % 13);
    const auto x = random_vector(rng, rows), m = random_vector(rng, rows * cols);
    std::vector<double> o1(cols), o2(cols);
    sc.vecmat_relu(x.data(), m.data(), rows, cols, o1.data());
    avx->vecmat_relu(x.data(), m.data(), rows, cols, o2.data());
    CHECK(o1 == o2);
    for (double v : o1) CHECK(v >= 0.0);
  }
}

TEST_CASE("vecmat_relu is max(0, x M)") {
  const std::vector<double> x{1.0, -2.0};
  const std::vector<double> m{1.0, 2.0, 3.0,    // row 0
                              1.0, 0.5, -1.0};  // row 1
  std::vector<double> out(3);
  kernels::vecmat_relu(x, m, 3, out);
  CHECK(out[0] == 0.0);  // 1 - 2 = -1 -> 0
  CHECK(out[1] == 1.0);
  CHECK(out[2] == 5.0);
}

TEST_CASE("cosine properties") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 31);
    const auto a = random_vector(rng, n), b = random_vector(rng, n);
    const double c = kernels::cosine(a, b);
    CHECK(c >= -1.0 - 1e-12);
    CHECK(c <= 1.0 + 1e-12);
    CHECK(c == doctest::Approx(kernels::cosine(b, a)).epsilon(1e-12));
    auto scaled = a;
    const double k = scale(rng);
    for (double& x : scaled) x *= k;
    CHECK(kernels::cosine(scaled, b) == doctest::Approx(c).epsilon(1e-10));
    CHECK(kernels::cosine(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    const double oracle = naive_dot(a, b) / std::sqrt(naive_dot(a, a) * naive_dot(b, b));
    CHECK(c == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("cosine rejects zero vectors and length mismatch") {
  const std::vector<double> zero(4, 0.0), one(4, 1.0), three(3, 1.0);
  CHECK_THROWS_AS(kernels::cosine(zero, one), Error);
  try {
    kernels::cosine(one, three);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("forcing the scalar ISA switches the active table") {
  kernels::force_isa(kernels::Isa::Scalar);
  CHECK(kernels::active().isa == kernels::Isa::Scalar);
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  CHECK(kernels::dot(a, b) == 32.0);
  kernels::force_isa(kernels::Isa::Avx2);
  CHECK(kernels::dot(a, b) == 32.0);
}
