// Compiled with -mavx2 -mfma. Nothing in this file may run before
// cpu_has_avx2_fma() has returned true.
#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "adm/simd/kernels.hpp"

namespace adm::simd {
namespace {

void scale(std::size_t n, double a, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = a * x[i];
}

void axpy(std::size_t n, double a, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void add(std::size_t n, const double* x, const double* y, double* z) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(z + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) z[i] = x[i] + y[i];
}

void sub(std::size_t n, const double* x, const double* y, double* z) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(z + i, _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) z[i] = x[i] - y[i];
}

void mul(std::size_t n, const double* x, const double* y, double* z) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) z[i] = x[i] * y[i];
}

void fma(std::size_t n, const double* x, const double* y, double* z) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(z + i, _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                                            _mm256_loadu_pd(z + i)));
  }
  for (; i < n; ++i) z[i] = std::fma(x[i], y[i], z[i]);
}

void scaled_fma(std::size_t n, double a, const double* x, const double* y, double* z) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(z + i, _mm256_fmadd_pd(va, p, _mm256_loadu_pd(z + i)));
  }
  for (; i < n; ++i) z[i] = std::fma(a, x[i] * y[i], z[i]);
}

double sum(std::size_t n, const double* x) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) s += x[i];
  return s;
}

void apply_along_axis(const AxisPlan& p, const double* in, double* out) {
  const std::size_t n = p.n;
  if (p.inner == 1) {
    for (std::size_t o = 0; o < p.outer; ++o) {
      double* row = out + o * n;
      std::fill(row, row + n, 0.0);
      for (std::size_t j = 0; j < n; ++j) axpy(n, in[o * n + j], p.transposed + j * n, row);
    }
    return;
  }
  const std::size_t inner = p.inner;
  for (std::size_t o = 0; o < p.outer; ++o) {
    for (std::size_t i = 0; i < n; ++i) {
      double* y = out + (o * n + i) * inner;
      std::fill(y, y + inner, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        const double a = p.matrix[i * n + j];
        if (a == 0.0) continue;
        axpy(inner, a, in + (o * n + j) * inner, y);
      }
    }
  }
}

void sym_inverse2(std::size_t n, const double* const* g, double* const* inv, double* det) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d neg = _mm256_set1_pd(-0.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d a = _mm256_loadu_pd(g[0] + k);
    const __m256d b = _mm256_loadu_pd(g[1] + k);
    const __m256d c = _mm256_loadu_pd(g[2] + k);
    const __m256d dt = _mm256_fmsub_pd(a, c, _mm256_mul_pd(b, b));
    const __m256d r = _mm256_div_pd(one, dt);
    _mm256_storeu_pd(inv[0] + k, _mm256_mul_pd(c, r));
    _mm256_storeu_pd(inv[1] + k, _mm256_xor_pd(_mm256_mul_pd(b, r), neg));
    _mm256_storeu_pd(inv[2] + k, _mm256_mul_pd(a, r));
    _mm256_storeu_pd(det + k, dt);
  }
  for (; k < n; ++k) {
    const double a = g[0][k], b = g[1][k], c = g[2][k];
    const double dt = a * c - b * b;
    const double r = 1.0 / dt;
    inv[0][k] = c * r;
    inv[1][k] = -b * r;
    inv[2][k] = a * r;
    det[k] = dt;
  }
}

void sym_inverse3(std::size_t n, const double* const* g, double* const* inv, double* det) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d a = _mm256_loadu_pd(g[0] + k);
    const __m256d b = _mm256_loadu_pd(g[1] + k);
    const __m256d c = _mm256_loadu_pd(g[2] + k);
    const __m256d d = _mm256_loadu_pd(g[3] + k);
    const __m256d e = _mm256_loadu_pd(g[4] + k);
    const __m256d f = _mm256_loadu_pd(g[5] + k);
    const __m256d c00 = _mm256_fmsub_pd(d, f, _mm256_mul_pd(e, e));
    const __m256d c01 = _mm256_fmsub_pd(c, e, _mm256_mul_pd(b, f));
    const __m256d c02 = _mm256_fmsub_pd(b, e, _mm256_mul_pd(c, d));
    const __m256d c11 = _mm256_fmsub_pd(a, f, _mm256_mul_pd(c, c));
    const __m256d c12 = _mm256_fmsub_pd(b, c, _mm256_mul_pd(a, e));
    const __m256d c22 = _mm256_fmsub_pd(a, d, _mm256_mul_pd(b, b));
    const __m256d dt =
        _mm256_fmadd_pd(a, c00, _mm256_fmadd_pd(b, c01, _mm256_mul_pd(c, c02)));
    const __m256d r = _mm256_div_pd(one, dt);
    _mm256_storeu_pd(inv[0] + k, _mm256_mul_pd(c00, r));
    _mm256_storeu_pd(inv[1] + k, _mm256_mul_pd(c01, r));
    _mm256_storeu_pd(inv[2] + k, _mm256_mul_pd(c02, r));
    _mm256_storeu_pd(inv[3] + k, _mm256_mul_pd(c11, r));
    _mm256_storeu_pd(inv[4] + k, _mm256_mul_pd(c12, r));
    _mm256_storeu_pd(inv[5] + k, _mm256_mul_pd(c22, r));
    _mm256_storeu_pd(det + k, dt);
  }
  for (; k < n; ++k) {
    const double a = g[0][k], b = g[1][k], c = g[2][k];
    const double d = g[3][k], e = g[4][k], f = g[5][k];
    const double c00 = d * f - e * e;
    const double c01 = c * e - b * f;
    const double c02 = b * e - c * d;
    const double c11 = a * f - c * c;
    const double c12 = b * c - a * e;
    const double c22 = a * d - b * b;
    const double dt = a * c00 + b * c01 + c * c02;
    const double r = 1.0 / dt;
    inv[0][k] = c00 * r;
    inv[1][k] = c01 * r;
    inv[2][k] = c02 * r;
    inv[3][k] = c11 * r;
    inv[4][k] = c12 * r;
    inv[5][k] = c22 * r;
    det[k] = dt;
  }
}

}  // namespace

const Kernels* avx2_kernels() {
  static const Kernels table{
      "avx2", scale, axpy, add, sub, mul, fma, scaled_fma, sum, apply_along_axis,
      sym_inverse2, sym_inverse3};
  return &table;
}

}  // namespace adm::simd
