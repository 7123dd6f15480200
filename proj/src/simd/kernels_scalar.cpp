#include "adm/simd/kernels.hpp"

#include <algorithm>

namespace adm::simd {
namespace {

void scale(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i];
}

void axpy(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void add(std::size_t n, const double* x, const double* y, double* z) {
  for (std::size_t i = 0; i < n; ++i) z[i] = x[i] + y[i];
}

void sub(std::size_t n, const double* x, const double* y, double* z) {
  for (std::size_t i = 0; i < n; ++i) z[i] = x[i] - y[i];
}

void mul(std::size_t n, const double* x, const double* y, double* z) {
  for (std::size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

void fma(std::size_t n, const double* x, const double* y, double* z) {
  for (std::size_t i = 0; i < n; ++i) z[i] += x[i] * y[i];
}

void scaled_fma(std::size_t n, double a, const double* x, const double* y, double* z) {
  for (std::size_t i = 0; i < n; ++i) z[i] += a * (x[i] * y[i]);
}

double sum(std::size_t n, const double* x) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lane[0] += x[i];
    lane[1] += x[i + 1];
    lane[2] += x[i + 2];
    lane[3] += x[i + 3];
  }
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
      for (std::size_t j = 0; j < n; ++j) {
        const double a = in[o * n + j];
        const double* col = p.transposed + j * n;
        for (std::size_t i = 0; i < n; ++i) row[i] += a * col[i];
      }
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
        const double* x = in + (o * n + j) * inner;
        for (std::size_t q = 0; q < inner; ++q) y[q] += a * x[q];
      }
    }
  }
}

void sym_inverse2(std::size_t n, const double* const* g, double* const* inv, double* det) {
  for (std::size_t k = 0; k < n; ++k) {
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
  for (std::size_t k = 0; k < n; ++k) {
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

const Kernels& scalar_kernels() {
  static const Kernels table{
      "scalar", scale, axpy, add, sub, mul, fma, scaled_fma, sum, apply_along_axis,
      sym_inverse2, sym_inverse3};
  return table;
}

}  // namespace adm::simd
