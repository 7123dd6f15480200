#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>

#include "adm/fields.hpp"

namespace adm::test {

using Fn = std::function<double(double, double, double)>;

inline ScalarField sampled(const TorusGrid& g, const Fn& f) { return ScalarField::sample(g, f); }

inline double max_error(const ScalarField& f, const Fn& exact) {
  double m = 0.0;
  for (std::size_t p = 0; p < f.size(); ++p) {
    const auto idx = f.grid().unravel(p);
    const double h = f.grid().spacing();
    m = std::max(m, std::abs(f[p] - exact(idx[0] * h, idx[1] * h, idx[2] * h)));
  }
  return m;
}

inline VectorField vector_of(const TorusGrid& g, const Fn& x, const Fn& y) {
  VectorField v(g);
  v[0] = sampled(g, x);
  v[1] = sampled(g, y);
  return v;
}

inline SymTensorField diag2(const TorusGrid& g, const Fn& a, const Fn& b, Variance var = Variance::covariant) {
  SymTensorField t(g, var);
  t(0, 0) = sampled(g, a);
  t(1, 1) = sampled(g, b);
  return t;
}

inline bool bit_equal(const ScalarField& a, const ScalarField& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
  }
  return true;
}

}  // namespace adm::test
