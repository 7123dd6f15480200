#include "adm/geometry.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "adm/simd/kernels.hpp"

namespace adm {
namespace {

void require_variance(const SymTensorField& t, Variance v, const char* what) {
  if (t.variance() != v) throw InvalidArgument(std::string(what));
}

/// d[a][c] = d_a of component c.
std::vector<std::vector<ScalarField>> derivatives(const std::vector<ScalarField>& comps, int dim) {
  std::vector<std::vector<ScalarField>> d(dim);
  for (int a = 0; a < dim; ++a) {
    d[a].reserve(comps.size());
    for (const auto& c : comps) d[a].push_back(spectral_derivative(c, a));
  }
  return d;
}

}  // namespace

ScalarField spectral_derivative(const ScalarField& f, int axis) {
  const TorusGrid& grid = f.grid();
  if (axis < 0 || axis >= grid.dim()) {
    throw InvalidArgument("derivative axis " + std::to_string(axis) + " out of range");
  }
  ScalarField out(grid);
  simd::active().apply_along_axis(grid.axis_plan(axis), f.data(), out.data());
  return out;
}

namespace {

void invert(const MetricField& g, SymTensorField& inv, ScalarField& det) {
  const int d = g.dim();
  const auto& gc = g.tensor().components();
  auto& ic = inv.components();
  std::vector<const double*> in(gc.size());
  std::vector<double*> out(ic.size());
  for (std::size_t s = 0; s < gc.size(); ++s) {
    in[s] = gc[s].data();
    out[s] = ic[s].data();
  }
  const auto& k = simd::active();
  if (d == 2) {
    k.sym_inverse2(g.grid().size(), in.data(), out.data(), det.data());
  } else {
    k.sym_inverse3(g.grid().size(), in.data(), out.data(), det.data());
  }
}

}  // namespace

SymTensorField metric_inverse(const MetricField& g) {
  SymTensorField inv(g.grid(), Variance::contravariant);
  ScalarField det(g.grid());
  invert(g, inv, det);
  return inv;
}

ScalarField metric_determinant(const MetricField& g) {
  SymTensorField inv(g.grid(), Variance::contravariant);
  ScalarField det(g.grid());
  invert(g, inv, det);
  return det;
}

MetricGeometry analyze(const MetricField& g) {
  SymTensorField inv(g.grid(), Variance::contravariant);
  ScalarField det(g.grid());
  invert(g, inv, det);
  ScalarField root = det.map([](double v) { return std::sqrt(v); });
  ChristoffelField gamma = christoffel(g, inv);
  return MetricGeometry{std::move(inv), std::move(det), std::move(root), std::move(gamma)};
}

ChristoffelField christoffel(const MetricField& g) { return christoffel(g, metric_inverse(g)); }

ChristoffelField christoffel(const MetricField& g, const SymTensorField& inverse) {
  const int d = g.dim();
  const TorusGrid& grid = g.grid();
  const auto dg = derivatives(g.tensor().components(), d);
  auto dgc = [&](int a, int i, int j) -> const ScalarField& { return dg[a][sym_index(d, i, j)]; };

  ChristoffelField out(grid);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      // first kind: Gamma_{l,ij}
      std::vector<ScalarField> first;
      first.reserve(d);
      for (int l = 0; l < d; ++l) {
        ScalarField f = dgc(i, l, j);
        f += dgc(j, l, i);
        f -= dgc(l, i, j);
        f *= 0.5;
        first.push_back(std::move(f));
      }
      for (int k = 0; k < d; ++k) {
        ScalarField& target = out(k, i, j);
        for (int l = 0; l < d; ++l) fma_into(target, inverse(k, l), first[l]);
      }
    }
  }
  return out;
}

ScalarField scalar_curvature(const MetricField& g) { return scalar_curvature(g, analyze(g)); }

ScalarField scalar_curvature(const MetricField& g, const MetricGeometry& geo) {
  const int d = g.dim();
  const TorusGrid& grid = g.grid();
  const ChristoffelField& G = geo.christoffel;
  const SymTensorField& inv = geo.inverse;

  // contracted symbol A_j = Gamma^i_ij
  std::vector<ScalarField> contracted(d, ScalarField(grid));
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) contracted[j] += G(i, i, j);
  }

  ScalarField r(grid);
  for (int l = 0; l < d; ++l) {
    for (int j = l; j < d; ++j) {
      const double m = sym_multiplicity(l, j);
      // d_i Gamma^i_lj + Gamma Gamma terms, symmetric in (l, j)
      ScalarField term(grid);
      for (int i = 0; i < d; ++i) term += spectral_derivative(G(i, l, j), i);
      for (int k = 0; k < d; ++k) fma_into(term, contracted[k], G(k, l, j));
      for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) fma_into(term, -1.0, G(i, l, k), G(k, i, j));
      }
      fma_into(r, m, inv(l, j), term);
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int l = 0; l < d; ++l) {
      fma_into(r, -1.0, inv(j, l), spectral_derivative(contracted[j], l));
    }
  }
  return r;
}

OneFormField differential(const ScalarField& phi) {
  const int d = phi.grid().dim();
  std::vector<ScalarField> c;
  c.reserve(d);
  for (int a = 0; a < d; ++a) c.push_back(spectral_derivative(phi, a));
  return OneFormField(std::move(c));
}

VectorField raise(const SymTensorField& inverse, const OneFormField& a) {
  require_variance(inverse, Variance::contravariant, "raising an index needs a contravariant tensor");
  require_same_grid(inverse.grid(), a.grid());
  const int d = a.dim();
  VectorField out(a.grid());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) fma_into(out[i], inverse(i, j), a[j]);
  }
  return out;
}

OneFormField lower(const MetricField& g, const VectorField& x) {
  require_same_grid(g.grid(), x.grid());
  const int d = x.dim();
  OneFormField out(x.grid());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) fma_into(out[i], g(i, j), x[j]);
  }
  return out;
}

VectorField grad_spatial(const MetricField& g, const ScalarField& phi) {
  require_same_grid(g.grid(), phi.grid());
  return raise(metric_inverse(g), differential(phi));
}

OneFormField divergence_sym(const MetricField& g, const SymTensorField& pi) {
  require_same_grid(g.grid(), pi.grid());
  require_variance(pi, Variance::covariant, "divergence expects a covariant tensor");
  return divergence_sym(analyze(g), pi);
}

OneFormField divergence_sym(const MetricGeometry& geo, const SymTensorField& pi) {
  require_variance(pi, Variance::covariant, "divergence expects a covariant tensor");
  require_same_grid(geo.inverse.grid(), pi.grid());
  const int d = pi.dim();
  const TorusGrid& grid = pi.grid();
  const SymTensorField& inv = geo.inverse;
  const ChristoffelField& G = geo.christoffel;
  const auto dpi = derivatives(pi.components(), d);

  // Lambda^m = g^ik Gamma^m_ik, mixed P^i_m = g^ik pi_km
  std::vector<ScalarField> lambda(d, ScalarField(grid));
  for (int m = 0; m < d; ++m) {
    for (int i = 0; i < d; ++i) {
      for (int k = i; k < d; ++k) fma_into(lambda[m], sym_multiplicity(i, k), inv(i, k), G(m, i, k));
    }
  }
  std::vector<ScalarField> mixed(static_cast<std::size_t>(d) * d, ScalarField(grid));
  for (int i = 0; i < d; ++i) {
    for (int m = 0; m < d; ++m) {
      for (int k = 0; k < d; ++k) fma_into(mixed[i * d + m], inv(i, k), pi(k, m));
    }
  }

  OneFormField out(grid);
  for (int j = 0; j < d; ++j) {
    ScalarField& o = out[j];
    for (int i = 0; i < d; ++i) {
      for (int k = 0; k < d; ++k) fma_into(o, inv(i, k), dpi[i][sym_index(d, k, j)]);
    }
    for (int m = 0; m < d; ++m) fma_into(o, -1.0, lambda[m], pi(m, j));
    for (int i = 0; i < d; ++i) {
      for (int m = 0; m < d; ++m) fma_into(o, -1.0, G(m, i, j), mixed[i * d + m]);
    }
  }
  return out;
}

ScalarField directional_derivative(const VectorField& x, const ScalarField& phi) {
  require_same_grid(x.grid(), phi.grid());
  ScalarField out(phi.grid());
  for (int a = 0; a < x.dim(); ++a) fma_into(out, x[a], spectral_derivative(phi, a));
  return out;
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  require_same_grid(x.grid(), y.grid());
  const int d = x.dim();
  VectorField out(x.grid());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      fma_into(out[i], x[j], spectral_derivative(y[i], j));
      fma_into(out[i], -1.0, y[j], spectral_derivative(x[i], j));
    }
  }
  return out;
}

SymTensorField lie_derivative_sym2(const VectorField& x, const SymTensorField& t) {
  require_same_grid(x.grid(), t.grid());
  const int d = t.dim();
  const auto dt = derivatives(t.components(), d);
  const auto dx = derivatives(x.components(), d);  // dx[a][k] = d_a X^k
  SymTensorField out(t.grid(), t.variance());
  const bool covariant = t.variance() == Variance::covariant;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      ScalarField& o = out(i, j);
      const int s = sym_index(d, i, j);
      for (int k = 0; k < d; ++k) fma_into(o, x[k], dt[k][s]);
      for (int k = 0; k < d; ++k) {
        if (covariant) {
          fma_into(o, t(k, j), dx[i][k]);
          fma_into(o, t(i, k), dx[j][k]);
        } else {
          fma_into(o, -1.0, t(k, j), dx[k][i]);
          fma_into(o, -1.0, t(i, k), dx[k][j]);
        }
      }
    }
  }
  return out;
}

std::pair<ScalarField, ScalarField> traces(const MetricField& g, const SymTensorField& pi) {
  require_same_grid(g.grid(), pi.grid());
  return traces(metric_inverse(g), pi);
}

std::pair<ScalarField, ScalarField> traces(const SymTensorField& inverse, const SymTensorField& pi) {
  require_variance(pi, Variance::covariant, "traces expect a covariant tensor");
  require_variance(inverse, Variance::contravariant, "traces expect a contravariant inverse metric");
  require_same_grid(inverse.grid(), pi.grid());
  const int d = pi.dim();
  const TorusGrid& grid = pi.grid();
  std::vector<ScalarField> mixed(static_cast<std::size_t>(d) * d, ScalarField(grid));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) fma_into(mixed[i * d + j], inverse(i, k), pi(k, j));
    }
  }
  ScalarField tr(grid), tr2(grid);
  for (int i = 0; i < d; ++i) {
    tr += mixed[i * d + i];
    for (int j = 0; j < d; ++j) fma_into(tr2, mixed[i * d + j], mixed[j * d + i]);
  }
  return {std::move(tr), std::move(tr2)};
}

double integrate(const ScalarField& f) {
  return f.grid().cell_weight() * simd::active().sum(f.size(), f.data());
}

double integrate_density(const ScalarField& sqrt_det, const ScalarField& f) {
  return integrate(sqrt_det * f);
}

double integrate_density(const MetricField& g, const ScalarField& f) {
  require_same_grid(g.grid(), f.grid());
  return integrate_density(metric_determinant(g).map([](double v) { return std::sqrt(v); }), f);
}

OneFormField contract_first(const SymTensorField& t, const VectorField& a) {
  require_variance(t, Variance::covariant, "contraction expects a covariant tensor");
  require_same_grid(t.grid(), a.grid());
  const int d = a.dim();
  OneFormField out(a.grid());
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) fma_into(out[j], t(i, j), a[i]);
  }
  return out;
}

}  // namespace adm
