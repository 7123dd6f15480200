#include "adm/canonical.hpp"

#include <array>
#include <cmath>

#include "adm/geometry.hpp"
#include "adm/parallel.hpp"
#include "adm/simd/kernels.hpp"

namespace adm {
namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

std::size_t dof_count(const TorusGrid& grid) {
  return 2 * static_cast<std::size_t>(grid.sym_components()) * grid.size();
}

Mat3 load(const SymTensorField& t, std::size_t p) {
  Mat3 m{};
  const int d = t.dim();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m[i][j] = t(i, j)[p];
  }
  return m;
}

/// a * b * a for symmetric a, b of size d.
Mat3 congruence(const Mat3& a, const Mat3& b, int d) {
  Mat3 ab{}, out{};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) ab[i][j] += a[i][k] * b[k][j];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) out[i][j] += ab[i][k] * a[k][j];
  return out;
}

}  // namespace

DofVector::DofVector(const TorusGrid& grid) : grid_(grid), values_(dof_count(grid), 0.0) {}

DofVector::DofVector(const TorusGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != dof_count(grid_)) throw InvalidArgument("DOF vector length does not match grid");
}

std::size_t DofVector::block_index(int i, int j, std::size_t point) const {
  return static_cast<std::size_t>(sym_index(grid_.dim(), i, j)) * grid_.size() + point;
}

std::string GradientStrategy::describe() const {
  std::string s = method == Method::central_fd ? "central_fd" : "higher_order_fd";
  s += " eta=" + nlohmann::json(eta).dump();
  if (richardson) s += " richardson";
  return s;
}

DofVector pack_canonical(const PhaseSpacePoint& p) {
  const TorusGrid& grid = p.grid();
  const int d = grid.dim();
  const double w = grid.cell_weight();
  const MetricGeometry geo = analyze(p.gamma());
  DofVector v(grid);
  const std::size_t off = v.momentum_offset();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Mat3 ptilde = congruence(load(geo.inverse, k), load(p.pi(), k), d);
    const double root = geo.sqrt_det[k];
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        const std::size_t a = v.block_index(i, j, k);
        v[a] = p.gamma()(i, j)[k];
        v[off + a] = w * sym_multiplicity(i, j) * root * ptilde[i][j];
      }
    }
  }
  return v;
}

PhaseSpacePoint unpack_canonical(const DofVector& v) {
  const TorusGrid& grid = v.grid();
  const int d = grid.dim();
  const double w = grid.cell_weight();
  const std::size_t off = v.momentum_offset();
  SymTensorField g(grid, Variance::covariant);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      ScalarField& c = g(i, j);
      for (std::size_t k = 0; k < grid.size(); ++k) c[k] = v[v.block_index(i, j, k)];
    }
  }
  MetricField gamma(std::move(g));
  const ScalarField det = metric_determinant(gamma);
  SymTensorField pi(grid, Variance::covariant);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    Mat3 ptilde{};
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        const double val = v[off + v.block_index(i, j, k)] / (w * sym_multiplicity(i, j));
        ptilde[i][j] = val;
        ptilde[j][i] = val;
      }
    }
    const Mat3 lowered = congruence(load(gamma.tensor(), k), ptilde, d);
    const double inv_root = 1.0 / std::sqrt(det[k]);
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) pi(i, j)[k] = lowered[i][j] * inv_root;
    }
  }
  return PhaseSpacePoint(std::move(gamma), std::move(pi));
}

namespace {

double difference_quotient(const Functional& f, const DofVector& base, std::size_t a, double h,
                           GradientStrategy::Method method) {
  DofVector probe = base;
  auto at = [&](double offset) {
    probe[a] = base[a] + offset;
    return f(unpack_canonical(probe));
  };
  if (method == GradientStrategy::Method::central_fd) {
    return (at(h) - at(-h)) / (2.0 * h);
  }
  return (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
}

double derivative_at(const Functional& f, const DofVector& base, std::size_t a, double h,
                     const GradientStrategy& s) {
  const double coarse = difference_quotient(f, base, a, h, s.method);
  if (!s.richardson) return coarse;
  const double fine = difference_quotient(f, base, a, 0.5 * h, s.method);
  const double factor = s.method == GradientStrategy::Method::central_fd ? 4.0 : 16.0;
  return (factor * fine - coarse) / (factor - 1.0);
}

}  // namespace

DofVector functional_gradient(const Functional& f, const PhaseSpacePoint& p,
                              const GradientStrategy& s) {
  if (!(s.eta > 0.0)) throw InvalidArgument("gradient step eta must be positive");
  const DofVector base = pack_canonical(p);
  DofVector grad(p.grid());
  parallel_for(base.size(), [&](std::size_t a) {
    const double h = s.eta * std::max(1.0, std::abs(base[a]));
    try {
      grad[a] = derivative_at(f, base, a, h, s);
    } catch (const DegenerateMetric&) {
      try {
        grad[a] = derivative_at(f, base, a, 0.1 * h, s);
      } catch (const DegenerateMetric&) {
        throw DegenerateMetric("gradient stencil for DOF " + std::to_string(a) +
                               " leaves the positive-definite cone even after shrinking the step");
      }
    }
  });
  return grad;
}

double poisson_pairing(const DofVector& df, const DofVector& dg) {
  require_same_grid(df.grid(), dg.grid());
  const std::size_t half = df.momentum_offset();
  std::vector<double> terms(half);
  for (std::size_t a = 0; a < half; ++a) {
    terms[a] = df[a] * dg[half + a] - dg[a] * df[half + a];
  }
  return simd::active().sum(terms.size(), terms.data());
}

double poisson_bracket(const Functional& f, const Functional& g, const PhaseSpacePoint& p,
                       const GradientStrategy& s) {
  return poisson_pairing(functional_gradient(f, p, s), functional_gradient(g, p, s));
}

Functional bracket_as_functional(const Functional& f, const Functional& g,
                                 const GradientStrategy& s) {
  FunctionalLabel label;
  label.kind = FunctionalLabel::Kind::nested_bracket;
  label.text = "{" + f.label().describe() + ", " + g.label().describe() + "}";
  label.children = {f.label_ptr(), g.label_ptr()};
  return Functional(std::move(label),
                    [f, g, s](const PhaseSpacePoint& p) { return poisson_bracket(f, g, p, s); });
}

Residual compare(double lhs, double rhs) {
  Residual r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.absolute = std::abs(lhs - rhs);
  r.scale = std::max(std::abs(lhs), std::abs(rhs));
  r.relative = r.absolute / std::max(r.scale, kScaleFloor);
  return r;
}

VectorField lapse_pair_shift(const MetricField& g, const ScalarField& phi, const ScalarField& psi) {
  require_same_grid(g.grid(), phi.grid());
  require_same_grid(g.grid(), psi.grid());
  const SymTensorField inv = metric_inverse(g);
  const OneFormField dphi = differential(phi);
  const OneFormField dpsi = differential(psi);
  OneFormField form(g.grid());
  for (int i = 0; i < g.dim(); ++i) {
    fma_into(form[i], phi, dpsi[i]);
    fma_into(form[i], -1.0, psi, dphi[i]);
  }
  return raise(inv, form);
}

DewittReport dewitt_residuals(const PhaseSpacePoint& p, const VectorField& x, const VectorField& y,
                              const ScalarField& phi, const ScalarField& psi,
                              const GradientStrategy& s) {
  const Functional cx = constraint_functional(Section::of_shift(x), "_X");
  const Functional cy = constraint_functional(Section::of_shift(y), "_Y");
  const Functional cphi = constraint_functional(Section::of_lapse(phi), "_phi");
  const Functional cpsi = constraint_functional(Section::of_lapse(psi), "_psi");
  const DofVector gx = functional_gradient(cx, p, s);
  const DofVector gy = functional_gradient(cy, p, s);
  const DofVector gphi = functional_gradient(cphi, p, s);
  const DofVector gpsi = functional_gradient(cpsi, p, s);

  DewittReport r;
  r.shift_shift = compare(poisson_pairing(gx, gy), smeared_constraint(Section::of_shift(lie_bracket(x, y)), p));
  r.shift_lapse =
      compare(poisson_pairing(gx, gphi), smeared_constraint(Section::of_lapse(directional_derivative(x, phi)), p));
  r.lapse_lapse = compare(poisson_pairing(gphi, gpsi),
                          smeared_constraint(Section::of_shift(lapse_pair_shift(p.gamma(), phi, psi)), p));
  return r;
}

Section frozen_section_bracket(const MetricField& frozen, const Section& a, const Section& b) {
  require_same_grid(frozen.grid(), a.grid());
  require_same_grid(frozen.grid(), b.grid());
  VectorField shift = lie_bracket(a.shift, b.shift);
  shift += lapse_pair_shift(frozen, a.lapse, b.lapse);
  ScalarField lapse = directional_derivative(a.shift, b.lapse);
  lapse -= directional_derivative(b.shift, a.lapse);
  return Section(std::move(shift), std::move(lapse));
}

Section frozen_jacobiator(const MetricField& frozen, const Section& a, const Section& b,
                          const Section& c) {
  Section j = frozen_section_bracket(frozen, a, frozen_section_bracket(frozen, b, c));
  j += frozen_section_bracket(frozen, b, frozen_section_bracket(frozen, c, a));
  j += frozen_section_bracket(frozen, c, frozen_section_bracket(frozen, a, b));
  return j;
}

Section jacobi_anomaly(const MetricField& frozen, const VectorField& x, const ScalarField& phi,
                       const ScalarField& psi) {
  const SymTensorField lie_inv = lie_derivative_sym2(x, metric_inverse(frozen));
  const OneFormField dphi = differential(phi);
  const OneFormField dpsi = differential(psi);
  OneFormField form(frozen.grid());
  for (int i = 0; i < frozen.dim(); ++i) {
    fma_into(form[i], phi, dpsi[i]);
    fma_into(form[i], -1.0, psi, dphi[i]);
  }
  return Section::of_shift(raise(lie_inv, form));
}

double frozen_jacobiator_residual(const MetricField& frozen, const VectorField& x,
                                  const ScalarField& phi, const ScalarField& psi) {
  const Section j = frozen_jacobiator(frozen, Section::of_shift(x), Section::of_lapse(phi),
                                      Section::of_lapse(psi));
  return (j - jacobi_anomaly(frozen, x, phi, psi)).max_abs();
}

nlohmann::json bracket_record(const std::string& relation, const Residual& r, const TorusGrid& grid,
                              std::uint64_t seed, const GradientStrategy& s) {
  return {{"relation", relation},
          {"residual", r.absolute},
          {"scale", r.scale},
          {"relative", r.relative},
          {"grid", {{"d", grid.dim()}, {"N", grid.n()}}},
          {"seed", seed},
          {"strategy", s.describe()}};
}

}  // namespace adm
