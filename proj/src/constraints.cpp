#include "adm/constraints.hpp"

#include <cmath>

#include "adm/geometry.hpp"

namespace adm {

PhaseSpacePoint::PhaseSpacePoint(MetricField gamma, SymTensorField pi)
    : gamma_(std::move(gamma)), pi_(std::move(pi)) {
  require_same_grid(gamma_.grid(), pi_.grid());
  if (pi_.variance() != Variance::covariant) {
    throw InvalidArgument("phase-space momentum must be covariant");
  }
}

PhaseSpacePoint PhaseSpacePoint::flat(const TorusGrid& grid) {
  return PhaseSpacePoint(MetricField::flat(grid), SymTensorField(grid, Variance::covariant));
}

Section::Section(VectorField x, ScalarField phi) : shift(std::move(x)), lapse(std::move(phi)) {
  require_same_grid(shift.grid(), lapse.grid());
}

Section Section::zero(const TorusGrid& grid) { return Section(VectorField(grid), ScalarField(grid)); }

Section Section::of_shift(VectorField x) {
  ScalarField zero(x.grid());
  return Section(std::move(x), std::move(zero));
}

Section Section::of_lapse(ScalarField phi) {
  VectorField zero(phi.grid());
  return Section(std::move(zero), std::move(phi));
}

Section& Section::operator+=(const Section& o) {
  shift += o.shift;
  lapse += o.lapse;
  return *this;
}

Section& Section::operator-=(const Section& o) {
  shift -= o.shift;
  lapse -= o.lapse;
  return *this;
}

Section& Section::operator*=(double a) {
  shift *= a;
  lapse *= a;
  return *this;
}

std::string FunctionalLabel::describe() const {
  switch (kind) {
    case Kind::nested_bracket:
      if (children.size() == 2) {
        return "{" + children[0]->describe() + ", " + children[1]->describe() + "}";
      }
      break;
    case Kind::product:
      if (children.size() == 2) return children[0]->describe() + "*" + children[1]->describe();
      break;
    default:
      break;
  }
  return text;
}

Functional::Functional(FunctionalLabel label, Evaluator eval)
    : label_(std::make_shared<const FunctionalLabel>(std::move(label))),
      eval_(std::make_shared<const Evaluator>(std::move(eval))) {}

VectorField momentum_constraint(const PhaseSpacePoint& p) {
  const MetricGeometry geo = analyze(p.gamma());
  VectorField c = raise(geo.inverse, divergence_sym(geo, p.pi()));
  c *= -2.0;
  return c;
}

namespace {

ScalarField energy_density(const PhaseSpacePoint& p, const MetricGeometry& geo) {
  const int d = p.grid().dim();
  auto [tr, tr2] = traces(geo.inverse, p.pi());
  ScalarField c = tr2;
  c -= scalar_curvature(p.gamma(), geo);
  fma_into(c, -1.0 / (d - 1), tr, tr);
  return c;
}

}  // namespace

ScalarField energy_constraint(const PhaseSpacePoint& p) {
  return energy_density(p, analyze(p.gamma()));
}

double smeared_constraint(const Section& a, const PhaseSpacePoint& p) {
  require_same_grid(a.grid(), p.grid());
  const MetricGeometry geo = analyze(p.gamma());
  const int d = p.grid().dim();
  ScalarField integrand(p.grid());
  // g(X, C_mom) = -2 X^j (div pi)_j; the index raised in C_mom is lowered again.
  if (a.shift.max_abs() != 0.0) {
    const OneFormField div = divergence_sym(geo, p.pi());
    for (int j = 0; j < d; ++j) fma_into(integrand, -2.0, a.shift[j], div[j]);
  }
  if (a.lapse.max_abs() != 0.0) fma_into(integrand, a.lapse, energy_density(p, geo));
  return integrate_density(geo.sqrt_det, integrand);
}

Functional constraint_functional(Section a, std::string name) {
  FunctionalLabel label;
  label.kind = FunctionalLabel::Kind::section;
  label.text = name.empty() ? "C(X,phi)" : "C" + name;
  auto section = std::make_shared<const Section>(std::move(a));
  return Functional(std::move(label),
                    [section](const PhaseSpacePoint& p) { return smeared_constraint(*section, p); });
}

}  // namespace adm
