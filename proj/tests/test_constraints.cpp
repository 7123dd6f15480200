#include <doctest.h>

#include <cmath>
#include <numbers>

#include "adm/constraints.hpp"
#include "adm/geometry.hpp"
#include "adm/random_fields.hpp"
#include "support.hpp"

using namespace adm;
using adm::test::max_error;
using adm::test::sampled;

namespace {
constexpr double kPi = std::numbers::pi;

PhaseSpacePoint random_point(const TorusGrid& g, std::uint64_t seed, double eps = 0.05) {
  return PhaseSpacePoint(random_metric(g, derive_seed(seed, 1), 2, eps), random_sym2(g, derive_seed(seed, 2), 2, eps));
}

Section random_section(const TorusGrid& g, std::uint64_t seed) {
  return Section(random_vector(g, derive_seed(seed, 3), 2, 1.0), random_scalar(g, derive_seed(seed, 4), 2, 1.0));
}
}  // namespace

TEST_SUITE("constraints") {

TEST_CASE("momentum constraint oracles") {
  const TorusGrid g(2, 16);
  const MetricField flat = MetricField::flat(g);
  CHECK(momentum_constraint(PhaseSpacePoint(flat, SymTensorField(g, Variance::covariant))).max_abs() == 0.0);
  SymTensorField pi(g, Variance::covariant);
  pi(0, 0) = sampled(g, [](double x, double, double) { return std::sin(x); });
  const VectorField c = momentum_constraint(PhaseSpacePoint(flat, pi));
  CHECK(max_error(c[0], [](double x, double, double) { return -2 * std::cos(x); }) < 1e-13);
  CHECK(c[1].max_abs() <= 1e-14);
  CHECK(momentum_constraint(PhaseSpacePoint(flat, 0.4 * SymTensorField::identity(g, Variance::covariant))).max_abs() <= 1e-13);
}

TEST_CASE("energy constraint oracles") {
  const TorusGrid g(2, 24);
  CHECK(energy_constraint(PhaseSpacePoint::flat(g)).max_abs() <= 1e-12);
  const double p = 0.3;
  const ScalarField e = energy_constraint(
      PhaseSpacePoint(MetricField::flat(g), p * SymTensorField::identity(g, Variance::covariant)));
  CHECK(max_error(e, [p](double, double, double) { return -2 * p * p; }) < 1e-12);

  const double a = 0.1;
  const MetricField conf(test::diag2(g, [a](double x, double, double) { return std::exp(2 * a * std::sin(x)); },
                                     [a](double x, double, double) { return std::exp(2 * a * std::sin(x)); }));
  const ScalarField ec = energy_constraint(PhaseSpacePoint(conf, SymTensorField(g, Variance::covariant)));
  CHECK(max_error(ec, [a](double x, double, double) { return -2 * a * std::sin(x) * std::exp(-2 * a * std::sin(x)); }) <
        2 * a * 1e-8);
}

TEST_CASE("trace-squared coefficient is exactly -1 in two dimensions") {
  const TorusGrid g(2, 8);
  // pi = diag(p, 0) gives Tr pi = p and Tr pi^2 = p^2, so C_en = p^2 - c p^2
  // with c the coefficient under test.
  SymTensorField pi(g, Variance::covariant);
  pi(0, 0) = ScalarField::constant(g, 1.0);
  CHECK(energy_constraint(PhaseSpacePoint(MetricField::flat(g), pi)).max_abs() <= 1e-13);
  const TorusGrid g3(3, 8);
  SymTensorField pi3(g3, Variance::covariant);
  pi3(0, 0) = ScalarField::constant(g3, 1.0);
  CHECK(max_error(energy_constraint(PhaseSpacePoint(MetricField::flat(g3), pi3)),
                  [](double, double, double) { return 0.5; }) < 1e-13);
}

TEST_CASE("smeared constraint oracles") {
  const TorusGrid g(2, 16);
  const Section a = random_section(g, 1);
  CHECK(std::abs(smeared_constraint(a, PhaseSpacePoint::flat(g))) <= 1e-12);
  const PhaseSpacePoint p = random_point(g, 2);
  CHECK(smeared_constraint(Section::zero(g), p) == 0.0);
  const double q = 0.3;
  const PhaseSpacePoint pp(MetricField::flat(g), q * SymTensorField::identity(g, Variance::covariant));
  CHECK(smeared_constraint(Section::of_lapse(ScalarField::constant(g, 1.0)), pp) ==
        doctest::Approx(-2 * q * q * 4 * kPi * kPi).epsilon(1e-13));
}

TEST_CASE("smeared constraint is linear in the section") {
  const TorusGrid g(2, 16);
  const PhaseSpacePoint p = random_point(g, 3);
  const Section a = random_section(g, 4), b = random_section(g, 5);
  const double al = 0.7, be = -1.3;
  const double lhs = smeared_constraint(al * a + be * b, p);
  const double rhs = al * smeared_constraint(a, p) + be * smeared_constraint(b, p);
  CHECK(std::abs(lhs - rhs) <= 1e-13 * (1 + std::abs(lhs)));
  const double split = smeared_constraint(Section::of_shift(a.shift), p) + smeared_constraint(Section::of_lapse(a.lapse), p);
  CHECK(std::abs(smeared_constraint(a, p) - split) <= 1e-14);
}

TEST_CASE("smeared constraint pairs the momentum constraint through the metric") {
  const TorusGrid g(2, 16);
  const PhaseSpacePoint p = random_point(g, 6);
  const VectorField x = random_vector(g, 7, 2, 1.0);
  const OneFormField xl = lower(p.gamma(), x);
  const VectorField cm = momentum_constraint(p);
  ScalarField pair(g);
  for (int i = 0; i < 2; ++i) pair += xl[i] * cm[i];
  CHECK(smeared_constraint(Section::of_shift(x), p) == doctest::Approx(integrate_density(p.gamma(), pair)).epsilon(1e-12));
}

TEST_CASE("grid shifts leave the smeared constraint invariant") {
  const TorusGrid g(2, 16);
  const PhaseSpacePoint p = random_point(g, 8);
  const Section a = random_section(g, 9);
  auto shift = [&](const ScalarField& f) {
    ScalarField out(g);
    for (std::size_t q = 0; q < g.size(); ++q) {
      auto idx = g.unravel(q);
      idx[0] = (idx[0] + 3) % g.n();
      out[q] = f[g.index(idx)];
    }
    return out;
  };
  SymTensorField gs(g, Variance::covariant), ps(g, Variance::covariant);
  for (std::size_t c = 0; c < 3; ++c) {
    gs.components()[c] = shift(p.gamma().tensor().components()[c]);
    ps.components()[c] = shift(p.pi().components()[c]);
  }
  VectorField xs(g);
  for (int i = 0; i < 2; ++i) xs[i] = shift(a.shift[i]);
  const double base = smeared_constraint(a, p);
  const double moved = smeared_constraint(Section(xs, shift(a.lapse)), PhaseSpacePoint(MetricField(gs), ps));
  CHECK(moved == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("constraint functionals") {
  const TorusGrid g(2, 16);
  const Section a = random_section(g, 10);
  const Functional c = constraint_functional(a, "_a");
  CHECK(std::abs(c(PhaseSpacePoint::flat(g))) <= 1e-12);
  CHECK(c.label().kind == FunctionalLabel::Kind::section);
  CHECK(c.label().describe().find("C_a") != std::string::npos);
  const Functional cx = constraint_functional(Section::of_shift(a.shift));
  const Functional cp = constraint_functional(Section::of_lapse(a.lapse));
  for (std::uint64_t s = 20; s < 25; ++s) {
    const PhaseSpacePoint p = random_point(g, s);
    CHECK(c(p) == smeared_constraint(a, p));
    CHECK(std::abs(c(p) - (cx(p) + cp(p))) <= 1e-14);
  }
}

TEST_CASE("phase space points validate their inputs") {
  const TorusGrid g(2, 16), h(2, 8);
  CHECK_THROWS_AS(PhaseSpacePoint(MetricField::flat(g), SymTensorField(g, Variance::contravariant)), InvalidArgument);
  CHECK_THROWS_AS(PhaseSpacePoint(MetricField::flat(g), SymTensorField(h, Variance::covariant)), GridMismatch);
  CHECK_THROWS_AS(smeared_constraint(Section::zero(h), PhaseSpacePoint::flat(g)), GridMismatch);
}

}
