#include <doctest.h>

#include <cmath>
#include <numbers>

#include "adm/geometry.hpp"
#include "adm/random_fields.hpp"
#include "support.hpp"

using namespace adm;
using adm::test::max_error;
using adm::test::sampled;

namespace {
constexpr double kPi = std::numbers::pi;

MetricField conformal(const TorusGrid& g, double a) {
  return MetricField(test::diag2(g, [a](double x, double, double) { return std::exp(2 * a * std::sin(x)); },
                                 [a](double x, double, double) { return std::exp(2 * a * std::sin(x)); }));
}

MetricField constant_diag(const TorusGrid& g, double a, double b) {
  return MetricField(test::diag2(g, [a](double, double, double) { return a; }, [b](double, double, double) { return b; }));
}
}  // namespace

TEST_SUITE("grid_geometry") {

TEST_CASE("grid construction and quadrature") {
  CHECK_THROWS_AS(TorusGrid(1, 16), InvalidArgument);
  CHECK_THROWS_AS(TorusGrid(4, 16), InvalidArgument);
  CHECK_THROWS_AS(TorusGrid(2, 15), InvalidArgument);
  CHECK_THROWS_AS(TorusGrid(2, 6), InvalidArgument);
  for (int d : {2, 3}) {
    const TorusGrid g(d, 10);
    CHECK(g.size() == static_cast<std::size_t>(std::pow(10, d)));
    CHECK(g.spacing() == doctest::Approx(2 * kPi / 10));
    CHECK(integrate(ScalarField::constant(g, 1.0)) == doctest::Approx(std::pow(2 * kPi, d)).epsilon(1e-14));
    for (std::size_t p = 0; p < g.size(); p += 37) CHECK(g.index(g.unravel(p)) == p);
  }
  CHECK(sym_index(2, 0, 1) == 1);
  CHECK(sym_index(2, 1, 0) == 1);
  CHECK(sym_index(3, 1, 2) == 4);
  CHECK(sym_index(3, 2, 2) == 5);
}

TEST_CASE("differentiation matrix is skew and kills constants") {
  const TorusGrid g(2, 16);
  const auto d = g.diff_matrix();
  const int n = g.n();
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      CHECK(d[i * n + j] == doctest::Approx(-d[j * n + i]));
      row += d[i * n + j];
    }
    CHECK(std::abs(row) <= 1e-13);
  }
}

TEST_CASE("spectral derivative oracles") {
  const TorusGrid g(2, 16);
  CHECK(max_error(spectral_derivative(sampled(g, [](double x, double, double) { return std::sin(x); }), 0),
                  [](double x, double, double) { return std::cos(x); }) <= 1e-13);
  CHECK(spectral_derivative(ScalarField::constant(g, 3.0), 1).max_abs() <= 1e-13);
  const ScalarField f = sampled(g, [](double x, double y, double) { return std::sin(3 * x) * std::cos(2 * y); });
  CHECK(max_error(spectral_derivative(f, 1),
                  [](double x, double y, double) { return -2 * std::sin(3 * x) * std::sin(2 * y); }) < 1e-12);
  CHECK_THROWS_AS(spectral_derivative(f, 2), InvalidArgument);
}

TEST_CASE("mixed partials commute") {
  for (int d : {2, 3}) {
    const TorusGrid g(d, 12);
    const ScalarField f = random_scalar(g, 3, 5, 1.0);
    for (int a = 0; a < d; ++a) {
      for (int b = a + 1; b < d; ++b) {
        const ScalarField ab = spectral_derivative(spectral_derivative(f, a), b);
        const ScalarField ba = spectral_derivative(spectral_derivative(f, b), a);
        CHECK((ab - ba).max_abs() <= 1e-12);
      }
    }
  }
}

TEST_CASE("metric inverse oracles") {
  const TorusGrid g(2, 16);
  CHECK((metric_inverse(MetricField::flat(g)) - SymTensorField::identity(g, Variance::contravariant)).max_abs() == 0.0);
  const SymTensorField inv = metric_inverse(constant_diag(g, 4.0, 1.0));
  CHECK(inv.variance() == Variance::contravariant);
  CHECK(inv(0, 0).max_abs() == doctest::Approx(0.25));
  CHECK(inv(0, 1).max_abs() == 0.0);
  const MetricField c = conformal(g, 0.1);
  const SymTensorField ci = metric_inverse(c);
  CHECK(max_error(ci(0, 0), [](double x, double, double) { return std::exp(-0.2 * std::sin(x)); }) < 1e-13);
  CHECK(max_error(c(0, 0) * ci(0, 0), [](double, double, double) { return 1.0; }) < 1e-13);

  SymTensorField bad = SymTensorField::identity(g, Variance::covariant);
  bad(0, 1) = ScalarField::constant(g, 1.0);
  CHECK_THROWS_AS(MetricField{bad}, DegenerateMetric);
  CHECK_THROWS_AS(MetricField(SymTensorField::identity(g, Variance::contravariant)), InvalidArgument);
}

TEST_CASE("random metric inverse in 3d") {
  const TorusGrid g(3, 8);
  const MetricField m = random_metric(g, 4, 2, 0.1);
  const SymTensorField inv = metric_inverse(m);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      ScalarField s(g);
      for (int k = 0; k < 3; ++k) s += m(i, k) * inv(k, j);
      CHECK(max_error(s, [i, j](double, double, double) { return i == j ? 1.0 : 0.0; }) < 1e-13);
    }
  }
}

TEST_CASE("christoffel oracles") {
  const TorusGrid g(2, 16);
  const ChristoffelField flat = christoffel(constant_diag(g, 2.0, 3.0));
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(flat(k, i, j).max_abs() <= 1e-14);

  const double a = 0.1;
  const ChristoffelField c = christoffel(conformal(g, a));
  CHECK(max_error(c(0, 0, 0), [a](double x, double, double) { return a * std::cos(x); }) < 1e-12);

  const MetricField m(test::diag2(g, [](double, double y, double) { return 1 + 0.1 * std::sin(y); },
                                  [](double, double, double) { return 1.0; }));
  const ChristoffelField cm = christoffel(m);
  CHECK(max_error(cm(0, 0, 1), [](double, double y, double) { return 0.05 * std::cos(y) / (1 + 0.1 * std::sin(y)); }) <
        1e-8);
  CHECK(test::bit_equal(cm(0, 0, 1), cm(0, 1, 0)));
}

TEST_CASE("scalar curvature oracles") {
  const TorusGrid g(2, 24);
  CHECK(scalar_curvature(MetricField::flat(g)).max_abs() <= 1e-12);
  CHECK(scalar_curvature(constant_diag(g, 2.5, 2.5)).max_abs() <= 1e-12);
  for (double a : {0.05, 0.1, 0.2}) {
    CAPTURE(a);
    const ScalarField r = scalar_curvature(conformal(g, a));
    const double err = max_error(r, [a](double x, double, double) {
      return 2 * a * std::sin(x) * std::exp(-2 * a * std::sin(x));
    });
    CHECK(err / (2 * a) <= 1e-8);
  }
  const TorusGrid g3(3, 8);
  CHECK(scalar_curvature(MetricField::flat(g3)).max_abs() <= 1e-12);
}

TEST_CASE("gradient, divergence and brackets") {
  const TorusGrid g(2, 16);
  const ScalarField s = sampled(g, [](double x, double, double) { return std::sin(x); });
  CHECK(grad_spatial(MetricField::flat(g), ScalarField::constant(g, 2.0)).max_abs() <= 1e-13);
  const VectorField gs = grad_spatial(constant_diag(g, 4.0, 1.0), s);
  CHECK(max_error(gs[0], [](double x, double, double) { return std::cos(x) / 4; }) < 1e-13);
  CHECK(gs[1].max_abs() <= 1e-14);

  SymTensorField pi(g, Variance::covariant);
  pi(0, 0) = s;
  const OneFormField div = divergence_sym(MetricField::flat(g), pi);
  CHECK(max_error(div[0], [](double x, double, double) { return std::cos(x); }) < 1e-13);
  CHECK(div[1].max_abs() <= 1e-14);
  CHECK(divergence_sym(MetricField::flat(g), 3.0 * SymTensorField::identity(g, Variance::covariant)).max_abs() <= 1e-13);

  const VectorField ex = test::vector_of(g, [](double, double, double) { return 1.0; }, [](double, double, double) { return 0.0; });
  const VectorField ey = test::vector_of(g, [](double, double, double) { return 0.0; }, [](double, double, double) { return 1.0; });
  CHECK(lie_bracket(ex, ey).max_abs() <= 1e-14);
  const VectorField sy = test::vector_of(g, [](double, double, double) { return 0.0; },
                                         [](double x, double, double) { return std::sin(x); });
  const VectorField b = lie_bracket(ex, sy);
  CHECK(max_error(b[1], [](double x, double, double) { return std::cos(x); }) < 1e-13);
  const VectorField r = random_vector(g, 8, 2, 1.0);
  CHECK(lie_bracket(r, r).max_abs() <= 1e-13);
}

TEST_CASE("flat divergence is the component-wise divergence") {
  const TorusGrid g(3, 8);
  const SymTensorField pi = random_sym2(g, 21, 2, 1.0);
  const OneFormField div = divergence_sym(MetricField::flat(g), pi);
  for (int j = 0; j < 3; ++j) {
    ScalarField e(g);
    for (int i = 0; i < 3; ++i) e += spectral_derivative(pi(i, j), i);
    CHECK((div[j] - e).max_abs() <= 1e-12);
  }
}

TEST_CASE("jacobi identity for vector fields") {
  const TorusGrid g(2, 16);
  const VectorField x = random_vector(g, 1, 2, 1.0), y = random_vector(g, 2, 2, 1.0), z = random_vector(g, 3, 2, 1.0);
  const VectorField j = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) + lie_bracket(z, lie_bracket(x, y));
  CHECK(j.max_abs() <= 1e-8);
}

TEST_CASE("lie derivative of symmetric tensors") {
  const TorusGrid g(2, 16);
  const VectorField ex = test::vector_of(g, [](double, double, double) { return 1.0; }, [](double, double, double) { return 0.0; });
  const VectorField sx = test::vector_of(g, [](double x, double, double) { return std::sin(x); },
                                         [](double, double, double) { return 0.0; });
  CHECK(lie_derivative_sym2(ex, SymTensorField::identity(g, Variance::covariant)).max_abs() <= 1e-13);
  CHECK(lie_derivative_sym2(ex, random_metric(g, 2, 0, 0.3).tensor()).max_abs() <= 1e-13);

  const SymTensorField lc = lie_derivative_sym2(sx, SymTensorField::identity(g, Variance::covariant));
  CHECK(lc.variance() == Variance::covariant);
  CHECK(max_error(lc(0, 0), [](double x, double, double) { return 2 * std::cos(x); }) < 1e-13);
  CHECK(lc(0, 1).max_abs() <= 1e-14);
  CHECK(lc(1, 1).max_abs() <= 1e-14);

  const SymTensorField lu = lie_derivative_sym2(sx, SymTensorField::identity(g, Variance::contravariant));
  CHECK(lu.variance() == Variance::contravariant);
  CHECK(max_error(lu(0, 0), [](double x, double, double) { return -2 * std::cos(x); }) < 1e-13);
}

TEST_CASE("traces and integrals") {
  const TorusGrid g(2, 16);
  const double p = 0.7;
  auto [t1, t2] = traces(MetricField::flat(g), p * SymTensorField::identity(g, Variance::covariant));
  CHECK(max_error(t1, [p](double, double, double) { return 2 * p; }) < 1e-15);
  CHECK(max_error(t2, [p](double, double, double) { return 2 * p * p; }) < 1e-15);
  SymTensorField d(g, Variance::covariant);
  d(0, 0) = ScalarField::constant(g, p);
  d(1, 1) = ScalarField::constant(g, -p);
  auto [s1, s2] = traces(MetricField::flat(g), d);
  CHECK(s1.max_abs() == 0.0);
  CHECK(max_error(s2, [p](double, double, double) { return 2 * p * p; }) < 1e-15);
  auto [z1, z2] = traces(MetricField::flat(g), SymTensorField(g, Variance::covariant));
  CHECK(z1.max_abs() == 0.0);
  CHECK(z2.max_abs() == 0.0);

  const double vol = 4 * kPi * kPi;
  CHECK(integrate_density(MetricField::flat(g), ScalarField::constant(g, 1.0)) == doctest::Approx(vol).epsilon(1e-14));
  CHECK(std::abs(integrate_density(MetricField::flat(g), sampled(g, [](double x, double, double) { return std::sin(x); }))) <
        1e-13);
  CHECK(integrate_density(constant_diag(g, 9.0, 9.0), ScalarField::constant(g, 1.0)) ==
        doctest::Approx(9.0 * vol).epsilon(1e-14));
}

TEST_CASE("integration by parts on the torus") {
  const TorusGrid g(2, 16);
  const VectorField x = random_vector(g, 5, 2, 1.0);
  const ScalarField f = random_scalar(g, 6, 2, 1.0);
  ScalarField div(g);
  for (int i = 0; i < 2; ++i) div += spectral_derivative(x[i], i);
  const double lhs = integrate(directional_derivative(x, f));
  const double rhs = -integrate(f * div);
  CHECK(std::abs(lhs - rhs) <= 1e-12);
}

TEST_CASE("grid mismatch is rejected") {
  const TorusGrid a(2, 16), b(2, 8);
  CHECK_THROWS_AS(ScalarField(a) + ScalarField(b), GridMismatch);
  CHECK_THROWS_AS(lie_bracket(VectorField(a), VectorField(b)), GridMismatch);
}

}
