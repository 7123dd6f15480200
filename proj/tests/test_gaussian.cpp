#include <doctest.h>

#include <cmath>
#include <vector>

#include "adm/gaussian.hpp"
#include "adm/geometry.hpp"
#include "adm/random_fields.hpp"
#include "adm/suite.hpp"
#include "support.hpp"

using namespace adm;
using adm::test::max_error;
using adm::test::sampled;

namespace {

SymTensorField id(const TorusGrid& g) { return SymTensorField::identity(g, Variance::covariant); }
SymTensorField zero(const TorusGrid& g) { return SymTensorField(g, Variance::covariant); }

std::vector<double> samples(double dt) {
  std::vector<double> t;
  for (int j = -4; j <= 4; ++j) t.push_back(j * dt);
  return t;
}

}  // namespace

TEST_SUITE("gaussian") {

TEST_CASE("metric path construction") {
  const TorusGrid g(2, 16);
  const MetricPath p({id(g), id(g)}, 0.5);
  CHECK(p.degree() == 1);
  CHECK(p.window() == 0.5);
  CHECK((p.tensor_at(0.25) - 1.25 * id(g)).max_abs() <= 1e-15);
  CHECK_THROWS_AS(p.metric_at(0.6), OutsideWindow);

  // (1 + 4t) delta degenerates at t = -1/4, so the window shrinks below it.
  const MetricPath shrunk({id(g), 4.0 * id(g)}, 1.0);
  CHECK(shrunk.window() < 0.25);
  CHECK(shrunk.window() > 0.1);
  CHECK_NOTHROW(shrunk.metric_at(-shrunk.window()));

  CHECK_THROWS_AS(MetricPath({zero(g)}, 0.5), DegenerateMetric);
  CHECK_THROWS_AS(MetricPath({}, 0.5), InvalidArgument);
}

TEST_CASE("path derivatives") {
  const TorusGrid g(2, 16);
  const MetricPath stat = MetricPath::constant(MetricField::flat(g), 0.5);
  CHECK(path_derivative(stat, 0.3, 1).max_abs() == 0.0);
  const MetricPath lin({id(g), id(g)}, 0.5);
  CHECK((path_derivative(lin, 0.2, 1) - id(g)).max_abs() == 0.0);
  const SymTensorField b = random_sym2(g, 3, 2, 0.1);
  const MetricPath quad({id(g), zero(g), b}, 0.5);
  CHECK((path_derivative(quad, 0.0, 2) - 2.0 * b).max_abs() == 0.0);
  CHECK(path_derivative(quad, 0.1, 3).max_abs() == 0.0);
  CHECK_THROWS_AS(path_derivative(quad, 0.0, 0), InvalidArgument);
  CHECK_THROWS_AS(path_derivative(quad, 0.9, 1), OutsideWindow);
}

TEST_CASE("second fundamental form") {
  const TorusGrid g(2, 16);
  CHECK(second_fundamental_form(MetricPath::constant(MetricField::flat(g), 0.5), 0.0).max_abs() == 0.0);
  CHECK((second_fundamental_form(MetricPath({id(g), id(g)}, 0.5), 0.0) + 0.5 * id(g)).max_abs() == 0.0);
  const SymTensorField a = random_sym2(g, 4, 2, 0.2), c = random_sym2(g, 5, 2, 0.2);
  CHECK((second_fundamental_form(MetricPath({id(g), a}, 0.5), 0.1) + 0.5 * a).max_abs() <= 1e-15);
  const MetricPath p1({id(g), a}, 0.5), p2({id(g), c, a}, 0.5);
  const SymTensorField lhs = second_fundamental_form(p1 + p2, 0.1);
  const SymTensorField rhs = second_fundamental_form(p1, 0.1) + second_fundamental_form(p2, 0.1);
  CHECK((lhs - rhs).max_abs() <= 1e-15);
}

TEST_CASE("gaussian extension closed forms") {
  const TorusGrid g(2, 16);
  const MetricPath flat = MetricPath::constant(MetricField::flat(g), 0.5);
  const VectorField x0 = random_vector(g, 6, 2, 1.0);
  const auto ts = samples(0.05);

  const SpacetimeVectorField c = gaussian_extend(flat, Section(x0, ScalarField::constant(g, 2.0)), ts);
  for (const auto& x : c.shift) CHECK((x - x0).max_abs() <= 1e-13);

  const ScalarField s = sampled(g, [](double x, double, double) { return std::sin(x); });
  const SpacetimeVectorField v = gaussian_extend(flat, Section::of_lapse(s), ts);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    CHECK(max_error(v.shift[i][0], [t](double x, double, double) { return t * std::cos(x); }) < 1e-14);
    CHECK(v.shift[i][1].max_abs() <= 1e-15);
  }
  CHECK(v.zero_index() == 4);
}

TEST_CASE("lapse is copied bit for bit") {
  const TorusGrid g(2, 16);
  const MetricPath path = fixtures::metric_path(g, 3, 2, 0.05);
  const Section a(random_vector(g, 7, 2, 1.0), random_scalar(g, 8, 2, 1.0));
  const SpacetimeVectorField v = gaussian_extend(path, a, samples(0.03));
  for (const auto& phi : v.lapse) CHECK(test::bit_equal(phi, a.lapse));
}

TEST_CASE("extension input validation") {
  const TorusGrid g(2, 16);
  const MetricPath path = MetricPath::constant(MetricField::flat(g), 0.5);
  const Section a = Section::zero(g);
  const std::vector<double> no_zero{-0.1, 0.1}, unsorted{0.0, -0.1}, outside{0.0, 0.7};
  CHECK_THROWS_AS(gaussian_extend(path, a, no_zero), InvalidArgument);
  CHECK_THROWS_AS(gaussian_extend(path, a, unsorted), InvalidArgument);
  CHECK_THROWS_AS(gaussian_extend(path, a, outside), OutsideWindow);
  const std::vector<double> three{-0.1, 0.0, 0.1};
  CHECK_THROWS_AS(gaussianity_residual(path, gaussian_extend(path, a, three)), InvalidArgument);
}

TEST_CASE("first order defect") {
  const TorusGrid g(2, 16);
  const MetricPath flat = MetricPath::constant(MetricField::flat(g), 0.5);
  const ScalarField s = sampled(g, [](double x, double, double) { return std::sin(x); });
  for (double t : {0.1, 0.05}) CHECK(first_order_defect(flat, Section::of_lapse(s), t) <= 1e-14);

  const MetricPath lin({id(g), random_sym2(g, 9, 2, 0.2)}, 0.5);
  CHECK(first_order_defect(lin, Section(random_vector(g, 10, 2, 1.0), ScalarField(g)), 0.1) <= 1e-15);
  double prev = first_order_defect(lin, Section::of_lapse(s), 0.1);
  for (double t : {0.05, 0.025, 0.0125}) {
    const double d = first_order_defect(lin, Section::of_lapse(s), t);
    CAPTURE(t);
    CHECK(prev / d == doctest::Approx(4.0).epsilon(0.06));
    prev = d;
  }
}

TEST_CASE("gaussianity residual") {
  const TorusGrid g(2, 16);
  const MetricPath path = fixtures::metric_path(g, 4, 2, 0.05);
  const Section a(random_vector(g, 11, 2, 1.0), random_scalar(g, 12, 2, 1.0));
  const double r1 = gaussianity_residual(path, gaussian_extend(path, a, samples(0.025))).max();
  const double r2 = gaussianity_residual(path, gaussian_extend(path, a, samples(0.0125))).max();
  CHECK(r1 <= 1e-6);
  CHECK(r2 * 8 <= r1);

  const MetricPath flat = MetricPath::constant(MetricField::flat(g), 0.5);
  const auto ts = samples(0.05);
  const VectorField x0 = random_vector(g, 13, 2, 1.0);
  SpacetimeVectorField still(ts, std::vector<VectorField>(ts.size(), x0), std::vector<ScalarField>(ts.size(), ScalarField(g)));
  CHECK(gaussianity_residual(flat, still).max() <= 1e-12);

  std::vector<ScalarField> growing;
  for (double t : ts) growing.push_back(ScalarField::constant(g, t));
  SpacetimeVectorField bad(ts, std::vector<VectorField>(ts.size(), VectorField(g)), growing);
  const GaussianityResidual r = gaussianity_residual(flat, bad);
  CHECK(r.lapse == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.shift <= 1e-13);
}

TEST_CASE("spacetime lie derivative") {
  const TorusGrid g(2, 16);
  const MetricPath flat = MetricPath::constant(MetricField::flat(g), 0.5);
  const auto ts = samples(0.05);
  const VectorField ex = test::vector_of(g, [](double, double, double) { return 1.0; }, [](double, double, double) { return 0.0; });
  const SpacetimeSymmetric k = spacetime_lie_derivative(flat, gaussian_extend(flat, Section::of_shift(ex), ts), 0.0);
  CHECK(k.spatial.max_abs() <= 1e-13);
  CHECK(k.mixed.max_abs() <= 1e-13);
  CHECK(k.tt.max_abs() <= 1e-13);

  const MetricPath lin({id(g), id(g)}, 0.5);
  const SpacetimeSymmetric u =
      spacetime_lie_derivative(lin, gaussian_extend(lin, Section::of_lapse(ScalarField::constant(g, 1.0)), ts), 0.0);
  CHECK((u.spatial - id(g)).max_abs() <= 1e-13);
  CHECK(u.mixed.max_abs() <= 1e-13);
  CHECK(u.tt.max_abs() <= 1e-13);

  const ScalarField s = sampled(g, [](double x, double, double) { return std::sin(x); });
  const SpacetimeVectorField v = gaussian_extend(flat, Section::of_lapse(s), ts);
  const SpacetimeSymmetric w = spacetime_lie_derivative(flat, v, 0.0);
  CHECK((w.spatial - lie_derivative_sym2(v.shift[v.zero_index()], id(g))).max_abs() <= 1e-12);
  CHECK(w.mixed.max_abs() <= 1e-8);
  CHECK(w.tt.max_abs() <= 1e-12);
}

TEST_CASE("lie derivative of gaussian fields has no normal components") {
  const TorusGrid g(2, 16);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const MetricPath path = fixtures::metric_path(g, seed, 2, 0.05);
    const Section a = fixtures::section(g, derive_seed(seed, 31), 2, fixtures::SectionType::full);
    const SpacetimeVectorField v = gaussian_extend(path, a, samples(0.025));
    const SpacetimeSymmetric l = spacetime_lie_derivative(path, v, 0.0);
    const SymTensorField expected =
        lie_derivative_sym2(v.shift[v.zero_index()], path.tensor_at(0.0)) + a.lapse * path_derivative(path, 0.0, 1);
    const double norm = l.spatial.max_abs();
    CAPTURE(seed);
    CHECK(std::max(l.mixed.max_abs(), l.tt.max_abs()) <= 1e-6 * norm);
    CHECK((l.spatial - expected).max_abs() <= 1e-9 * norm);
  }
}

TEST_CASE("non-gaussianity of brackets") {
  const TorusGrid g(2, 16);
  const MetricPath flat = MetricPath::constant(MetricField::flat(g), 0.5);
  const NonGaussianity none =
      nongaussian_bracket_residual(flat, Section::of_lapse(random_scalar(g, 1, 2, 1.0)), Section::of_lapse(random_scalar(g, 2, 2, 1.0)));
  CHECK(none.witness <= 1e-8);
  CHECK(none.identity_residual <= 1e-8);

  int strong = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const MetricPath path = fixtures::metric_path(g, seed, 2, 0.05);
    const Section a = fixtures::section(g, derive_seed(seed, 31), 2, fixtures::SectionType::full);
    const Section b = fixtures::section(g, derive_seed(seed, 32), 2, fixtures::SectionType::full);
    const NonGaussianity ng = nongaussian_bracket_residual(path, a, b);
    CAPTURE(seed);
    CHECK(ng.identity_residual <= 1e-6);
    const NonGaussianity lapses = nongaussian_bracket_residual(path, Section::of_lapse(a.lapse), Section::of_lapse(b.lapse));
    CHECK(lapses.identity_residual <= 1e-6);
    strong += lapses.witness > 1e-2;
  }
  CHECK(strong >= 18);
}

TEST_CASE("lapse-only witness matches the second fundamental form term") {
  const TorusGrid g(2, 16);
  const SymTensorField a = random_sym2(g, 14, 2, 0.2);
  const MetricPath path({id(g), a}, 0.5);
  const ScalarField phi = random_scalar(g, 15, 2, 1.0), psi = random_scalar(g, 16, 2, 1.0);
  const NonGaussianity ng = nongaussian_bracket_residual(path, Section::of_lapse(phi), Section::of_lapse(psi));
  // 2 K(phi grad psi - psi grad phi, .) with K = -a/2 and grad taken in delta.
  const VectorField u = lapse_pair_shift(MetricField::flat(g), phi, psi);
  const OneFormField expected = contract_first(-1.0 * a, u);
  CHECK(ng.witness == doctest::Approx(expected.max_abs()).epsilon(1e-6));
}

TEST_CASE("finite difference weights") {
  const std::vector<double> nodes{-2, -1, 0, 1, 2};
  const auto w1 = fd_weights(0.0, nodes, 1);
  const double e1[] = {1.0 / 12, -2.0 / 3, 0, 2.0 / 3, -1.0 / 12};
  for (int i = 0; i < 5; ++i) CHECK(w1[i] == doctest::Approx(e1[i]).epsilon(1e-14));
  const auto w2 = fd_weights(0.0, nodes, 2);
  const double e2[] = {-1.0 / 12, 4.0 / 3, -2.5, 4.0 / 3, -1.0 / 12};
  for (int i = 0; i < 5; ++i) CHECK(w2[i] == doctest::Approx(e2[i]).epsilon(1e-14));
  const auto w0 = fd_weights(0.3, nodes, 0);
  double s = 0;
  for (double x : w0) s += x;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("metric path json round trip") {
  const TorusGrid g(2, 8);
  const MetricPath p = fixtures::metric_path(g, 5, 2, 0.05);
  const MetricPath q = metric_path_from_json(to_json(p));
  CHECK(q.window() == p.window());
  CHECK(q.degree() == p.degree());
  for (int k = 0; k <= p.degree(); ++k) CHECK((p.coefficients()[k] - q.coefficients()[k]).max_abs() == 0.0);
  auto j = to_json(p);
  CHECK(j["window"][0] == -p.window());
  j["window"] = {0.1, 0.2};
  CHECK_THROWS_AS(metric_path_from_json(j), InvalidArgument);
}

}
