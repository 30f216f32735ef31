#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lshape/newtonian.hpp"
#include "lshape/regularity.hpp"
#include "lshape/solver.hpp"

using namespace lshape;

namespace {

constexpr double kPi = std::numbers::pi;

// Newton's theorem for a radial density A (1 - s^2/R^2)^3 about c, at distance r:
// w = log(r) M(r) / (2 pi) + int_r^R A (1 - s^2/R^2)^3 s log(s) ds, M(r) the mass inside r.
double radial_oracle(double A, double R, double r) {
  const auto density = [&](double s) {
    const double t = 1.0 - s * s / (R * R);
    return A * t * t * t;
  };
  const int n = 200000;
  const auto simpson = [&](auto&& f, double a, double b) {
    if (b <= a) return 0.0;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return sum * h / 3.0;
  };
  const double inner = std::min(r, R);
  const double mass = 2 * kPi * simpson([&](double s) { return density(s) * s; }, 0.0, inner);
  const double outer = simpson([&](double s) { return density(s) * s * std::log(s); }, inner, R);
  return std::log(r) * mass / (2 * kPi) + outer;
}

}  // namespace

TEST_SUITE("newtonian") {
  TEST_CASE("kernel") {
    CHECK(newtonian_kernel({1.0, 0.0}) == 0.0);
    CHECK(newtonian_kernel({0.0, -1.0}) == 0.0);
    CHECK(newtonian_kernel({std::exp(1.0), 0.0}) == doctest::Approx(1.0 / (2 * kPi)));
  }

  TEST_CASE("zero source") {
    const auto z = zero_source();
    CHECK(newtonian_potential(z, {-1.0, -1.0}).value == 0.0);
    const MultipoleExpansion m(z);
    CHECK(m.mass() == 0.0);
    const auto f = poisson_reduce(WedgeDomain::l_shape(), z);
    CHECK(f.eval(1.0) == 0.0);
    CHECK(f.deriv2(-3.0) == 0.0);
    CHECK(f.numerical_derivatives);
  }

  TEST_CASE("Newton's theorem inside and outside the support") {
    const CartesianPoint c{-1.0, -1.0};
    const double R = 0.1, mass = 1.0;
    const auto g = radial_bump_source(c, R, mass);
    const double A = mass * 4.0 / (kPi * R * R);
    for (double r : {0.01, 0.05, 0.099, 0.1, 0.3, 2.0}) {
      const double expected = radial_oracle(A, R, r);
      for (double a : {0.0, 1.3, 4.0}) {
        const CartesianPoint x{c.x1 + r * std::cos(a), c.x2 + r * std::sin(a)};
        CHECK(newtonian_potential(g, x).value == doctest::Approx(expected).epsilon(1e-9));
      }
    }
    // At the center: int_0^R density(s) s log(s) ds.
    CHECK(newtonian_potential(g, c).value == doctest::Approx(radial_oracle(A, R, 1e-12)).epsilon(1e-6));
    // Outside the disk the potential is that of a point mass.
    CHECK(newtonian_potential(g, {1.0, -1.0}).value == doctest::Approx(mass * std::log(2.0) / (2 * kPi)).epsilon(1e-10));
  }

  TEST_CASE("finite-difference Laplacian recovers the source") {
    const auto g = radial_bump_source({-1.0, -1.0}, 0.1, 1.0);
    const double h = 0.1 / 50;
    for (CartesianPoint x : {CartesianPoint{-1.0, -1.0}, CartesianPoint{-1.03, -0.98}, CartesianPoint{-0.95, -1.04}}) {
      const double lap = newtonian_laplacian_fd(g, x, h);
      CHECK(lap == doctest::Approx(g.eval(x)).epsilon(1e-3));
    }
    CHECK(std::abs(newtonian_laplacian_fd(g, {0.0, -1.0}, h)) < 1e-6);
  }

  TEST_CASE("multipole expansion matches direct quadrature") {
    // An off-center pair of bumps is not radial, so higher moments matter.
    const auto a = radial_bump_source({-1.0, -1.0}, 0.05, 1.0);
    const auto b = radial_bump_source({-0.93, -1.02}, 0.02, -0.4);
    SourceFunction g{"pair", [&](const CartesianPoint& y) { return a.eval(y) + b.eval(y); }, {-1.0, -1.0}, 0.1};
    const MultipoleExpansion m(g);
    CHECK(m.mass() == doctest::Approx(0.6).epsilon(1e-10));
    for (CartesianPoint y : {CartesianPoint{-1.0, -0.85}, CartesianPoint{0.0, -1.0}, CartesianPoint{-1.0, 3.0},
                             CartesianPoint{5.0, 0.0}}) {
      CHECK(m(y) == doctest::Approx(newtonian_potential(g, y).value).epsilon(1e-7));
    }
    CHECK_THROWS_AS(m({-1.0, -0.95}), std::domain_error);
  }

  TEST_CASE("reduced boundary datum") {
    const auto d = WedgeDomain::l_shape();
    const auto g = radial_bump_source({-1.0, -1.0}, 0.1, 1.0);
    const auto f = poisson_reduce(d, g);
    CHECK(f.name == "poisson_reduce(radial_bump)");
    CHECK_FALSE(f.classes.w1_2);
    for (double u : {-4.0, -1.0, -0.2, 0.0, 0.5, 2.0}) {
      const auto b = boundary_pullback(d, u);
      CHECK(f.eval(u) == doctest::Approx(newtonian_potential(g, b).value).epsilon(1e-9));
    }
    // A radial source sees the boundary points at distance sqrt(2) symmetrically.
    CHECK(f.eval(1.0) == doctest::Approx(f.eval(-1.0)).epsilon(1e-12));
    // Derivative of mass log|b - c| / (2 pi) along the x arm, b = (u^{3/2}, 0).
    for (double u : {0.5, 1.0, 2.0}) {
      const double t = std::pow(u, 1.5);
      const double dt = 1.5 * std::sqrt(u);
      const double exact = ((t + 1.0) / ((t + 1.0) * (t + 1.0) + 1.0)) * dt / (2 * kPi);
      CHECK(f.deriv1(u) == doctest::Approx(exact).epsilon(1e-6));
    }
    const auto sol = solve_quadrature(d, f, {1.0, 1.25 * kPi});
    CHECK(std::isfinite(sol.value));
  }

  TEST_CASE("the reduced datum can be scanned") {
    const auto d = WedgeDomain::l_shape();
    const auto f = poisson_reduce(d, radial_bump_source({-1.0, -1.0}, 0.1, 1.0));
    const auto r = scan_sigma(d, f, {0.5, 0.9}, {1e-2, 1e-3, 1e-4});
    CHECK(r.numerical_derivatives);
    CHECK(r.quadrature_converged);
    CHECK(r.results[0].diagnosis.verdict == Verdict::finite);
    CHECK(r.results[1].diagnosis.verdict == Verdict::divergent);
  }

  TEST_CASE("rejections") {
    const auto d = WedgeDomain::l_shape();
    CHECK_THROWS_AS(radial_bump_source({-1.0, -1.0}, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(poisson_reduce(d, radial_bump_source({1.0, 1.0}, 0.1, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(poisson_reduce(d, radial_bump_source({-0.1, 1.0}, 0.1, 1.0)), std::invalid_argument);
    SourceFunction unbounded{"bad", [](const CartesianPoint&) { return 1.0; }, {-1.0, -1.0},
                             std::numeric_limits<double>::infinity()};
    CHECK_THROWS_AS(newtonian_potential(unbounded, {0.0, -1.0}), std::invalid_argument);
  }
}
