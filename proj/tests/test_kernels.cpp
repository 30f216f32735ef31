#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "lshape/kernels.hpp"
#include "lshape/quadrature.hpp"
#include "lshape/stats.hpp"

using namespace lshape;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> exit_us(const WedgeDomain& d, const PolarPoint& x, std::size_t n, std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<double> us(n);
  for (auto& u : us) u = exit_sample(rng, d, x).u;
  return us;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("poisson kernel values and normalization") {
    CHECK(poisson_kernel({0.0, -1.0}, 0.0) == doctest::Approx(1.0 / kPi));
    CHECK(poisson_kernel({0.0, -1.0}, 1.0) == doctest::Approx(1.0 / (2.0 * kPi)));
    CHECK(poisson_kernel({2.0, -0.5}, 2.0) == doctest::Approx(2.0 / kPi));
    CHECK_THROWS_AS(poisson_kernel({0.0, 0.0}, 1.0), std::domain_error);
    CHECK_THROWS_AS(poisson_kernel({0.0, 1.0}, 1.0), std::domain_error);

    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> loc(-10, 10), lsc(-3, 2);
    const std::vector<double> pts{-kPi / 2, 0.0, kPi / 2};
    for (int i = 0; i < 100; ++i) {
      const HalfPlanePoint w{loc(gen), -std::pow(10.0, lsc(gen))};
      // Substituting u = phi1 + b tan(s) leaves the constant 1/pi.
      const auto r = integrate(
          [&](double s) {
            const double c = std::cos(s);
            return poisson_kernel(w, w.phi1 - w.phi2 * std::tan(s)) * (-w.phi2) / (c * c);
          },
          std::span<const double>(pts), {1e-13, 1e-12, 200});
      CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
    }
  }

  TEST_CASE("cauchy cdf and sampler") {
    CHECK(cauchy_cdf(0.0, 0.0, 1.0) == doctest::Approx(0.5));
    CHECK(cauchy_cdf(1.0, 0.0, 1.0) == doctest::Approx(0.75));
    CHECK(cauchy_cdf(-1.0, 0.0, 1.0) == doctest::Approx(0.25));
    CHECK(cauchy_cdf(5.0, 2.0, 3.0) == doctest::Approx(0.75));

    RngStream rng(11);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = cauchy_sample(rng, 0.0, 1.0);
    std::vector<double> sorted = xs;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    CHECK(std::abs(sorted[sorted.size() / 2]) < 0.02);
    const double inside = static_cast<double>(std::count_if(xs.begin(), xs.end(), [](double x) {
                            return std::abs(x) < 1.0;
                          })) / xs.size();
    CHECK(inside == doctest::Approx(0.5).epsilon(0.02));

    RngStream rng2(12);
    std::vector<double> ys(20000);
    for (auto& y : ys) y = cauchy_sample(rng2, 2.0, 3.0);
    CHECK(ks_statistic(ys, [](double y) { return cauchy_cdf(y, 2.0, 3.0); }) < ks_critical_value_1pct(ys.size()));

    CHECK_THROWS_AS(cauchy_sample(rng, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(cauchy_sample(rng, 0.0, -1.0), std::invalid_argument);
  }

  TEST_CASE("exit law on the bisector") {
    const auto d = WedgeDomain::l_shape();
    const PolarPoint x{1.0, 1.25 * kPi};
    const auto us = exit_us(d, x, 100000, 21);
    const double on_x = static_cast<double>(std::count_if(us.begin(), us.end(), [](double u) { return u > 0; })) /
                        us.size();
    // Binomial SE at p = 1/2 is 0.0016.
    CHECK(std::abs(on_x - 0.5) < 5 * 0.0016);
    CHECK(ks_statistic(us, [](double u) { return cauchy_cdf(u, 0.0, 1.0); }) < ks_critical_value_1pct(us.size()));

    // Quantile symmetry about the median of the location-zero law.
    std::vector<double> s = us;
    std::sort(s.begin(), s.end());
    for (double q : {0.1, 0.25, 0.4}) {
      const double lo = s[static_cast<std::size_t>(q * s.size())];
      const double hi = s[static_cast<std::size_t>((1 - q) * s.size())];
      CHECK(std::abs(lo + hi) < 0.05 * (hi - lo));
    }
  }

  TEST_CASE("exit law at theta = pi") {
    const auto d = WedgeDomain::l_shape();
    const PolarPoint x{1.0, kPi};
    const auto us = exit_us(d, x, 50000, 22);
    CHECK(ks_statistic(us, [](double u) { return cauchy_cdf(u, -0.5, std::sqrt(3.0) / 2); }) <
          ks_critical_value_1pct(us.size()));
    CHECK(exit_cdf_u(d, x, -0.5) == doctest::Approx(0.5));
    CHECK(exit_cdf_u(d, {1.0, 1.25 * kPi}, 0.0) == doctest::Approx(0.5));
    CHECK(exit_cdf_u(d, {1.0, 1.25 * kPi}, 1.0) == doctest::Approx(0.75));
  }

  TEST_CASE("exit samples carry their arm and boundary point") {
    const auto d = WedgeDomain::l_shape();
    CHECK(arm_of(1.0) == ExitArm::x_arm);
    CHECK(arm_of(-1.0) == ExitArm::y_arm);
    CHECK(arm_of(0.0) == ExitArm::corner);
    const auto s = make_exit_sample(d, 4.0);
    CHECK(s.point.x1 == doctest::Approx(8.0));
    CHECK(s.arm == ExitArm::x_arm);
    RngStream rng(3);
    for (int i = 0; i < 1000; ++i) {
      const auto e = exit_sample(rng, d, {2.0, 1.7 * kPi});
      CHECK(boundary_pushforward(d, e.point) == doctest::Approx(e.u).epsilon(1e-12));
    }
  }

  TEST_CASE("physical exit densities") {
    const auto d = WedgeDomain::l_shape();
    const PolarPoint x{1.0, 1.25 * kPi};
    CHECK(exit_density_physical(d, x, {1.0, 0.0}, BoundaryConvention::paper_literal) ==
          doctest::Approx(1.0 / (2.0 * kPi)));
    CHECK(exit_density_physical(d, x, {0.0, 1.0}, BoundaryConvention::paper_literal) ==
          doctest::Approx(1.0 / (2.0 * kPi)));

    // Conformal-exact density is the arc-length derivative of the CDF of the pullback.
    for (double t : {0.05, 0.5, 1.0, 3.0, 20.0}) {
      const double h = 1e-5 * t;
      const double beta = d.beta();
      const auto cdf_x = [&](double a) { return exit_cdf_u(d, x, std::pow(a, beta)); };
      const auto cdf_y = [&](double a) { return exit_cdf_u(d, x, -std::pow(a, beta)); };
      const double fd_x = (cdf_x(t + h) - cdf_x(t - h)) / (2 * h);
      const double fd_y = -(cdf_y(t + h) - cdf_y(t - h)) / (2 * h);
      CHECK(exit_density_physical(d, x, {t, 0.0}) == doctest::Approx(fd_x).epsilon(1e-7));
      CHECK(exit_density_physical(d, x, {0.0, t}) == doctest::Approx(fd_y).epsilon(1e-7));
    }
    CHECK(std::isinf(exit_density_physical(d, x, {0.0, 0.0})));
    CHECK_THROWS(exit_density_physical(d, x, {-1.0, -1.0}));
  }

  TEST_CASE("harmonic measure of the x arm three ways") {
    const auto d = WedgeDomain::l_shape();
    for (PolarPoint x : {PolarPoint{1.0, 1.25 * kPi}, PolarPoint{0.3, 0.8 * kPi}, PolarPoint{4.0, 1.9 * kPi}}) {
      const double p = exit_probability_x_arm(d, x);
      CHECK(p == doctest::Approx(1.0 - exit_cdf_u(d, x, 0.0)).epsilon(1e-14));
      const auto r = integrate([&](double t) { return exit_density_physical(d, x, {t, 0.0}); }, 0.0, 1e6,
                               {1e-12, 1e-10, 4000});
      // Tail beyond 1e6 on the x arm: the u-tail beyond 1e4 under the Cauchy law.
      const double tail = 1.0 - exit_cdf_u(d, x, std::pow(1e6, d.beta()));
      CHECK(r.value + tail == doctest::Approx(p).epsilon(1e-6));
      const auto us = exit_us(d, x, 40000, 30);
      const double f = static_cast<double>(std::count_if(us.begin(), us.end(), [](double u) { return u > 0; })) /
                       us.size();
      CHECK(std::abs(f - p) < 5 * std::sqrt(p * (1 - p) / us.size()));
    }
    CHECK(exit_probability_x_arm(d, {1.0, 1.25 * kPi}) == doctest::Approx(0.5));
  }

  TEST_CASE("non-interior starting points") {
    const auto d = WedgeDomain::l_shape();
    RngStream rng(1);
    CHECK_THROWS_AS(exit_sample(rng, d, {1.0, 0.25 * kPi}), std::domain_error);
    CHECK_THROWS_AS(exit_sample(rng, d, {1.0, 2 * kPi}), std::domain_error);
    CHECK_THROWS_AS(exit_cdf_u(d, {0.0, kPi}, 0.0), std::domain_error);
    CHECK_THROWS_AS(exit_probability_x_arm(d, {1.0, 0.5 * kPi}), std::domain_error);
  }
}
