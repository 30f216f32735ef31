#include "lshape/boundary_data.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lshape/quadrature.hpp"

namespace lshape {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SobolevClasses all_classes() { return {true, true, kInf}; }

BoundaryFunction gaussian() {
  return {"gaussian",
          [](double u) { return std::exp(-u * u); },
          [](double u) { return -2.0 * u * std::exp(-u * u); },
          [](double u) { return (4.0 * u * u - 2.0) * std::exp(-u * u); },
          all_classes(),
          false};
}

BoundaryFunction odd_gaussian() {
  return {"odd_gaussian",
          [](double u) { return u * std::exp(-u * u); },
          [](double u) { return (1.0 - 2.0 * u * u) * std::exp(-u * u); },
          [](double u) { return (4.0 * u * u * u - 6.0 * u) * std::exp(-u * u); },
          all_classes(),
          false};
}

// Odd with a vanishing first derivative at the origin.
BoundaryFunction cubic_gaussian() {
  return {"cubic_gaussian",
          [](double u) { return u * u * u * std::exp(-u * u); },
          [](double u) {
            const double u2 = u * u;
            return (3.0 * u2 - 2.0 * u2 * u2) * std::exp(-u2);
          },
          [](double u) {
            const double u2 = u * u;
            return u * (6.0 - 14.0 * u2 + 4.0 * u2 * u2) * std::exp(-u2);
          },
          all_classes(),
          false};
}

// 1 - 6u^2 + 8|u|^3 - 3u^4 = (1 - |u|)^3 (1 + 3|u|) on [-1, 1]: piecewise quartic, C^2.
BoundaryFunction bump() {
  return {"bump",
          [](double u) {
            const double a = std::abs(u);
            if (a >= 1.0) return 0.0;
            return 1.0 - 6.0 * u * u + 8.0 * a * a * a - 3.0 * u * u * u * u;
          },
          [](double u) {
            const double a = std::abs(u);
            if (a >= 1.0) return 0.0;
            return -12.0 * u + 24.0 * u * a - 12.0 * u * u * u;
          },
          [](double u) {
            const double a = std::abs(u);
            if (a >= 1.0) return 0.0;
            return -12.0 + 48.0 * a - 36.0 * u * u;
          },
          all_classes(),
          false};
}

BoundaryFunction zero() {
  const auto z = [](double) { return 0.0; };
  return {"zero", z, z, z, all_classes(), false};
}

}  // namespace

std::vector<std::string> catalog_names() { return {"gaussian", "odd_gaussian", "cubic_gaussian", "bump", "zero"}; }

BoundaryFunction catalog(const std::string& name) {
  if (name == "gaussian") return gaussian();
  if (name == "odd_gaussian") return odd_gaussian();
  if (name == "cubic_gaussian") return cubic_gaussian();
  if (name == "bump") return bump();
  if (name == "zero") return zero();
  throw std::invalid_argument("unknown boundary function: " + name);
}

BoundaryFunction make_constant(double c) {
  const auto z = [](double) { return 0.0; };
  // A nonzero constant is bounded and smooth but not integrable.
  const SobolevClasses classes = c == 0.0 ? all_classes() : SobolevClasses{false, false, 0.0};
  return {"constant", [c](double) { return c; }, z, z, classes, false};
}

BoundaryFunction linear_combination(double a, const BoundaryFunction& f, double b, const BoundaryFunction& g) {
  BoundaryFunction out;
  out.name = "combination";
  out.eval = [a, b, fe = f.eval, ge = g.eval](double u) { return a * fe(u) + b * ge(u); };
  out.deriv1 = [a, b, fd = f.deriv1, gd = g.deriv1](double u) { return a * fd(u) + b * gd(u); };
  out.deriv2 = [a, b, fd = f.deriv2, gd = g.deriv2](double u) { return a * fd(u) + b * gd(u); };
  out.classes.w1_2 = f.classes.w1_2 && g.classes.w1_2;
  out.classes.w2_2 = f.classes.w2_2 && g.classes.w2_2;
  out.classes.w1_p_max = std::min(f.classes.w1_p_max, g.classes.w1_p_max);
  out.numerical_derivatives = f.numerical_derivatives || g.numerical_derivatives;
  return out;
}

std::vector<double> default_pv_epsilons() { return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}; }

PvResult pv_integral(const BoundaryFunction& f, const std::vector<double>& eps_grid) {
  if (eps_grid.size() < 2) throw std::invalid_argument("pv_integral: need at least two cutoffs");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0 && eps_grid[i] < 1.0) || (i > 0 && !(eps_grid[i] < eps_grid[i - 1]))) {
      throw std::invalid_argument("pv_integral: cutoffs must decrease within (0, 1)");
    }
  }
  const QuadratureConfig cfg{1e-14, 1e-12, 4000};
  const auto paired = [&f](double x) { return f.deriv1(x) - f.deriv1(-x); };

  // |x| > 1 through x = 1/y; shared by every cutoff.
  const double outer = integrate([&](double y) { return paired(1.0 / y) / y; }, 0.0, 1.0, cfg).value;

  PvResult out;
  out.epsilons = eps_grid;
  for (double eps : eps_grid) {
    // eps < |x| < 1 through x = e^t, so dx/x = dt.
    const double inner = integrate([&](double t) { return paired(std::exp(t)); }, std::log(eps), 0.0, cfg).value;
    out.truncated.push_back(inner + outer);
  }
  for (std::size_t k = 0; k + 1 < eps_grid.size(); ++k) {
    const double e0 = eps_grid[k];
    const double e1 = eps_grid[k + 1];
    out.extrapolated.push_back((e0 * out.truncated[k + 1] - e1 * out.truncated[k]) / (e0 - e1));
  }
  out.value = out.extrapolated.back();
  out.converged = out.extrapolated.size() >= 2 &&
                  std::abs(out.extrapolated.back() - out.extrapolated[out.extrapolated.size() - 2]) < 1e-6;
  return out;
}

}  // namespace lshape
