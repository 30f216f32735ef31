#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace lshape {

/// Declared Sobolev memberships of a boundary datum on the real line.
///
/// Notation follows W_p^k: p is the integrability exponent, k the order.
struct SobolevClasses {
  bool w1_2 = false;  ///< f, f', f'' in L1
  bool w2_2 = false;  ///< f, f', f'' in L2
  /// f, f' in Lp for every finite p up to this bound (0 when none is claimed).
  double w1_p_max = 0.0;
};

/// Boundary datum f0 on the real axis of the half-plane, with its first two derivatives.
struct BoundaryFunction {
  using Fn = std::function<double(double)>;

  std::string name;
  Fn eval;
  Fn deriv1;
  Fn deriv2;
  SobolevClasses classes;
  /// True when deriv1/deriv2 are finite-difference approximations rather than exact.
  bool numerical_derivatives = false;
};

/// Stable catalog identifiers: gaussian, odd_gaussian, cubic_gaussian, bump, zero.
std::vector<std::string> catalog_names();

/// Throws std::invalid_argument for an unknown name.
BoundaryFunction catalog(const std::string& name);

BoundaryFunction make_constant(double c);

BoundaryFunction linear_combination(double a, const BoundaryFunction& f, double b, const BoundaryFunction& g);

struct PvResult {
  std::vector<double> epsilons;
  /// Truncated integrals over |x| > eps, one per epsilon.
  std::vector<double> truncated;
  /// Linear-in-eps extrapolations from consecutive pairs of the grid.
  std::vector<double> extrapolated;
  double value = 0.0;
  /// Successive extrapolations differ by less than 1e-6 at the end of the grid.
  bool converged = false;
};

std::vector<double> default_pv_epsilons();

/// Principal value of the integral of f0'(x)/x over |x| > eps as eps -> 0.
///
/// The nodes at x and -x are paired, so the integrand is (f0'(x) - f0'(-x))/x on
/// (eps, inf), which is bounded near zero for f0 in C^2.
PvResult pv_integral(const BoundaryFunction& f, const std::vector<double>& eps_grid = default_pv_epsilons());

}  // namespace lshape
