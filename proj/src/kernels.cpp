#include "lshape/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lshape {

namespace {

constexpr double kPi = std::numbers::pi;

HalfPlanePoint interior_image(const WedgeDomain& domain, const PolarPoint& x) {
  if (!domain.is_interior(x)) throw std::domain_error("starting point must lie strictly inside the domain");
  const HalfPlanePoint w = conformal_map(domain, x);
  if (!(w.phi2 < 0.0)) throw std::domain_error("starting point maps onto the boundary");
  return w;
}

}  // namespace

const char* to_string(ExitArm arm) {
  switch (arm) {
    case ExitArm::x_arm:
      return "x_arm";
    case ExitArm::y_arm:
      return "y_arm";
    case ExitArm::corner:
      return "corner";
  }
  return "unknown";
}

ExitArm arm_of(double u) {
  if (u > 0.0) return ExitArm::x_arm;
  if (u < 0.0) return ExitArm::y_arm;
  return ExitArm::corner;
}

ExitSample make_exit_sample(const WedgeDomain& domain, double u, BoundaryConvention convention) {
  return {u, boundary_pullback(domain, u, convention), arm_of(u)};
}

double poisson_kernel(const HalfPlanePoint& w, double u) {
  if (!(w.phi2 < 0.0)) throw std::domain_error("poisson_kernel: w must lie strictly below the axis");
  const double b = -w.phi2;
  const double d = u - w.phi1;
  return b / (kPi * (d * d + b * b));
}

double cauchy_cdf(double x, double location, double scale) {
  return 0.5 + std::atan((x - location) / scale) / kPi;
}

double cauchy_sample(RngStream& rng, double location, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("cauchy_sample: scale must be positive");
  return location + scale * std::tan(kPi * (rng.uniform_open() - 0.5));
}

ExitSample exit_sample(RngStream& rng, const WedgeDomain& domain, const PolarPoint& x,
                       BoundaryConvention convention) {
  const HalfPlanePoint w = interior_image(domain, x);
  return make_exit_sample(domain, cauchy_sample(rng, w.phi1, -w.phi2), convention);
}

double exit_cdf_u(const WedgeDomain& domain, const PolarPoint& x, double u) {
  const HalfPlanePoint w = interior_image(domain, x);
  return cauchy_cdf(u, w.phi1, -w.phi2);
}

double exit_density_physical(const WedgeDomain& domain, const PolarPoint& x, const CartesianPoint& b,
                             BoundaryConvention convention) {
  const HalfPlanePoint w = interior_image(domain, x);
  // Signed arc-length coordinate: positive on the x arm, negative on the other arm.
  const double s = boundary_pushforward(domain, b, BoundaryConvention::paper_literal);
  if (convention == BoundaryConvention::paper_literal) return poisson_kernel(w, s);
  const double t = std::abs(s);
  // The Jacobian of u = t^beta is unbounded at the corner.
  if (t == 0.0) return std::numeric_limits<double>::infinity();
  const double beta = domain.beta();
  const double u = std::copysign(std::pow(t, beta), s);
  return poisson_kernel(w, u) * beta * std::pow(t, beta - 1.0);
}

double exit_probability_x_arm(const WedgeDomain& domain, const PolarPoint& x) {
  const HalfPlanePoint w = interior_image(domain, x);
  return 0.5 + std::atan(w.phi1 / -w.phi2) / kPi;
}

}  // namespace lshape
