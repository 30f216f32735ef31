#pragma once

#include "lshape/geometry.hpp"
#include "lshape/rng.hpp"

namespace lshape {

enum class ExitArm { x_arm, y_arm, corner };

const char* to_string(ExitArm arm);

/// One boundary hit: the coordinate u on the real axis of the half-plane and the
/// physical boundary point it identifies with.
struct ExitSample {
  double u = 0.0;
  CartesianPoint point;
  ExitArm arm = ExitArm::corner;
};

ExitArm arm_of(double u);
ExitSample make_exit_sample(const WedgeDomain& domain, double u,
                            BoundaryConvention convention = BoundaryConvention::conformal_exact);

/// Exit density on the real axis for Brownian motion started at w (w.phi2 < 0).
double poisson_kernel(const HalfPlanePoint& w, double u);

double cauchy_cdf(double x, double location, double scale);

/// location + scale * tan(pi (U - 1/2)), U uniform on (0, 1).
double cauchy_sample(RngStream& rng, double location, double scale);

/// Exit position of Brownian motion started at the interior point x, sampled through
/// the conformal map: u = phi1(x) + |phi2(x)| Z with Z standard Cauchy.
ExitSample exit_sample(RngStream& rng, const WedgeDomain& domain, const PolarPoint& x,
                       BoundaryConvention convention = BoundaryConvention::conformal_exact);

/// Law of the u coordinate of the exit position: Cauchy(phi1(x), |phi2(x)|).
double exit_cdf_u(const WedgeDomain& domain, const PolarPoint& x, double u);

/// Density of the exit position with respect to arc length on the arm containing b.
/// Under paper_literal this is the Cauchy density evaluated at +-|b|; under
/// conformal_exact it carries the Jacobian beta |b|^{beta-1} of u = +-|b|^beta.
double exit_density_physical(const WedgeDomain& domain, const PolarPoint& x, const CartesianPoint& b,
                             BoundaryConvention convention = BoundaryConvention::conformal_exact);

/// Harmonic measure of the x arm seen from x: 1/2 + arctan(phi1/|phi2|)/pi.
double exit_probability_x_arm(const WedgeDomain& domain, const PolarPoint& x);

}  // namespace lshape
