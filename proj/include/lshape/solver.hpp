#pragma once

#include <cstddef>
#include <cstdint>

#include "lshape/boundary_data.hpp"
#include "lshape/geometry.hpp"
#include "lshape/quadrature.hpp"
#include "lshape/rng.hpp"

namespace lshape {

/// Points closer than this to the boundary are refused by the quadrature evaluators.
inline constexpr double kMinBoundaryDistance = 1e-6;

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Dirichlet solution at x: (1/pi) * integral of f0(phi1 + |phi2| v) / (1 + v^2) dv,
/// evaluated after v = tan(s). The result carries the achieved error bound.
QuadResult solve_quadrature(const WedgeDomain& domain, const BoundaryFunction& f0, const PolarPoint& x,
                            const QuadratureConfig& cfg = {});

/// Monte Carlo mean of f0(phi1 + |phi2| Z), Z standard Cauchy, from a single stream.
McEstimate solve_mc(const WedgeDomain& domain, const BoundaryFunction& f0, const PolarPoint& x, std::size_t n,
                    RngStream& rng);

/// Samples per stream used by solve_mc_streams.
inline constexpr std::size_t kMcChunk = std::size_t{1} << 16;

/// Same estimator split into chunks of kMcChunk samples, chunk k drawn from stream
/// (seed, k). Chunks are merged pairwise in index order, so the result does not depend
/// on the number of threads.
McEstimate solve_mc_streams(const WedgeDomain& domain, const BoundaryFunction& f0, const PolarPoint& x,
                            std::size_t n, std::uint64_t seed, int threads = 1);

/// cos(w) - v sin(w), w = omega_theta(theta).
double kernel_K(const WedgeDomain& domain, double theta, double v);
/// -v cos(w) - sin(w).
double kernel_Kstar(const WedgeDomain& domain, double theta, double v);
/// K* sin(theta) - K cos(theta) = -v sin(theta - w) - cos(theta - w).
double kernel_Kstarstar(const WedgeDomain& domain, double theta, double v);

struct Gradient {
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Closed-form first derivatives,
///   df/dx1 = beta / (pi r^{1-beta}) * int f0'(rho q(v)) K(theta, v) / (1 + v^2) dv,
///   df/dx2 = the same with K* in place of K,
/// with rho = r^beta and q(v) = cos Phi - v sin Phi.
Gradient grad(const WedgeDomain& domain, const BoundaryFunction& f0, const PolarPoint& p,
              const QuadratureConfig& cfg = {});

struct JIValues {
  double J = 0.0;
  double I = 0.0;
  double abs_error = 0.0;
  bool converged = true;
};

/// J(rho, theta) = int f0'(rho q(v)) K**(theta, v) / (1 + v^2) dv and
/// I(rho, theta) = beta/(1-beta) * rho * int f0''(rho q(v)) K^2(theta, v) / (1 + v^2) dv
/// (the factor is 2 for the L-shape). Both integrals share their nodes. f0' is assumed
/// to vanish at both ends of the line, so that the integral of f0'' is zero.
JIValues j_and_i(const WedgeDomain& domain, const BoundaryFunction& f0, double rho, double theta,
                 const QuadratureConfig& cfg = {});
double J_func(const WedgeDomain& domain, const BoundaryFunction& f0, double rho, double theta,
              const QuadratureConfig& cfg = {});
double I_func(const WedgeDomain& domain, const BoundaryFunction& f0, double rho, double theta,
              const QuadratureConfig& cfg = {});

/// The solution at an image point w (w.phi2 < 0), without the distance guard.
QuadResult solve_at_image(const BoundaryFunction& f0, const HalfPlanePoint& w, const QuadratureConfig& cfg = {});

/// The two v-integrals of grad (with K and K*) at (rho, theta), without the prefactor
/// and without the distance guard.
Gradient grad_integrals(const WedgeDomain& domain, const BoundaryFunction& f0, double rho, double theta,
                        const QuadratureConfig& cfg = {});

/// d^2 f / dx1^2 = beta (1 - beta) / pi * r^{beta - 2} * (J + I)(r^beta, theta).
double second_deriv_x1x1(const WedgeDomain& domain, const BoundaryFunction& f0, const PolarPoint& p,
                         const QuadratureConfig& cfg = {});

}  // namespace lshape
