#pragma once

#include <array>
#include <functional>
#include <string>

#include "lshape/boundary_data.hpp"
#include "lshape/geometry.hpp"
#include "lshape/quadrature.hpp"

namespace lshape {

/// Source term g of the Poisson problem, continuous with support in the closed disk
/// of radius support_radius about center. A zero radius means g vanishes identically.
struct SourceFunction {
  std::string name;
  std::function<double(const CartesianPoint&)> eval;
  CartesianPoint center;
  double support_radius = 0.0;
};

SourceFunction zero_source();

/// m * 4 / (pi R^2) * (1 - |y - c|^2 / R^2)^3 inside the disk, total mass m.
SourceFunction radial_bump_source(const CartesianPoint& center, double radius, double mass);

/// N(x) = log|x| / (2 pi).
double newtonian_kernel(const CartesianPoint& x);

/// w(x) = (g * N)(x) by direct quadrature in polar coordinates about x.
/// Throws std::invalid_argument when the support is not a finite disk.
QuadResult newtonian_potential(const SourceFunction& g, const CartesianPoint& x, const QuadratureConfig& cfg = {});

/// Five-point finite-difference Laplacian of the Newtonian potential with step h.
double newtonian_laplacian_fd(const SourceFunction& g, const CartesianPoint& x, double h,
                              const QuadratureConfig& cfg = {});

/// Multipole expansion of g * N about the support center, valid outside the disk.
class MultipoleExpansion {
 public:
  static constexpr int kTerms = 80;

  MultipoleExpansion(const SourceFunction& g, const QuadratureConfig& cfg = {});

  double mass() const { return mass_; }
  /// Requires |y - center| > support radius.
  double operator()(const CartesianPoint& y) const;

 private:
  CartesianPoint center_;
  double radius_;
  double mass_ = 0.0;
  // Coefficients of (R / (z - c))^k, k = 1..kTerms.
  std::array<double, kTerms> re_{};
  std::array<double, kTerms> im_{};
};

/// Boundary datum of the Dirichlet problem left after subtracting g * N:
/// f0(u) = (g * N)(boundary_pullback(u)). Requires the support to stay at distance at
/// least 1.5 radii from the boundary. Derivatives are central finite differences and
/// the result is flagged accordingly; no Sobolev membership is claimed.
BoundaryFunction poisson_reduce(const WedgeDomain& domain, const SourceFunction& g,
                                BoundaryConvention convention = BoundaryConvention::conformal_exact,
                                const QuadratureConfig& cfg = {});

}  // namespace lshape
