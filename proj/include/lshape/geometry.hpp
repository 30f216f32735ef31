#pragma once

#include <numbers>

namespace lshape {

/// Polar coordinates with the angle in (0, 2pi].
struct PolarPoint {
  double r = 0.0;
  double theta = 0.0;
};

struct CartesianPoint {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// Image of a domain point in the closed lower half-plane.
struct HalfPlanePoint {
  double phi1 = 0.0;
  double phi2 = 0.0;
};

/// How a point of the real axis u is identified with a point of the wedge boundary.
enum class BoundaryConvention {
  /// Inverse of the conformal map restricted to the axis: u >= 0 -> (u^{1/beta}, 0).
  conformal_exact,
  /// Arc-length identification: u >= 0 -> (u, 0), u < 0 -> the other arm at distance |u|.
  paper_literal,
};

const char* to_string(BoundaryConvention c);
BoundaryConvention parse_convention(const char* name);

/// The plane minus a closed convex sector, with interior angle omega in (pi, 2pi).
///
/// The boundary consists of the ray at angle 0 (the "x arm") and the ray at angle
/// start_angle() = 2pi - omega (the "y arm" for the L-shape). Interior points have
/// polar angle strictly between start_angle() and 2pi.
class WedgeDomain {
 public:
  explicit WedgeDomain(double interior_angle = 1.5 * std::numbers::pi);

  static WedgeDomain l_shape() { return WedgeDomain(1.5 * std::numbers::pi); }

  double interior_angle() const { return omega_; }
  /// pi / omega; 2/3 for the L-shape.
  double beta() const { return beta_; }
  /// 2pi - omega; pi/2 for the L-shape.
  double start_angle() const { return theta0_; }

  bool is_interior(const PolarPoint& p) const;
  bool is_in_closure(const PolarPoint& p) const;

 private:
  double omega_;
  double beta_;
  double theta0_;
};

PolarPoint to_polar(const CartesianPoint& p);
CartesianPoint to_cartesian(const PolarPoint& p);

/// Angle of the image point, beta (theta - theta0) + pi, in [pi, 2pi].
double phi_theta(const WedgeDomain& domain, double theta);
/// (1 - beta)(2pi - theta); equals phi_theta(theta) - theta.
double omega_theta(const WedgeDomain& domain, double theta);

HalfPlanePoint conformal_map(const WedgeDomain& domain, const PolarPoint& p);
PolarPoint conformal_inverse(const WedgeDomain& domain, const HalfPlanePoint& w);

/// Exact Euclidean distance to the two boundary rays. Zero on the boundary.
double distance_to_boundary(const WedgeDomain& domain, const CartesianPoint& p);

/// Nearest point on the boundary (used for walk-on-spheres absorption).
CartesianPoint nearest_boundary_point(const WedgeDomain& domain, const CartesianPoint& p);

CartesianPoint boundary_pullback(const WedgeDomain& domain, double u,
                                 BoundaryConvention convention = BoundaryConvention::conformal_exact);

/// Inverse of boundary_pullback. Throws std::invalid_argument for points off the boundary
/// (relative tolerance 1e-12 on the perpendicular offset from the nearer ray).
double boundary_pushforward(const WedgeDomain& domain, const CartesianPoint& b,
                            BoundaryConvention convention = BoundaryConvention::conformal_exact);

}  // namespace lshape
