#include "lshape/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

namespace lshape {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Angles within this many ulps of a boundary ray are treated as on it.
constexpr double kAngleSlack = 1e-14;

struct Ray {
  double dx;
  double dy;
};

Ray x_arm() { return {1.0, 0.0}; }
// cos(pi/2) is not exactly zero; snap the L-shape arm onto the axis.
Ray y_arm(const WedgeDomain& d) {
  const double c = std::cos(d.start_angle());
  return {std::abs(c) < 1e-15 ? 0.0 : c, std::sin(d.start_angle())};
}

double distance_to_ray(const Ray& ray, const CartesianPoint& p, double* foot = nullptr) {
  const double t = std::max(0.0, p.x1 * ray.dx + p.x2 * ray.dy);
  if (foot) *foot = t;
  return std::hypot(p.x1 - t * ray.dx, p.x2 - t * ray.dy);
}

void check_angle(const WedgeDomain& d, double theta) {
  if (!(theta >= d.start_angle() - kAngleSlack && theta <= kTwoPi + kAngleSlack)) {
    throw std::domain_error("angle " + std::to_string(theta) + " outside [" +
                            std::to_string(d.start_angle()) + ", 2pi]");
  }
}

}  // namespace

const char* to_string(BoundaryConvention c) {
  switch (c) {
    case BoundaryConvention::conformal_exact:
      return "conformal-exact";
    case BoundaryConvention::paper_literal:
      return "paper-literal";
  }
  return "unknown";
}

BoundaryConvention parse_convention(const char* name) {
  if (std::strcmp(name, "conformal-exact") == 0) return BoundaryConvention::conformal_exact;
  if (std::strcmp(name, "paper-literal") == 0) return BoundaryConvention::paper_literal;
  throw std::invalid_argument(std::string("unknown boundary convention: ") + name);
}

WedgeDomain::WedgeDomain(double interior_angle)
    : omega_(interior_angle), beta_(kPi / interior_angle), theta0_(kTwoPi - interior_angle) {
  if (!(interior_angle > kPi && interior_angle < kTwoPi)) {
    throw std::invalid_argument("interior angle must lie in (pi, 2pi)");
  }
}

bool WedgeDomain::is_interior(const PolarPoint& p) const {
  return p.r > 0.0 && p.theta > theta0_ && p.theta < kTwoPi;
}

bool WedgeDomain::is_in_closure(const PolarPoint& p) const {
  return p.r >= 0.0 && p.theta >= theta0_ && p.theta <= kTwoPi;
}

PolarPoint to_polar(const CartesianPoint& p) {
  double theta = std::atan2(p.x2, p.x1);
  if (theta <= 0.0) theta += kTwoPi;
  return {std::hypot(p.x1, p.x2), theta};
}

CartesianPoint to_cartesian(const PolarPoint& p) {
  return {p.r * std::cos(p.theta), p.r * std::sin(p.theta)};
}

double phi_theta(const WedgeDomain& domain, double theta) {
  check_angle(domain, theta);
  return domain.beta() * (theta - domain.start_angle()) + kPi;
}

double omega_theta(const WedgeDomain& domain, double theta) {
  check_angle(domain, theta);
  return (1.0 - domain.beta()) * (kTwoPi - theta);
}

HalfPlanePoint conformal_map(const WedgeDomain& domain, const PolarPoint& p) {
  if (!(p.r > 0.0)) throw std::domain_error("conformal_map: radius must be positive");
  const double phi = phi_theta(domain, p.theta);
  const double rho = std::pow(p.r, domain.beta());
  HalfPlanePoint w{rho * std::cos(phi), rho * std::sin(phi)};
  // The image of the closed domain is the closed lower half-plane; clip the
  // rounding residue of sin(pi) and sin(2pi).
  if (w.phi2 > 0.0) w.phi2 = 0.0;
  if (p.theta <= domain.start_angle() || p.theta >= kTwoPi) w.phi2 = 0.0;
  return w;
}

PolarPoint conformal_inverse(const WedgeDomain& domain, const HalfPlanePoint& w) {
  if (w.phi2 > 0.0) throw std::domain_error("conformal_inverse: point lies in the upper half-plane");
  const double modulus = std::hypot(w.phi1, w.phi2);
  if (modulus == 0.0) throw std::domain_error("conformal_inverse: the corner has no preimage");
  double phi = std::atan2(w.phi2, w.phi1);
  if (phi <= 0.0) phi += kTwoPi;
  const double theta = domain.start_angle() + (phi - kPi) / domain.beta();
  return {std::pow(modulus, 1.0 / domain.beta()), std::min(theta, kTwoPi)};
}

double distance_to_boundary(const WedgeDomain& domain, const CartesianPoint& p) {
  return std::min(distance_to_ray(x_arm(), p), distance_to_ray(y_arm(domain), p));
}

CartesianPoint nearest_boundary_point(const WedgeDomain& domain, const CartesianPoint& p) {
  double tx = 0.0;
  double ty = 0.0;
  const Ray ry = y_arm(domain);
  const double dx = distance_to_ray(x_arm(), p, &tx);
  const double dy = distance_to_ray(ry, p, &ty);
  if (dx <= dy) return {tx, 0.0};
  return {ty * ry.dx, ty * ry.dy};
}

CartesianPoint boundary_pullback(const WedgeDomain& domain, double u, BoundaryConvention convention) {
  const double t = convention == BoundaryConvention::conformal_exact
                       ? std::pow(std::abs(u), 1.0 / domain.beta())
                       : std::abs(u);
  if (u >= 0.0) return {t, 0.0};
  const Ray ry = y_arm(domain);
  return {t * ry.dx, t * ry.dy};
}

double boundary_pushforward(const WedgeDomain& domain, const CartesianPoint& b, BoundaryConvention convention) {
  const double scale = std::max(1.0, std::hypot(b.x1, b.x2));
  double tx = 0.0;
  double ty = 0.0;
  const double dx = distance_to_ray(x_arm(), b, &tx);
  const double dy = distance_to_ray(y_arm(domain), b, &ty);
  if (std::min(dx, dy) > 1e-12 * scale) {
    throw std::invalid_argument("boundary_pushforward: point is not on the boundary");
  }
  const auto radial = [&](double t) {
    return convention == BoundaryConvention::conformal_exact ? std::pow(t, domain.beta()) : t;
  };
  if (dx <= dy) return radial(tx);
  return -radial(ty);
}

}  // namespace lshape
