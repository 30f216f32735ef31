#include "lshape/newtonian.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace lshape {

namespace {

constexpr double kPi = std::numbers::pi;

void check_support(const SourceFunction& g) {
  if (!std::isfinite(g.support_radius) || g.support_radius < 0.0 || !std::isfinite(g.center.x1) ||
      !std::isfinite(g.center.x2)) {
    throw std::invalid_argument("source must have compact support in a finite disk");
  }
  if (g.support_radius > 0.0 && !g.eval) throw std::invalid_argument("source has no evaluator");
}

}  // namespace

SourceFunction zero_source() { return {"zero", [](const CartesianPoint&) { return 0.0; }, {0.0, 0.0}, 0.0}; }

SourceFunction radial_bump_source(const CartesianPoint& center, double radius, double mass) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("bump radius must be positive");
  const double scale = mass * 4.0 / (kPi * radius * radius);
  return {"radial_bump",
          [center, radius, scale](const CartesianPoint& y) {
            const double dx = y.x1 - center.x1;
            const double dy = y.x2 - center.x2;
            const double t = 1.0 - (dx * dx + dy * dy) / (radius * radius);
            return t > 0.0 ? scale * t * t * t : 0.0;
          },
          center, radius};
}

double newtonian_kernel(const CartesianPoint& x) { return std::log(std::hypot(x.x1, x.x2)) / (2.0 * kPi); }

QuadResult newtonian_potential(const SourceFunction& g, const CartesianPoint& x, const QuadratureConfig& cfg) {
  check_support(g);
  const double radius = g.support_radius;
  if (radius == 0.0) return {};
  const double ox = x.x1 - g.center.x1;
  const double oy = x.x2 - g.center.x2;
  const double d = std::hypot(ox, oy);
  const double c0 = d * d - radius * radius;

  bool inner_ok = true;
  double inner_err = 0.0;
  const auto along_ray = [&](double alpha) {
    const double ex = std::cos(alpha);
    const double ey = std::sin(alpha);
    const double b = ex * ox + ey * oy;
    const double disc = b * b - c0;
    if (disc <= 0.0) return 0.0;
    const double root = std::sqrt(disc);
    const double lo = std::max(0.0, -b - root);
    const double hi = -b + root;
    if (!(hi > lo)) return 0.0;
    const auto r = integrate(
        [&](double s) {
          if (s <= 0.0) return 0.0;
          return g.eval({x.x1 + s * ex, x.x2 + s * ey}) * s * std::log(s);
        },
        lo, hi, cfg);
    inner_ok = inner_ok && r.converged;
    inner_err += r.abs_error;
    return r.value;
  };

  QuadResult out;
  if (d <= radius) {
    out = integrate(along_ray, 0.0, 2.0 * kPi, cfg);
  } else {
    const double toward = std::atan2(-oy, -ox);
    const double half = std::asin(radius / d);
    const std::array<double, 3> pts{toward - half, toward, toward + half};
    out = integrate(along_ray, std::span<const double>(pts), cfg);
  }
  out.value /= 2.0 * kPi;
  out.abs_error /= 2.0 * kPi;
  out.converged = out.converged && inner_ok;
  return out;
}

double newtonian_laplacian_fd(const SourceFunction& g, const CartesianPoint& x, double h, const QuadratureConfig& cfg) {
  const auto w = [&](double a, double b) { return newtonian_potential(g, {x.x1 + a, x.x2 + b}, cfg).value; };
  return (w(h, 0) + w(-h, 0) + w(0, h) + w(0, -h) - 4.0 * w(0, 0)) / (h * h);
}

MultipoleExpansion::MultipoleExpansion(const SourceFunction& g, const QuadratureConfig& cfg)
    : center_(g.center), radius_(g.support_radius) {
  check_support(g);
  if (radius_ == 0.0) return;
  constexpr std::size_t N = 2 * kTerms + 1;
  const double R = radius_;
  // Uniform starting panels so that narrow features of g are not stepped over.
  std::array<double, 33> angles{};
  for (std::size_t i = 0; i < angles.size(); ++i) angles[i] = 2.0 * kPi * i / (angles.size() - 1);
  std::array<double, 17> radii{};
  for (std::size_t i = 0; i < radii.size(); ++i) radii[i] = R * i / (radii.size() - 1);
  const auto ring = [&](double r) {
    const auto res = integrate_n<N>(
        [&](double alpha) {
          std::array<double, N> v{};
          const std::complex<double> e(std::cos(alpha), std::sin(alpha));
          const double gv = g.eval({center_.x1 + r * e.real(), center_.x2 + r * e.imag()}) * r;
          v[0] = gv;
          const std::complex<double> t = e * (r / R);
          std::complex<double> p = gv;
          for (int k = 0; k < kTerms; ++k) {
            p *= t;
            v[1 + 2 * k] = p.real();
            v[2 + 2 * k] = p.imag();
          }
          return v;
        },
        std::span<const double>(angles), cfg);
    return res.value;
  };
  const auto total = integrate_n<N>(ring, std::span<const double>(radii), cfg);
  mass_ = total.value[0];
  for (int k = 0; k < kTerms; ++k) {
    const double c = -1.0 / (2.0 * kPi * (k + 1));
    re_[k] = c * total.value[1 + 2 * k];
    im_[k] = c * total.value[2 + 2 * k];
  }
}

double MultipoleExpansion::operator()(const CartesianPoint& y) const {
  const std::complex<double> z(y.x1 - center_.x1, y.x2 - center_.x2);
  const double dist = std::abs(z);
  if (radius_ == 0.0) return 0.0;
  if (!(dist > radius_)) throw std::domain_error("multipole expansion evaluated inside the source disk");
  const std::complex<double> t = radius_ / z;
  std::complex<double> p = 1.0;
  double sum = mass_ * std::log(dist) / (2.0 * kPi);
  for (int k = 0; k < kTerms; ++k) {
    p *= t;
    sum += re_[k] * p.real() - im_[k] * p.imag();
  }
  return sum;
}

BoundaryFunction poisson_reduce(const WedgeDomain& domain, const SourceFunction& g, BoundaryConvention convention,
                                const QuadratureConfig& cfg) {
  check_support(g);
  if (g.support_radius > 0.0) {
    if (!domain.is_interior(to_polar(g.center))) throw std::invalid_argument("source center must be interior");
    if (distance_to_boundary(domain, g.center) < 1.5 * g.support_radius) {
      throw std::invalid_argument("source support must stay 1.5 radii away from the boundary");
    }
  }
  const auto expansion = std::make_shared<const MultipoleExpansion>(g, cfg);
  const auto f = [expansion, domain, convention](double u) {
    return (*expansion)(boundary_pullback(domain, u, convention));
  };
  BoundaryFunction out;
  out.name = "poisson_reduce(" + g.name + ")";
  out.eval = f;
  out.deriv1 = [f](double u) {
    const double h = 1e-5 * std::max(1.0, std::abs(u));
    return (f(u + h) - f(u - h)) / (2.0 * h);
  };
  out.deriv2 = [f](double u) {
    const double h = 1e-4 * std::max(1.0, std::abs(u));
    return (f(u + h) - 2.0 * f(u) + f(u - h)) / (h * h);
  };
  out.classes = {false, false, 0.0};
  out.numerical_derivatives = true;
  return out;
}

}  // namespace lshape
