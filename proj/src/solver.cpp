#include "lshape/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lshape/parallel.hpp"
#include "lshape/stats.hpp"

namespace lshape {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

// Unit-scale feature locations of the catalog data on the real axis.
constexpr double kFeatures[] = {0.0, 0.25, -0.25, 1.0, -1.0, 4.0, -4.0, 16.0, -16.0};

// Breakpoints in s = atan(v) for integrals of F(center + scale * v) dv / (1 + v^2).
std::vector<double> axis_breakpoints(double center, double scale) {
  std::vector<double> pts{-kHalfPi, 0.0, kHalfPi};
  for (double u : kFeatures) pts.push_back(std::atan((u - center) / scale));
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double s : pts) {
    if (out.empty() || s - out.back() > 1e-13) out.push_back(s);
  }
  out.front() = -kHalfPi;
  out.back() = kHalfPi;
  return out;
}

HalfPlanePoint checked_image(const WedgeDomain& domain, const PolarPoint& x) {
  if (!domain.is_interior(x)) throw std::domain_error("evaluation point must lie strictly inside the domain");
  const HalfPlanePoint w = conformal_map(domain, x);
  if (!(w.phi2 < 0.0)) throw std::domain_error("evaluation point maps onto the boundary");
  return w;
}

void refuse_near_boundary(const WedgeDomain& domain, const PolarPoint& x) {
  if (distance_to_boundary(domain, to_cartesian(x)) < kMinBoundaryDistance) {
    throw std::domain_error("evaluation point is closer than 1e-6 to the boundary");
  }
}

struct AngleTerms {
  double cos_phi, sin_phi;
  double cos_w, sin_w;        // w = omega_theta
  double cos_tw, sin_tw;      // theta - w
};

AngleTerms angle_terms(const WedgeDomain& domain, double theta) {
  const double phi = phi_theta(domain, theta);
  const double w = omega_theta(domain, theta);
  return {std::cos(phi), std::sin(phi), std::cos(w), std::sin(w), std::cos(theta - w), std::sin(theta - w)};
}

QuadratureConfig raised_near_edges(QuadratureConfig cfg, double sin_phi) {
  if (std::abs(sin_phi) < 0.1) cfg.max_subdivisions *= 4;
  return cfg;
}

}  // namespace

QuadResult solve_at_image(const BoundaryFunction& f0, const HalfPlanePoint& w, const QuadratureConfig& cfg) {
  if (!(w.phi2 < 0.0)) throw std::domain_error("image point must lie in the open lower half-plane");
  const double center = w.phi1;
  const double scale = -w.phi2;
  const auto pts = axis_breakpoints(center, scale);
  const auto& f = f0.eval;
  QuadResult r = integrate([&](double s) { return f(center + scale * std::tan(s)); }, std::span<const double>(pts),
                           cfg);
  r.value /= kPi;
  r.abs_error /= kPi;
  return r;
}

QuadResult solve_quadrature(const WedgeDomain& domain, const BoundaryFunction& f0, const PolarPoint& x,
                            const QuadratureConfig& cfg) {
  const HalfPlanePoint w = checked_image(domain, x);
  refuse_near_boundary(domain, x);
  return solve_at_image(f0, w, cfg);
}

McEstimate solve_mc(const WedgeDomain& domain, const BoundaryFunction& f0, const PolarPoint& x, std::size_t n,
                    RngStream& rng) {
  if (n < 2) throw std::invalid_argument("solve_mc: need at least two samples");
  const HalfPlanePoint w = checked_image(domain, x);
  const double scale = -w.phi2;
  RunningStats stats;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = std::tan(kPi * (rng.uniform_open() - 0.5));
    stats.add(f0.eval(w.phi1 + scale * z));
  }
  return {stats.mean(), stats.stderr_of_mean(), stats.count()};
}

McEstimate solve_mc_streams(const WedgeDomain& domain, const BoundaryFunction& f0, const PolarPoint& x,
                            std::size_t n, std::uint64_t seed, int threads) {
  if (n < 2) throw std::invalid_argument("solve_mc: need at least two samples");
  const HalfPlanePoint w = checked_image(domain, x);
  const double scale = -w.phi2;
  const std::size_t chunks = (n + kMcChunk - 1) / kMcChunk;
  std::vector<RunningStats> parts(chunks);
  parallel_for(chunks, threads, [&](std::size_t k) {
    RngStream rng(seed, k);
    const std::size_t count = std::min(kMcChunk, n - k * kMcChunk);
    for (std::size_t i = 0; i < count; ++i) {
      const double z = std::tan(kPi * (rng.uniform_open() - 0.5));
      parts[k].add(f0.eval(w.phi1 + scale * z));
    }
  });
  // Pairwise tree reduction in index order.
  for (std::size_t stride = 1; stride < parts.size(); stride *= 2) {
    for (std::size_t i = 0; i + stride < parts.size(); i += 2 * stride) parts[i].merge(parts[i + stride]);
  }
  return {parts[0].mean(), parts[0].stderr_of_mean(), parts[0].count()};
}

double kernel_K(const WedgeDomain& domain, double theta, double v) {
  const double w = omega_theta(domain, theta);
  return std::cos(w) - v * std::sin(w);
}

double kernel_Kstar(const WedgeDomain& domain, double theta, double v) {
  const double w = omega_theta(domain, theta);
  return -v * std::cos(w) - std::sin(w);
}

double kernel_Kstarstar(const WedgeDomain& domain, double theta, double v) {
  const double w = omega_theta(domain, theta);
  return -v * std::sin(theta - w) - std::cos(theta - w);
}

Gradient grad_integrals(const WedgeDomain& domain, const BoundaryFunction& f0, double rho, double theta,
                        const QuadratureConfig& cfg) {
  if (!(rho > 0.0)) throw std::domain_error("rho must be positive");
  if (!(theta > domain.start_angle() && theta < 2.0 * kPi)) {
    throw std::domain_error("theta must lie strictly between the boundary rays");
  }
  const AngleTerms t = angle_terms(domain, theta);
  const double center = rho * t.cos_phi;
  const double scale = -rho * t.sin_phi;
  const auto pts = axis_breakpoints(center, scale);
  const auto& fp = f0.deriv1;
  const auto r = integrate_n<2>(
      [&](double s) {
        const double v = std::tan(s);
        const double d = fp(center + scale * v);
        return std::array<double, 2>{d * (t.cos_w - v * t.sin_w), d * (-v * t.cos_w - t.sin_w)};
      },
      std::span<const double>(pts), raised_near_edges(cfg, t.sin_phi));
  return {r.value[0], r.value[1]};
}

Gradient grad(const WedgeDomain& domain, const BoundaryFunction& f0, const PolarPoint& p,
              const QuadratureConfig& cfg) {
  checked_image(domain, p);
  refuse_near_boundary(domain, p);
  const double beta = domain.beta();
  const Gradient k = grad_integrals(domain, f0, std::pow(p.r, beta), p.theta, cfg);
  const double pre = beta / (kPi * std::pow(p.r, 1.0 - beta));
  return {pre * k.d1, pre * k.d2};
}

JIValues j_and_i(const WedgeDomain& domain, const BoundaryFunction& f0, double rho, double theta,
                 const QuadratureConfig& cfg) {
  if (!(rho > 0.0)) throw std::domain_error("J/I: rho must be positive");
  if (!(theta > domain.start_angle() && theta < 2.0 * kPi)) {
    throw std::domain_error("J/I: theta must lie strictly between the boundary rays");
  }
  const AngleTerms t = angle_terms(domain, theta);
  const double center = rho * t.cos_phi;
  const double scale = -rho * t.sin_phi;
  const auto pts = axis_breakpoints(center, scale);
  const auto& fp = f0.deriv1;
  const auto& fpp = f0.deriv2;
  // K^2 / (1 + v^2) = sin^2(w) + (cos 2w - v sin 2w) / (1 + v^2); the constant part
  // integrates f0'' over the line and vanishes.
  const double cos_2w = t.cos_w * t.cos_w - t.sin_w * t.sin_w;
  const double sin_2w = 2.0 * t.sin_w * t.cos_w;
  const auto r = integrate_n<2>(
      [&](double s) {
        const double v = std::tan(s);
        const double u = center + scale * v;
        const double kss = -v * t.sin_tw - t.cos_tw;
        return std::array<double, 2>{fp(u) * kss, fpp(u) * (cos_2w - v * sin_2w)};
      },
      std::span<const double>(pts), raised_near_edges(cfg, t.sin_phi));
  const double beta = domain.beta();
  const double i_factor = beta / (1.0 - beta) * rho;
  return {r.value[0], i_factor * r.value[1], r.abs_error * std::max(1.0, i_factor), r.converged};
}

double J_func(const WedgeDomain& domain, const BoundaryFunction& f0, double rho, double theta,
              const QuadratureConfig& cfg) {
  return j_and_i(domain, f0, rho, theta, cfg).J;
}

double I_func(const WedgeDomain& domain, const BoundaryFunction& f0, double rho, double theta,
              const QuadratureConfig& cfg) {
  return j_and_i(domain, f0, rho, theta, cfg).I;
}

double second_deriv_x1x1(const WedgeDomain& domain, const BoundaryFunction& f0, const PolarPoint& p,
                         const QuadratureConfig& cfg) {
  checked_image(domain, p);
  refuse_near_boundary(domain, p);
  const double beta = domain.beta();
  const auto ji = j_and_i(domain, f0, std::pow(p.r, beta), p.theta, cfg);
  return beta * (1.0 - beta) / kPi * std::pow(p.r, beta - 2.0) * (ji.J + ji.I);
}

}  // namespace lshape
