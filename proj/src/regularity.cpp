#include "lshape/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "lshape/parallel.hpp"
#include "lshape/solver.hpp"
#include "lshape/stats.hpp"

namespace lshape {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate_grids(const std::vector<double>& sigma_grid, const std::vector<double>& rho_min_grid) {
  if (sigma_grid.empty() || rho_min_grid.empty()) throw std::invalid_argument("sigma and rho_min grids must be nonempty");
  for (double s : sigma_grid) {
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("sigma must lie in (0, 1]");
  }
  for (std::size_t i = 0; i < rho_min_grid.size(); ++i) {
    const double r = rho_min_grid[i];
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("rho_min must lie in (0, 1)");
    if (i > 0 && !(r < rho_min_grid[i - 1])) throw std::invalid_argument("rho_min grid must be strictly decreasing");
  }
}

// Distance from the unit point at angle theta to the boundary.
double unit_distance(const WedgeDomain& domain, double theta) {
  return distance_to_boundary(domain, to_cartesian({1.0, theta}));
}

}  // namespace

const char* to_string(Region region) {
  switch (region) {
    case Region::k1: return "K1";
    case Region::k2: return "K2";
    case Region::k3: return "K3";
    case Region::outside: return "outside";
  }
  return "outside";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::finite: return "finite";
    case Verdict::divergent: return "divergent";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

void validate(const WedgeDomain& domain, const RegionPartition& partition) {
  if (!(partition.delta > 0.0 && 2.0 * partition.delta < domain.interior_angle())) {
    throw std::invalid_argument("partition delta must lie in (0, omega / 2)");
  }
}

Region region_of(const WedgeDomain& domain, const RegionPartition& partition, const PolarPoint& p) {
  validate(domain, partition);
  if (!(p.r > 0.0 && p.r < 1.0) || !domain.is_in_closure(p)) return Region::outside;
  if (p.theta < domain.start_angle() + partition.delta) return Region::k2;
  if (p.theta > kTwoPi - partition.delta) return Region::k3;
  return Region::k1;
}

double theoretical_exponent(const WedgeDomain& domain, double sigma) { return 2.0 - 2.0 * sigma / domain.beta(); }

double k1_prefactor(const WedgeDomain& domain) {
  const double b = domain.beta();
  return b * (1.0 - b) * (1.0 - b) / (kPi * kPi);
}

std::vector<double> default_sigma_grid() { return {0.50, 0.55, 0.60, 0.65, 2.0 / 3.0, 0.70, 0.75, 0.80, 0.90}; }
std::vector<double> default_rho_min_grid() { return {1e-2, 1e-3, 1e-4, 1e-5}; }
std::vector<double> default_limit_rho_grid() { return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}; }

WeightedIntegralTable::WeightedIntegralTable(const WedgeDomain& domain, const BoundaryFunction& f0,
                                             const RegionPartition& partition, std::vector<double> sigma_grid,
                                             std::vector<double> rho_min_grid, const TableOptions& options)
    : sigma_grid_(std::move(sigma_grid)), rho_min_grid_(std::move(rho_min_grid)) {
  validate_grids(sigma_grid_, rho_min_grid_);
  validate(domain, partition);
  if (options.nodes_per_panel < 1) throw std::invalid_argument("nodes_per_panel must be positive");
  prefactor_ = k1_prefactor(domain);
  beta_ = domain.beta();

  // Panel boundaries: decades from 1 down to the smallest cutoff, plus every cutoff.
  std::vector<double> bounds{1.0};
  const double smallest = rho_min_grid_.back();
  for (double d = 0.1; d > smallest * (1.0 + 1e-12); d /= 10.0) bounds.push_back(d);
  for (double r : rho_min_grid_) bounds.push_back(r);
  std::sort(bounds.begin(), bounds.end(), std::greater<>());
  bounds.erase(std::unique(bounds.begin(), bounds.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }),
               bounds.end());

  const auto& rule = gauss_legendre(options.nodes_per_panel);
  std::vector<double> panel_low;
  for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
    const double hi = std::log(bounds[p]);
    const double lo = std::log(bounds[p + 1]);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      rho_.push_back(std::exp(0.5 * (hi + lo) + 0.5 * (hi - lo) * rule.nodes[i]));
      weight_.push_back(0.5 * (hi - lo) * rule.weights[i]);
      panel_low.push_back(bounds[p + 1]);
    }
  }
  for (double r : rho_min_grid_) {
    std::size_t count = 0;
    while (count < rho_.size() && panel_low[count] >= r * (1.0 - 1e-12)) ++count;
    cutoff_.push_back(count);
  }

  const std::size_t n = rho_.size();
  const std::size_t ns = sigma_grid_.size();
  g1_.assign(n, 0.0);
  g2_.assign(ns, std::vector<double>(n, 0.0));
  g3_.assign(ns, std::vector<double>(n, 0.0));
  std::vector<char> ok(n, 1);

  const double t0 = domain.start_angle();
  const double delta = partition.delta;
  parallel_for(n, options.threads, [&](std::size_t k) {
    const double rho = rho_[k];
    std::map<double, double> memo;
    bool node_ok = true;
    const auto sq = [&](double theta) {
      const auto it = memo.find(theta);
      if (it != memo.end()) return it->second;
      const auto ji = j_and_i(domain, f0, rho, theta, options.inner);
      node_ok = node_ok && ji.converged;
      const double v = (ji.J + ji.I) * (ji.J + ji.I);
      memo.emplace(theta, v);
      return v;
    };
    const auto r1 = integrate(sq, t0 + delta, kTwoPi - delta, options.angular);
    g1_[k] = r1.value;
    node_ok = node_ok && r1.converged;
    if (options.include_edges) {
      for (std::size_t s = 0; s < ns; ++s) {
        const double power = 2.0 - 2.0 * sigma_grid_[s];
        const auto weighted = [&](double theta) {
          if (!(theta > t0 && theta < kTwoPi)) return 0.0;
          return std::pow(unit_distance(domain, theta), power) * sq(theta);
        };
        const auto r2 = integrate(weighted, t0, t0 + delta, options.angular);
        const auto r3 = integrate(weighted, kTwoPi - delta, kTwoPi, options.angular);
        g2_[s][k] = r2.value;
        g3_[s][k] = r3.value;
        node_ok = node_ok && r2.converged && r3.converged;
      }
    }
    ok[k] = node_ok ? 1 : 0;
  });
  converged_ = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

WeightedIntegralParts WeightedIntegralTable::parts(std::size_t sigma_index, std::size_t rho_index) const {
  const double sigma = sigma_grid_.at(sigma_index);
  const std::size_t count = cutoff_.at(rho_index);
  const double power = 2.0 - 2.0 * sigma / beta_;
  WeightedIntegralParts out;
  for (std::size_t k = 0; k < count; ++k) {
    const double w = prefactor_ * weight_[k] * std::pow(rho_[k], power);
    out.k1 += w * g1_[k];
    out.k2 += w * g2_[sigma_index][k];
    out.k3 += w * g3_[sigma_index][k];
  }
  return out;
}

double weighted_integral_K1(const WedgeDomain& domain, const BoundaryFunction& f0, double sigma, double delta,
                            double rho_min, const TableOptions& options) {
  TableOptions opts = options;
  opts.include_edges = false;
  const WeightedIntegralTable table(domain, f0, RegionPartition{delta}, {sigma}, {rho_min}, opts);
  return table.parts(0, 0).k1;
}

WeightedIntegralParts weighted_integral_full(const WedgeDomain& domain, const BoundaryFunction& f0, double sigma,
                                             const RegionPartition& partition, double rho_min,
                                             const TableOptions& options) {
  TableOptions opts = options;
  opts.include_edges = true;
  const WeightedIntegralTable table(domain, f0, partition, {sigma}, {rho_min}, opts);
  return table.parts(0, 0);
}

SobolevFirstOrder sobolev_first_order(const WedgeDomain& domain, const BoundaryFunction& f0, int nodes,
                                      const QuadratureConfig& cfg) {
  if (nodes < 2) throw std::invalid_argument("sobolev_first_order: need at least two nodes");
  const double beta = domain.beta();
  const double t0 = domain.start_angle();
  const auto norms = [&](int n) {
    const auto& rule = gauss_legendre(n);
    double l2 = 0.0;
    double g2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double rho = 0.5 + 0.5 * rule.nodes[i];
      const double wr = 0.5 * rule.weights[i];
      for (int j = 0; j < n; ++j) {
        const double theta = 0.5 * (t0 + kTwoPi) + 0.5 * (kTwoPi - t0) * rule.nodes[j];
        const double wt = 0.5 * (kTwoPi - t0) * rule.weights[j];
        const double phi = phi_theta(domain, theta);
        const double f = solve_at_image(f0, {rho * std::cos(phi), rho * std::sin(phi)}, cfg).value;
        const Gradient k = grad_integrals(domain, f0, rho, theta, cfg);
        l2 += wr * wt * f * f * std::pow(rho, 2.0 / beta - 1.0) / beta;
        g2 += wr * wt * rho * (k.d1 * k.d1 + k.d2 * k.d2) * beta / (kPi * kPi);
      }
    }
    return std::pair{l2, g2};
  };
  SobolevFirstOrder out;
  out.nodes = 2 * nodes;
  std::tie(out.l2_squared_coarse, out.grad_squared_coarse) = norms(nodes);
  std::tie(out.l2_squared, out.grad_squared) = norms(2 * nodes);
  const auto rel = [](double a, double b) { return a == b ? 0.0 : std::abs(a - b) / std::max(std::abs(a), std::abs(b)); };
  out.relative_change = std::max(rel(out.l2_squared, out.l2_squared_coarse), rel(out.grad_squared, out.grad_squared_coarse));
  out.stable = std::isfinite(out.l2_squared) && std::isfinite(out.grad_squared) && out.relative_change < 1e-3;
  return out;
}

LimitCheck limit_check(const WedgeDomain& domain, const BoundaryFunction& f0, double theta,
                       const std::vector<double>& rho_grid, const QuadratureConfig& cfg) {
  if (rho_grid.size() < 2) throw std::invalid_argument("limit_check: need at least two rho values");
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    if (!(rho_grid[i] > 0.0) || (i > 0 && !(rho_grid[i] < rho_grid[i - 1]))) {
      throw std::invalid_argument("limit_check: rho grid must be positive and strictly decreasing");
    }
  }
  LimitCheck out;
  out.theta = theta;
  out.rho_grid = rho_grid;
  for (double rho : rho_grid) {
    const auto ji = j_and_i(domain, f0, rho, theta, cfg);
    out.I_values.push_back(ji.I);
    out.J_values.push_back(ji.J);
  }
  const auto extrapolate = [&](const std::vector<double>& v, std::size_t k) {
    const double a = rho_grid[k];
    const double b = rho_grid[k + 1];
    return (a * v[k + 1] - b * v[k]) / (a - b);
  };
  const std::size_t last = rho_grid.size() - 2;
  out.I_limit = extrapolate(out.I_values, last);
  out.J_limit = extrapolate(out.J_values, last);
  if (last > 0) {
    const double di = std::abs(out.I_limit - extrapolate(out.I_values, last - 1));
    const double dj = std::abs(out.J_limit - extrapolate(out.J_values, last - 1));
    out.converged = di < 1e-6 * std::max(1.0, std::abs(out.I_limit)) && dj < 1e-6 * std::max(1.0, std::abs(out.J_limit));
  }
  const double w = omega_theta(domain, theta);
  out.pv = pv_integral(f0).value;
  out.predicted_J_limit = std::sin(w - theta) * out.pv;
  out.corrected_J_limit = -kPi * std::cos(theta - w) * f0.deriv1(0.0) + out.predicted_J_limit;
  out.gap = std::abs(out.J_limit - out.predicted_J_limit);
  out.corrected_gap = std::abs(out.J_limit - out.corrected_J_limit);
  return out;
}

Diagnosis diagnose(const std::vector<double>& rho_min_grid, const std::vector<double>& values,
                   double theoretical_slope) {
  if (rho_min_grid.size() != values.size()) throw std::invalid_argument("diagnose: grid and values differ in size");
  Diagnosis d;
  const std::size_t n = values.size();
  if (std::any_of(values.begin(), values.end(), [](double v) { return !std::isfinite(v); })) {
    d.reason = "non-finite integral value";
    return d;
  }
  if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) {
    d.verdict = Verdict::finite;
    d.reason = "integral vanishes identically";
    d.last_relative_change = 0.0;
    d.cauchy_stable = true;
    d.monotone = true;
    d.extrapolated_limit = 0.0;
    return d;
  }
  if (n >= 2) {
    d.last_relative_change = std::abs(values[n - 1] - values[n - 2]) / std::abs(values[n - 1]);
    d.cauchy_stable = d.last_relative_change < 1e-3;
  }
  if (std::all_of(values.begin(), values.end(), [](double v) { return v > 0.0; }) && n >= 2) {
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < n; ++k) {
      lx.push_back(std::log10(rho_min_grid[k]));
      ly.push_back(std::log10(values[k]));
    }
    d.integral_slope = fit_line(lx, ly).slope;
  }
  if (n < 3) {
    d.reason = "fewer than two increments";
    return d;
  }
  std::vector<double> inc;
  for (std::size_t k = 1; k < n; ++k) inc.push_back(values[k] - values[k - 1]);
  d.monotone = std::all_of(inc.begin(), inc.end(), [](double v) { return v > 0.0; });
  if (!d.monotone) {
    d.reason = "non-positive increment";
    return d;
  }
  std::vector<double> lx, ly;
  for (std::size_t k = 1; k < n; ++k) {
    lx.push_back(std::log10(rho_min_grid[k]));
    ly.push_back(std::log10(inc[k - 1]));
  }
  const LineFit fit = fit_line(lx, ly);
  d.fitted_slope = fit.slope;
  d.slope_stderr = fit.slope_stderr;
  d.fit_rms = fit.rms_residual;
  d.divergence_exponent = -fit.slope;
  if (fit.rms_residual > 0.1) {
    d.reason = "fit residual above 0.1";
    return d;
  }
  if (fit.slope > std::max(0.02, 3.0 * fit.slope_stderr)) {
    d.verdict = Verdict::finite;
    d.reason = "increments decay geometrically";
    const double q = inc.back() / inc[inc.size() - 2];
    if (q > 0.0 && q < 1.0) d.extrapolated_limit = values.back() + inc.back() * q / (1.0 - q);
    return d;
  }
  if (fit.slope <= 0.02 && std::abs(fit.slope - theoretical_slope) <= 0.1) {
    d.verdict = Verdict::divergent;
    d.reason = "increments follow the divergence rate";
    return d;
  }
  d.reason = "increments neither decay nor follow the divergence rate";
  return d;
}

RegularityReport scan_sigma(const WedgeDomain& domain, const BoundaryFunction& f0,
                            const std::vector<double>& sigma_grid, const std::vector<double>& rho_min_grid,
                            const RegionPartition& partition, const TableOptions& options) {
  for (double s : sigma_grid) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("sigma must lie in (0, 1)");
  }
  TableOptions opts = options;
  if (f0.numerical_derivatives) {
    for (QuadratureConfig* c : {&opts.inner, &opts.angular}) {
      c->rel_tol = std::max(c->rel_tol, kNumericalDerivativeTol);
      c->abs_tol = std::max(c->abs_tol, 1e-7);
    }
  }
  const WeightedIntegralTable table(domain, f0, partition, sigma_grid, rho_min_grid, opts);
  RegularityReport report;
  report.f0_name = f0.name;
  report.interior_angle = domain.interior_angle();
  report.beta = domain.beta();
  report.delta = partition.delta;
  report.include_edges = options.include_edges;
  report.sigma_grid = sigma_grid;
  report.rho_min_grid = rho_min_grid;
  report.quadrature_converged = table.converged();
  report.numerical_derivatives = f0.numerical_derivatives;

  for (std::size_t s = 0; s < sigma_grid.size(); ++s) {
    SigmaResult r;
    r.sigma = sigma_grid[s];
    r.theoretical_slope = theoretical_exponent(domain, r.sigma);
    for (std::size_t k = 0; k < rho_min_grid.size(); ++k) {
      const auto p = table.parts(s, k);
      r.k1_values.push_back(p.k1);
      r.k2_values.push_back(p.k2);
      r.k3_values.push_back(p.k3);
      r.values.push_back(p.total());
    }
    r.diagnosis = diagnose(rho_min_grid, r.values, r.theoretical_slope);
    report.results.push_back(std::move(r));
  }

  for (const auto& r : report.results) {
    if (r.diagnosis.verdict == Verdict::finite &&
        (std::isnan(report.largest_finite_sigma) || r.sigma > report.largest_finite_sigma)) {
      report.largest_finite_sigma = r.sigma;
    }
    if (r.diagnosis.verdict == Verdict::divergent &&
        (std::isnan(report.smallest_divergent_sigma) || r.sigma < report.smallest_divergent_sigma)) {
      report.smallest_divergent_sigma = r.sigma;
    }
  }
  if (!std::isnan(report.largest_finite_sigma) && !std::isnan(report.smallest_divergent_sigma)) {
    report.verdicts_ordered = report.largest_finite_sigma < report.smallest_divergent_sigma;
    if (report.verdicts_ordered) {
      report.sigma_crit_estimate = 0.5 * (report.largest_finite_sigma + report.smallest_divergent_sigma);
    }
  }
  return report;
}

}  // namespace lshape
