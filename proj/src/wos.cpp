#include "lshape/wos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lshape/parallel.hpp"
#include "lshape/stats.hpp"

namespace lshape {

WosExit wos_exit(RngStream& rng, const WedgeDomain& domain, const CartesianPoint& x, const WosConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("wos: epsilon must be positive");
  if (!domain.is_interior(to_polar(x)) || distance_to_boundary(domain, x) <= 0.0) {
    throw std::invalid_argument("wos: starting point must be interior");
  }
  WosExit out;
  CartesianPoint p = x;
  for (std::size_t step = 0; step < cfg.max_steps; ++step) {
    const double d = distance_to_boundary(domain, p);
    if (d < cfg.epsilon) {
      const CartesianPoint b = nearest_boundary_point(domain, p);
      out.sample = make_exit_sample(domain, boundary_pushforward(domain, b));
      out.sample.point = b;
      out.steps = step;
      return out;
    }
    const double radius = std::min(d, 10.0 * (1.0 + std::hypot(p.x1, p.x2)));
    const double angle = 2.0 * std::numbers::pi * rng.uniform_open();
    p.x1 += radius * std::cos(angle);
    p.x2 += radius * std::sin(angle);
  }
  out.steps = cfg.max_steps;
  out.censored = true;
  return out;
}

WosBatch wos_sample(const WedgeDomain& domain, const CartesianPoint& x, std::size_t n, std::uint64_t seed,
                    const WosConfig& cfg, int threads) {
  const std::size_t chunks = (n + kWosChunk - 1) / kWosChunk;
  std::vector<WosExit> exits(n);
  parallel_for(chunks, threads, [&](std::size_t k) {
    RngStream rng(seed, k);
    const std::size_t end = std::min(n, (k + 1) * kWosChunk);
    for (std::size_t i = k * kWosChunk; i < end; ++i) exits[i] = wos_exit(rng, domain, x, cfg);
  });
  WosBatch batch;
  double total = 0.0;
  for (const auto& e : exits) {
    batch.steps.push_back(e.steps);
    total += static_cast<double>(e.steps);
    if (e.censored) {
      ++batch.censored;
    } else {
      batch.samples.push_back(e.sample);
    }
  }
  if (n > 0) {
    batch.mean_steps = total / static_cast<double>(n);
    std::vector<std::size_t> sorted = batch.steps;
    std::sort(sorted.begin(), sorted.end());
    batch.median_steps = n % 2 == 1 ? static_cast<double>(sorted[n / 2])
                                    : 0.5 * static_cast<double>(sorted[n / 2 - 1] + sorted[n / 2]);
  }
  return batch;
}

KsValidation ks_validate(const std::vector<ExitSample>& samples, const WedgeDomain& domain, const PolarPoint& x,
                         BoundaryConvention convention) {
  if (samples.size() < 1000) throw std::invalid_argument("ks_validate: need at least 1000 samples");
  if (!domain.is_interior(x)) throw std::invalid_argument("ks_validate: starting point must be interior");
  const HalfPlanePoint w = conformal_map(domain, x);
  KsValidation out;
  out.n = samples.size();
  out.location = w.phi1;
  out.scale = -w.phi2;
  std::vector<double> u;
  u.reserve(samples.size());
  for (const auto& s : samples) u.push_back(boundary_pushforward(domain, s.point, convention));
  out.statistic = ks_statistic(std::move(u), [&](double t) { return cauchy_cdf(t, out.location, out.scale); });
  out.critical_value = ks_critical_value_1pct(out.n);
  out.reject = out.statistic >= out.critical_value;
  return out;
}

}  // namespace lshape
