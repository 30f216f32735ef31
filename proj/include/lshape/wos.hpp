#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lshape/geometry.hpp"
#include "lshape/kernels.hpp"
#include "lshape/rng.hpp"

namespace lshape {

struct WosConfig {
  double epsilon = 1e-6;
  std::size_t max_steps = 1'000'000;
};

struct WosExit {
  ExitSample sample;
  std::size_t steps = 0;
  /// max_steps reached before absorption; sample is then meaningless.
  bool censored = false;
};

/// One walk-on-spheres path from the interior point x. Each step jumps to a uniform
/// point on the circle of radius min(dist(x, boundary), 10 (1 + |x|)); the walk is
/// absorbed within epsilon of the boundary and projected onto the nearest boundary
/// point, whose u coordinate is taken under the conformal-exact identification.
WosExit wos_exit(RngStream& rng, const WedgeDomain& domain, const CartesianPoint& x, const WosConfig& cfg = {});

/// Walks per random stream in wos_sample.
inline constexpr std::size_t kWosChunk = 1024;

struct WosBatch {
  std::vector<ExitSample> samples;  ///< uncensored exits, in walk order
  std::vector<std::size_t> steps;   ///< steps of every walk, censored ones included
  std::size_t censored = 0;
  double mean_steps = 0.0;
  double median_steps = 0.0;
};

/// n walks from x; walk block k uses stream (seed, k), so the batch does not depend on
/// the thread count.
WosBatch wos_sample(const WedgeDomain& domain, const CartesianPoint& x, std::size_t n, std::uint64_t seed,
                    const WosConfig& cfg = {}, int threads = 1);

struct KsValidation {
  std::size_t n = 0;
  double location = 0.0;
  double scale = 0.0;
  double statistic = 0.0;
  double critical_value = 0.0;
  bool reject = false;
};

/// One-sample KS test of the exit points, pushed forward to the real axis under the
/// given convention, against Cauchy(phi1(x), |phi2(x)|) at the 1% level.
/// Throws std::invalid_argument for fewer than 1000 samples.
KsValidation ks_validate(const std::vector<ExitSample>& samples, const WedgeDomain& domain, const PolarPoint& x,
                         BoundaryConvention convention = BoundaryConvention::conformal_exact);

}  // namespace lshape
