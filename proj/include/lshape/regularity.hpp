#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "lshape/boundary_data.hpp"
#include "lshape/geometry.hpp"
#include "lshape/quadrature.hpp"

namespace lshape {

/// Split of the unit-disk part of the domain into an interior sector K1 and two edge
/// sectors of angular width delta: K2 along the ray at start_angle, K3 along the ray at 2pi.
struct RegionPartition {
  double delta = 0.1;
};

enum class Region { k1, k2, k3, outside };
const char* to_string(Region region);

/// Throws std::invalid_argument unless 0 < delta < omega / 2.
void validate(const WedgeDomain& domain, const RegionPartition& partition);
Region region_of(const WedgeDomain& domain, const RegionPartition& partition, const PolarPoint& p);

/// Exponent of rho_min in the K1 integral of a generic datum: 2 - 2 sigma / beta
/// (2 - 3 sigma for the L-shape). Negative exponents mean divergence.
double theoretical_exponent(const WedgeDomain& domain, double sigma);

/// Prefactor of the K1 integral in (rho, theta): beta (1 - beta)^2 / pi^2 (2/(27 pi^2) for the L-shape).
double k1_prefactor(const WedgeDomain& domain);

/// Default scan grids.
std::vector<double> default_sigma_grid();
std::vector<double> default_rho_min_grid();

struct WeightedIntegralParts {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double total() const { return k1 + k2 + k3; }
};

struct TableOptions {
  bool include_edges = true;
  /// Gauss-Legendre nodes per panel in log rho; panels are the decades between 1 and
  /// the smallest cutoff, split further at every cutoff.
  int nodes_per_panel = 16;
  QuadratureConfig inner{1e-10, 1e-8, 2000};
  QuadratureConfig angular{1e-14, 1e-7, 400};
  int threads = 1;
};

/// Weighted second-derivative integrals over the partition, for every (sigma, rho_min)
/// pair of the given grids (sigma in (0, 1]). The angular integrals at each rho node are computed once
/// and shared by all cutoffs; K1 is also shared by all sigma.
///
///   K1: k1_prefactor * int_{K1} rho^{1 - 2 sigma / beta} |J + I|^2 drho dtheta
///   K2, K3: the same integrand weighted by dist((1, theta), boundary)^{2 - 2 sigma}.
class WeightedIntegralTable {
 public:
  WeightedIntegralTable(const WedgeDomain& domain, const BoundaryFunction& f0, const RegionPartition& partition,
                        std::vector<double> sigma_grid, std::vector<double> rho_min_grid,
                        const TableOptions& options = {});

  const std::vector<double>& sigma_grid() const { return sigma_grid_; }
  const std::vector<double>& rho_min_grid() const { return rho_min_grid_; }
  WeightedIntegralParts parts(std::size_t sigma_index, std::size_t rho_index) const;
  bool converged() const { return converged_; }
  std::size_t rho_nodes() const { return rho_.size(); }

 private:
  std::vector<double> sigma_grid_;
  std::vector<double> rho_min_grid_;
  std::vector<double> rho_;
  std::vector<double> weight_;        // d(log rho) weights
  std::vector<std::size_t> cutoff_;   // number of nodes above each rho_min
  std::vector<double> g1_;            // K1 angular integral per node
  std::vector<std::vector<double>> g2_, g3_;  // [sigma][node]
  double prefactor_ = 0.0;
  double beta_ = 0.0;
  bool converged_ = true;
};

double weighted_integral_K1(const WedgeDomain& domain, const BoundaryFunction& f0, double sigma, double delta,
                            double rho_min, const TableOptions& options = {});

WeightedIntegralParts weighted_integral_full(const WedgeDomain& domain, const BoundaryFunction& f0, double sigma,
                                             const RegionPartition& partition, double rho_min,
                                             const TableOptions& options = {});

struct SobolevFirstOrder {
  double l2_squared = 0.0;
  double grad_squared = 0.0;
  double l2_squared_coarse = 0.0;
  double grad_squared_coarse = 0.0;
  double relative_change = 0.0;
  bool stable = false;
  int nodes = 0;
};

/// Squared L2 norms of f and grad f over the unit-disk part of the domain, by tensor
/// Gauss-Legendre quadrature in (rho, theta) with n and 2n nodes per direction.
SobolevFirstOrder sobolev_first_order(const WedgeDomain& domain, const BoundaryFunction& f0, int nodes = 24,
                                      const QuadratureConfig& cfg = {});

struct LimitCheck {
  double theta = 0.0;
  std::vector<double> rho_grid;
  std::vector<double> I_values;
  std::vector<double> J_values;
  double I_limit = 0.0;
  double J_limit = 0.0;
  double pv = 0.0;
  /// sin(omega_theta - theta) * pv.
  double predicted_J_limit = 0.0;
  /// -pi cos(theta - omega_theta) f0'(0) + sin(omega_theta - theta) * pv.
  double corrected_J_limit = 0.0;
  double gap = 0.0;
  double corrected_gap = 0.0;
  /// The last two extrapolations agree to 1e-6 (relative to max(1, |value|)).
  bool converged = false;
};

std::vector<double> default_limit_rho_grid();

/// Values of I and J along a decreasing rho grid at fixed theta, extrapolated linearly
/// in rho to rho = 0, against the predicted limits.
LimitCheck limit_check(const WedgeDomain& domain, const BoundaryFunction& f0, double theta,
                       const std::vector<double>& rho_grid = default_limit_rho_grid(), const QuadratureConfig& cfg = {});

enum class Verdict { finite, divergent, inconclusive };
const char* to_string(Verdict v);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Diagnosis of one sigma from the integral values along the decreasing cutoff grid.
///
/// Decade increments D_k = I(rho_k) - I(rho_{k-1}) behave like rho_k^{s}; s is fitted on
/// log10 D against log10 rho_min. The verdict is
///   finite       when all values vanish, or s > max(0.02, 3 SE(s));
///   divergent    when s <= 0.02, |s - theoretical| <= 0.1 and I grows monotonically;
///   inconclusive otherwise, including non-finite values, non-positive increments,
///                fewer than two increments, or a fit residual above 0.1.
struct Diagnosis {
  double fitted_slope = kNaN;
  double slope_stderr = kNaN;
  double fit_rms = kNaN;
  /// -fitted_slope: the rate at which the integral grows as rho_min decreases.
  double divergence_exponent = kNaN;
  /// Slope of log I against log rho_min over the whole grid.
  double integral_slope = kNaN;
  /// Relative change of I across the last cutoff interval.
  double last_relative_change = kNaN;
  bool cauchy_stable = false;  ///< last_relative_change < 1e-3
  bool monotone = false;
  /// Geometric-tail extrapolation of I as rho_min -> 0 (finite verdicts only).
  double extrapolated_limit = kNaN;
  Verdict verdict = Verdict::inconclusive;
  std::string reason;
};

Diagnosis diagnose(const std::vector<double>& rho_min_grid, const std::vector<double>& values,
                   double theoretical_slope);

struct SigmaResult {
  double sigma = 0.0;
  double theoretical_slope = 0.0;
  std::vector<double> values;  ///< total over the partition (K1 only when edges are excluded)
  std::vector<double> k1_values;
  std::vector<double> k2_values;
  std::vector<double> k3_values;
  Diagnosis diagnosis;
};

struct RegularityReport {
  std::string f0_name;
  double interior_angle = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  bool include_edges = true;
  std::vector<double> sigma_grid;
  std::vector<double> rho_min_grid;
  std::vector<SigmaResult> results;
  double largest_finite_sigma = kNaN;
  double smallest_divergent_sigma = kNaN;
  /// Midpoint of the two above when they bracket; NaN otherwise.
  double sigma_crit_estimate = kNaN;
  /// No finite verdict above a divergent one.
  bool verdicts_ordered = true;
  bool quadrature_converged = true;
  /// The reduction hypothesis (trace in the required class) is not checked for data
  /// with finite-difference derivatives.
  bool numerical_derivatives = false;
};

/// Relative quadrature tolerance used for data with finite-difference derivatives.
inline constexpr double kNumericalDerivativeTol = 1e-3;

/// Throws std::invalid_argument for empty grids, sigma outside (0, 1), or cutoffs that
/// are not strictly decreasing within (0, 1). Data with finite-difference derivatives
/// are integrated with relative tolerances of at least kNumericalDerivativeTol.
RegularityReport scan_sigma(const WedgeDomain& domain, const BoundaryFunction& f0,
                            const std::vector<double>& sigma_grid = default_sigma_grid(),
                            const std::vector<double>& rho_min_grid = default_rho_min_grid(),
                            const RegionPartition& partition = {}, const TableOptions& options = {});

}  // namespace lshape
