#pragma once

// Globally adaptive Gauss-Kronrod (10/21) quadrature with QUADPACK error scaling,
// vector-valued so that integrals sharing an expensive argument can reuse it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace lshape {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;
};

template <std::size_t N>
struct QuadResultN {
  std::array<double, N> value{};
  double abs_error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

/// n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int n);

namespace detail {

inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525634725, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the nodes kXgk[1], kXgk[3], ..., kXgk[9].
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <std::size_t N>
struct Segment {
  double a;
  double b;
  std::array<double, N> value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <std::size_t N, class F>
Segment<N> gk21(F& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<std::array<double, N>, 21> fv;
  fv[20] = f(center);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    fv[2 * j] = f(center - dx);
    fv[2 * j + 1] = f(center + dx);
  }

  Segment<N> seg{a, b, {}, 0.0};
  for (std::size_t c = 0; c < N; ++c) {
    double resk = kWgk[10] * fv[20][c];
    double resabs = std::abs(resk);
    double resg = 0.0;
    for (int j = 0; j < 10; ++j) {
      const double sum = fv[2 * j][c] + fv[2 * j + 1][c];
      resk += kWgk[j] * sum;
      resabs += kWgk[j] * (std::abs(fv[2 * j][c]) + std::abs(fv[2 * j + 1][c]));
      if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fv[20][c] - reskh);
    for (int j = 0; j < 10; ++j) {
      resasc += kWgk[j] * (std::abs(fv[2 * j][c] - reskh) + std::abs(fv[2 * j + 1][c] - reskh));
    }
    const double ah = std::abs(half);
    resabs *= ah;
    resasc *= ah;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    seg.value[c] = resk * half;
    seg.error = std::max(seg.error, err);
  }
  return seg;
}

}  // namespace detail

/// Integrates a vector-valued f over [points.front(), points.back()], starting from the
/// subintervals delimited by the sorted breakpoints. Stops when the summed error
/// estimate is below max(abs_tol, rel_tol * max_c |I_c|).
template <std::size_t N, class F>
QuadResultN<N> integrate_n(F&& f, std::span<const double> points, const QuadratureConfig& cfg) {
  QuadResultN<N> out;
  if (points.size() < 2) return out;

  std::priority_queue<detail::Segment<N>> active;
  std::vector<detail::Segment<N>> frozen;
  const auto tolerance = [&](const std::array<double, N>& total) {
    double m = 0.0;
    for (double v : total) m = std::max(m, std::abs(v));
    return std::max(cfg.abs_tol, cfg.rel_tol * m);
  };

  std::array<double, N> total{};
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i + 1] > points[i])) continue;
    auto seg = detail::gk21<N>(f, points[i], points[i + 1]);
    out.evaluations += 21;
    for (std::size_t c = 0; c < N; ++c) total[c] += seg.value[c];
    total_error += seg.error;
    active.push(seg);
  }

  int subdivisions = static_cast<int>(active.size());
  while (!active.empty() && total_error > tolerance(total)) {
    if (subdivisions >= cfg.max_subdivisions) {
      out.converged = false;
      break;
    }
    auto worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    // Intervals that can no longer be split in double precision are kept as they are.
    if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e-15 * std::abs(mid)) {
      frozen.push_back(worst);
      continue;
    }
    auto left = detail::gk21<N>(f, worst.a, mid);
    auto right = detail::gk21<N>(f, mid, worst.b);
    out.evaluations += 42;
    ++subdivisions;
    for (std::size_t c = 0; c < N; ++c) total[c] += left.value[c] + right.value[c] - worst.value[c];
    total_error += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
  }

  // Re-sum from the segments to shed the drift of the running updates.
  total.fill(0.0);
  total_error = 0.0;
  const auto add = [&](const detail::Segment<N>& s) {
    for (std::size_t c = 0; c < N; ++c) total[c] += s.value[c];
    total_error += s.error;
  };
  for (const auto& s : frozen) add(s);
  while (!active.empty()) {
    add(active.top());
    active.pop();
  }
  out.value = total;
  out.abs_error = total_error;
  if (total_error > tolerance(total)) out.converged = false;
  return out;
}

template <class F>
QuadResult integrate(F&& f, std::span<const double> points, const QuadratureConfig& cfg) {
  auto wrapped = [&f](double x) { return std::array<double, 1>{f(x)}; };
  const auto r = integrate_n<1>(wrapped, points, cfg);
  return {r.value[0], r.abs_error, r.evaluations, r.converged};
}

template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadratureConfig& cfg) {
  const std::array<double, 2> pts{a, b};
  return integrate(std::forward<F>(f), std::span<const double>(pts), cfg);
}

}  // namespace lshape
