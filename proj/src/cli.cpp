#include "lshape/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lshape/boundary_data.hpp"
#include "lshape/geometry.hpp"
#include "lshape/kernels.hpp"
#include "lshape/newtonian.hpp"
#include "lshape/parallel.hpp"
#include "lshape/regularity.hpp"
#include "lshape/solver.hpp"
#include "lshape/wos.hpp"

namespace lshape::cli {

namespace {

using json = nlohmann::ordered_json;

struct Common {
  double omega = 1.5 * std::numbers::pi;
  std::string format = "json";
  std::string out_path;
  int threads = 0;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Output {
  json result;
  Table table;
  int code = 0;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(std::size_t v) { return std::to_string(v); }
std::string flag(bool b) { return b ? "true" : "false"; }

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--omega", c.omega, "interior angle in radians, in (pi, 2pi)")->capture_default_str();
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  sub->add_option("--out", c.out_path, "write output to this file instead of stdout");
  sub->add_option("--threads", c.threads, "worker cap (default: WEDGE_THREADS or hardware concurrency)")
      ->check(CLI::NonNegativeNumber);
}

json common_config(const Common& c) { return {{"omega", c.omega}, {"format", c.format}}; }

WedgeDomain make_domain(double omega) {
  if (!(omega > std::numbers::pi && omega < 2.0 * std::numbers::pi)) {
    throw UsageError("--omega must lie in (pi, 2pi)");
  }
  return WedgeDomain(omega);
}

BoundaryFunction make_f0(const std::string& name) {
  try {
    return catalog(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

PolarPoint interior_point(const WedgeDomain& domain, double r, double theta) {
  const PolarPoint p{r, theta};
  if (!(r > 0.0) || !domain.is_interior(p)) {
    throw UsageError("point (r, theta) must lie strictly inside the domain (theta in (2pi - omega, 2pi))");
  }
  if (distance_to_boundary(domain, to_cartesian(p)) < kMinBoundaryDistance) {
    throw UsageError("point is closer than 1e-6 to the boundary");
  }
  return p;
}

BoundaryConvention convention_of(const std::string& name) {
  try {
    return parse_convention(name.c_str());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

json report_json(const RegularityReport& rep) {
  json results = json::array();
  for (const auto& r : rep.results) {
    const auto& d = r.diagnosis;
    results.push_back({{"sigma", r.sigma},
                       {"theoretical_slope", r.theoretical_slope},
                       {"values", r.values},
                       {"k1", r.k1_values},
                       {"k2", r.k2_values},
                       {"k3", r.k3_values},
                       {"fitted_slope", d.fitted_slope},
                       {"slope_stderr", d.slope_stderr},
                       {"fit_rms", d.fit_rms},
                       {"divergence_exponent", d.divergence_exponent},
                       {"integral_slope", d.integral_slope},
                       {"last_relative_change", d.last_relative_change},
                       {"cauchy_stable", d.cauchy_stable},
                       {"monotone", d.monotone},
                       {"extrapolated_limit", d.extrapolated_limit},
                       {"verdict", to_string(d.verdict)},
                       {"reason", d.reason}});
  }
  return {{"f0", rep.f0_name},
          {"beta", rep.beta},
          {"sigma_grid", rep.sigma_grid},
          {"rho_min_grid", rep.rho_min_grid},
          {"results", results},
          {"largest_finite_sigma", rep.largest_finite_sigma},
          {"smallest_divergent_sigma", rep.smallest_divergent_sigma},
          {"sigma_crit_estimate", rep.sigma_crit_estimate},
          {"verdicts_ordered", rep.verdicts_ordered},
          {"quadrature_converged", rep.quadrature_converged},
          {"numerical_derivatives", rep.numerical_derivatives}};
}

Table report_table(const RegularityReport& rep) {
  Table t;
  t.header = {"sigma", "rho_min", "value", "k1", "k2", "k3", "theoretical_slope", "fitted_slope", "divergence_exponent",
              "verdict"};
  for (const auto& r : rep.results) {
    for (std::size_t k = 0; k < rep.rho_min_grid.size(); ++k) {
      t.rows.push_back({num(r.sigma), num(rep.rho_min_grid[k]), num(r.values[k]), num(r.k1_values[k]),
                        num(r.k2_values[k]), num(r.k3_values[k]), num(r.theoretical_slope),
                        num(r.diagnosis.fitted_slope), num(r.diagnosis.divergence_exponent),
                        to_string(r.diagnosis.verdict)});
    }
  }
  return t;
}

std::string render(const std::string& command, const json& config, const Output& o, const std::string& format) {
  std::ostringstream s;
  if (format == "json") {
    json doc = {{"version", kVersion}, {"command", command}, {"config", config}, {"result", o.result}};
    s << doc.dump(2) << '\n';
    return s.str();
  }
  s << "# lshape " << kVersion << " " << command << '\n';
  s << "# config " << config.dump() << '\n';
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) s << (i ? "," : "") << cells[i];
    s << '\n';
  };
  line(o.table.header);
  for (const auto& r : o.table.rows) line(r);
  return s.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dirichlet problem on the L-shaped domain: quadrature, Monte Carlo, walk-on-spheres, regularity"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);

  Common common;
  std::string f0_name = "gaussian";
  double r = 1.0;
  double theta = 1.25 * std::numbers::pi;
  std::size_t n = 100000;
  std::uint64_t seed = 1;
  std::string convention = "conformal-exact";

  // solve
  auto* solve = app.add_subcommand("solve", "evaluate the solution at an interior point");
  add_common(solve, common);
  std::string method = "quadrature";
  bool derivatives = false;
  solve->add_option("--f0", f0_name, "boundary datum")->capture_default_str();
  solve->add_option("--r", r, "radius")->capture_default_str();
  solve->add_option("--theta", theta, "angle in radians")->capture_default_str();
  solve->add_option("--method", method)->check(CLI::IsMember({"quadrature", "mc", "both"}))->capture_default_str();
  solve->add_option("--n", n, "Monte Carlo samples")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
  solve->add_option("--seed", seed);
  solve->add_flag("--derivatives", derivatives, "also report the gradient and d2f/dx1^2");

  // exit-dist
  auto* exit_dist = app.add_subcommand("exit-dist", "sample exit positions");
  add_common(exit_dist, common);
  std::string sampler = "conformal";
  WosConfig wos_cfg;
  exit_dist->add_option("--r", r)->capture_default_str();
  exit_dist->add_option("--theta", theta)->capture_default_str();
  exit_dist->add_option("--n", n)->check(CLI::PositiveNumber);
  exit_dist->add_option("--seed", seed);
  exit_dist->add_option("--sampler", sampler)->check(CLI::IsMember({"conformal", "wos"}))->capture_default_str();
  exit_dist->add_option("--convention", convention)->capture_default_str();
  exit_dist->add_option("--epsilon", wos_cfg.epsilon)->check(CLI::PositiveNumber);
  exit_dist->add_option("--max-steps", wos_cfg.max_steps)->check(CLI::PositiveNumber);

  // wos-validate
  auto* wos_validate = app.add_subcommand("wos-validate", "KS test of walk-on-spheres exits against the Cauchy law");
  add_common(wos_validate, common);
  wos_validate->add_option("--r", r)->capture_default_str();
  wos_validate->add_option("--theta", theta)->capture_default_str();
  wos_validate->add_option("--n", n)->check(CLI::Range(std::size_t{1000}, std::size_t{1} << 40));
  wos_validate->add_option("--seed", seed);
  wos_validate->add_option("--convention", convention, "pushforward used for the test")->capture_default_str();
  wos_validate->add_option("--epsilon", wos_cfg.epsilon)->check(CLI::PositiveNumber);
  wos_validate->add_option("--max-steps", wos_cfg.max_steps)->check(CLI::PositiveNumber);

  // regularity
  auto* regularity = app.add_subcommand("regularity", "weighted-integral scan over sigma");
  add_common(regularity, common);
  std::vector<double> sigma_grid = default_sigma_grid();
  std::vector<double> rho_min_grid = default_rho_min_grid();
  double delta = RegionPartition{}.delta;
  bool no_edges = false;
  int panel_nodes = TableOptions{}.nodes_per_panel;
  regularity->add_option("--f0", f0_name)->capture_default_str();
  regularity->add_option("--sigma", sigma_grid)->delimiter(',');
  regularity->add_option("--rho-min", rho_min_grid)->delimiter(',');
  regularity->add_option("--delta", delta)->capture_default_str();
  regularity->add_flag("--no-edges", no_edges, "K1 only");
  regularity->add_option("--panel-nodes", panel_nodes)->check(CLI::Range(1, 64));

  // limits
  auto* limits = app.add_subcommand("limits", "limits of I and J as rho -> 0");
  add_common(limits, common);
  std::vector<double> thetas{1.5 * std::numbers::pi};
  std::vector<double> rho_grid = default_limit_rho_grid();
  limits->add_option("--f0", f0_name)->capture_default_str();
  limits->add_option("--theta", thetas)->delimiter(',');
  limits->add_option("--rho", rho_grid)->delimiter(',');

  // pv
  auto* pv = app.add_subcommand("pv", "principal value of f0'(x)/x");
  add_common(pv, common);
  std::vector<double> eps_grid = default_pv_epsilons();
  pv->add_option("--f0", f0_name)->capture_default_str();
  pv->add_option("--eps", eps_grid)->delimiter(',');

  // poisson-reduce
  auto* reduce = app.add_subcommand("poisson-reduce", "reduce a Poisson problem with a bump source to a Dirichlet one");
  add_common(reduce, common);
  double cx1 = -1.0, cx2 = -1.0, radius = 0.1, mass = 1.0;
  std::vector<double> u_grid{-4.0, -1.0, -0.25, 0.25, 1.0, 4.0};
  bool scan = false;
  reduce->add_option("--center-x1", cx1)->capture_default_str();
  reduce->add_option("--center-x2", cx2)->capture_default_str();
  reduce->add_option("--radius", radius)->check(CLI::PositiveNumber)->capture_default_str();
  reduce->add_option("--mass", mass)->capture_default_str();
  reduce->add_option("--u", u_grid)->delimiter(',');
  reduce->add_option("--convention", convention)->capture_default_str();
  reduce->add_flag("--scan", scan, "run the regularity scan on the reduced datum");
  reduce->add_option("--sigma", sigma_grid)->delimiter(',');
  reduce->add_option("--rho-min", rho_min_grid)->delimiter(',');
  reduce->add_option("--delta", delta)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const int threads = common.threads > 0 ? common.threads : default_thread_count();
  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  json config = common_config(common);
  Output o;

  try {
    const WedgeDomain domain = make_domain(common.omega);

    if (sub == solve) {
      const BoundaryFunction f0 = make_f0(f0_name);
      const PolarPoint x = interior_point(domain, r, theta);
      config.update({{"f0", f0_name}, {"r", r}, {"theta", theta}, {"method", method}, {"derivatives", derivatives}});
      if (method != "quadrature") config.update({{"n", n}, {"seed", seed}});
      const auto w = conformal_map(domain, x);
      o.result = {{"phi1", w.phi1}, {"phi2", w.phi2}};
      o.table.header = {"phi1", "phi2"};
      std::vector<std::string> row{num(w.phi1), num(w.phi2)};
      double q = kNaN;
      if (method != "mc") {
        const auto res = solve_quadrature(domain, f0, x);
        q = res.value;
        o.result.update({{"quadrature", {{"value", res.value}, {"abs_error", res.abs_error},
                                         {"converged", res.converged}}}});
        o.table.header.insert(o.table.header.end(), {"quadrature", "abs_error", "converged"});
        row.insert(row.end(), {num(res.value), num(res.abs_error), flag(res.converged)});
      }
      if (method != "quadrature") {
        const auto mc = solve_mc_streams(domain, f0, x, n, seed, threads);
        o.result.update({{"mc", {{"mean", mc.mean}, {"stderr", mc.std_error}, {"n", mc.n}}}});
        o.table.header.insert(o.table.header.end(), {"mc_mean", "mc_stderr", "n"});
        row.insert(row.end(), {num(mc.mean), num(mc.std_error), num(mc.n)});
        if (method == "both") {
          const bool agree = std::abs(mc.mean - q) <= 3.0 * mc.std_error;
          o.result["agree_within_3_stderr"] = agree;
          o.table.header.push_back("agree_within_3_stderr");
          row.push_back(flag(agree));
        }
      }
      if (derivatives) {
        const auto g = grad(domain, f0, x);
        const double d11 = second_deriv_x1x1(domain, f0, x);
        o.result.update({{"grad", {g.d1, g.d2}}, {"d2f_dx1dx1", d11}});
        o.table.header.insert(o.table.header.end(), {"df_dx1", "df_dx2", "d2f_dx1dx1"});
        row.insert(row.end(), {num(g.d1), num(g.d2), num(d11)});
      }
      o.table.rows.push_back(row);

    } else if (sub == exit_dist || sub == wos_validate) {
      const PolarPoint x = interior_point(domain, r, theta);
      const BoundaryConvention conv = convention_of(convention);
      config.update({{"r", r}, {"theta", theta}, {"n", n}, {"seed", seed}, {"convention", convention}});
      if (sub == wos_validate || sampler == "wos") {
        config.update({{"epsilon", wos_cfg.epsilon}, {"max_steps", wos_cfg.max_steps}});
      }
      if (sub == exit_dist) {
        config["sampler"] = sampler;
        std::vector<ExitSample> samples;
        std::size_t censored = 0;
        if (sampler == "wos") {
          auto batch = wos_sample(domain, to_cartesian(x), n, seed, wos_cfg, threads);
          censored = batch.censored;
          for (auto& s : batch.samples) s = make_exit_sample(domain, boundary_pushforward(domain, s.point, conv), conv);
          samples = std::move(batch.samples);
        } else {
          RngStream rng(seed, 0);
          for (std::size_t i = 0; i < n; ++i) samples.push_back(exit_sample(rng, domain, x, conv));
        }
        std::size_t x_arm = 0;
        json rows = json::array();
        o.table.header = {"u", "x1", "x2", "arm"};
        for (const auto& s : samples) {
          if (s.arm == ExitArm::x_arm) ++x_arm;
          rows.push_back({s.u, s.point.x1, s.point.x2, to_string(s.arm)});
          o.table.rows.push_back({num(s.u), num(s.point.x1), num(s.point.x2), to_string(s.arm)});
        }
        const double frac = samples.empty() ? kNaN : static_cast<double>(x_arm) / static_cast<double>(samples.size());
        o.result = {{"x_arm_fraction", frac},
                    {"x_arm_probability", exit_probability_x_arm(domain, x)},
                    {"censored", censored},
                    {"columns", {"u", "x1", "x2", "arm"}},
                    {"samples", rows}};
      } else {
        const auto batch = wos_sample(domain, to_cartesian(x), n, seed, wos_cfg, threads);
        if (batch.samples.size() < 1000) throw UsageError("fewer than 1000 uncensored walks");
        const auto ks = ks_validate(batch.samples, domain, x, conv);
        o.result = {{"location", ks.location},       {"scale", ks.scale},
                    {"n", ks.n},                     {"ks_statistic", ks.statistic},
                    {"critical_value_1pct", ks.critical_value}, {"reject", ks.reject},
                    {"censored", batch.censored},    {"median_steps", batch.median_steps},
                    {"mean_steps", batch.mean_steps}};
        o.table.header = {"location", "scale", "n", "ks_statistic", "critical_value_1pct", "reject", "censored",
                          "median_steps", "mean_steps"};
        o.table.rows.push_back({num(ks.location), num(ks.scale), num(ks.n), num(ks.statistic),
                                num(ks.critical_value), flag(ks.reject), num(batch.censored),
                                num(batch.median_steps), num(batch.mean_steps)});
        if (ks.reject) o.code = 2;
      }

    } else if (sub == regularity) {
      const BoundaryFunction f0 = make_f0(f0_name);
      config.update({{"f0", f0_name}, {"sigma", sigma_grid}, {"rho_min", rho_min_grid}, {"delta", delta},
                     {"edges", !no_edges}, {"panel_nodes", panel_nodes}});
      TableOptions opts;
      opts.include_edges = !no_edges;
      opts.nodes_per_panel = panel_nodes;
      opts.threads = threads;
      const auto rep = scan_sigma(domain, f0, sigma_grid, rho_min_grid, RegionPartition{delta}, opts);
      o.result = report_json(rep);
      o.table = report_table(rep);

    } else if (sub == limits) {
      const BoundaryFunction f0 = make_f0(f0_name);
      config.update({{"f0", f0_name}, {"theta", thetas}, {"rho", rho_grid}});
      json arr = json::array();
      o.table.header = {"theta", "I_limit", "J_limit", "predicted_J_limit", "corrected_J_limit", "gap",
                        "corrected_gap", "converged"};
      for (double th : thetas) {
        if (!(th > domain.start_angle() && th < 2.0 * std::numbers::pi)) {
          throw UsageError("--theta values must lie strictly between the boundary rays");
        }
        const auto lc = limit_check(domain, f0, th, rho_grid);
        arr.push_back({{"theta", th},
                       {"rho", lc.rho_grid},
                       {"I", lc.I_values},
                       {"J", lc.J_values},
                       {"I_limit", lc.I_limit},
                       {"J_limit", lc.J_limit},
                       {"pv", lc.pv},
                       {"predicted_J_limit", lc.predicted_J_limit},
                       {"corrected_J_limit", lc.corrected_J_limit},
                       {"gap", lc.gap},
                       {"corrected_gap", lc.corrected_gap},
                       {"converged", lc.converged}});
        o.table.rows.push_back({num(th), num(lc.I_limit), num(lc.J_limit), num(lc.predicted_J_limit),
                                num(lc.corrected_J_limit), num(lc.gap), num(lc.corrected_gap), flag(lc.converged)});
      }
      o.result = {{"limits", arr}};

    } else if (sub == pv) {
      const BoundaryFunction f0 = make_f0(f0_name);
      config.update({{"f0", f0_name}, {"eps", eps_grid}});
      const auto res = pv_integral(f0, eps_grid);
      o.result = {{"value", res.value},
                  {"converged", res.converged},
                  {"epsilons", res.epsilons},
                  {"truncated", res.truncated},
                  {"extrapolated", res.extrapolated}};
      o.table.header = {"epsilon", "truncated", "extrapolated"};
      for (std::size_t k = 0; k < res.epsilons.size(); ++k) {
        o.table.rows.push_back({num(res.epsilons[k]), num(res.truncated[k]),
                                k == 0 ? std::string("nan") : num(res.extrapolated[k - 1])});
      }

    } else if (sub == reduce) {
      const BoundaryConvention conv = convention_of(convention);
      config.update({{"center", {cx1, cx2}}, {"radius", radius}, {"mass", mass}, {"u", u_grid},
                     {"convention", convention}, {"scan", scan}});
      const SourceFunction g = radial_bump_source({cx1, cx2}, radius, mass);
      BoundaryFunction f0;
      try {
        f0 = poisson_reduce(domain, g, conv);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const double h = radius / 50.0;
      const CartesianPoint probe{cx1 + 0.3 * radius, cx2 - 0.2 * radius};
      const double lap = newtonian_laplacian_fd(g, probe, h, {1e-13, 1e-12, 4000});
      const double gv = g.eval(probe);
      o.result = {{"laplacian_check",
                   {{"point", {probe.x1, probe.x2}},
                    {"step", h},
                    {"fd_laplacian", lap},
                    {"source", gv},
                    {"relative_error", std::abs(lap - gv) / std::abs(gv)}}},
                  {"trace_hypothesis", "not verified"},
                  {"numerical_derivatives", f0.numerical_derivatives}};
      json rows = json::array();
      o.table.header = {"u", "f0", "f0_prime", "f0_second"};
      for (double u : u_grid) {
        const double a = f0.eval(u), b = f0.deriv1(u), c = f0.deriv2(u);
        rows.push_back({u, a, b, c});
        o.table.rows.push_back({num(u), num(a), num(b), num(c)});
      }
      o.result["columns"] = {"u", "f0", "f0_prime", "f0_second"};
      o.result["f0"] = rows;
      if (scan) {
        config.update({{"sigma", sigma_grid}, {"rho_min", rho_min_grid}, {"delta", delta}});
        TableOptions opts;
        opts.threads = threads;
        const auto rep = scan_sigma(domain, f0, sigma_grid, rho_min_grid, RegionPartition{delta}, opts);
        o.result["regularity"] = report_json(rep);
        if (common.format == "csv") o.table = report_table(rep);
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  const std::string text = render(command, config, o, common.format);
  if (common.out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(common.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << common.out_path << '\n';
      return 1;
    }
    file << text;
  }
  return o.code;
}

}  // namespace lshape::cli
