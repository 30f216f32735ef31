#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "lshape/cli.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = lshape::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
  const auto r = run(std::move(args));
  REQUIRE(r.code == 0);
  return json::parse(r.out);
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("solve with both methods") {
    const auto j = run_json({"solve", "--f0", "gaussian", "--r", "1", "--theta", "3.9269908169872414", "--method",
                             "both", "--n", "200000", "--seed", "5"});
    CHECK(j["version"] == lshape::cli::kVersion);
    CHECK(j["command"] == "solve");
    CHECK(j["config"]["seed"] == 5);
    const auto& r = j["result"];
    CHECK(r["phi1"].get<double>() == doctest::Approx(0.0).scale(1.0));
    CHECK(r["phi2"].get<double>() == doctest::Approx(-1.0));
    CHECK(r["agree_within_3_stderr"].get<bool>());
    // (1/pi) int exp(-v^2) / (1 + v^2) dv = e erfc(1).
    CHECK(r["quadrature"]["value"].get<double>() == doctest::Approx(std::exp(1.0) * std::erfc(1.0)).epsilon(1e-9));
  }

  TEST_CASE("derivatives are reported") {
    const auto j = run_json({"solve", "--derivatives"});
    CHECK(j["result"]["grad"].size() == 2);
    CHECK(j["result"].contains("d2f_dx1dx1"));
  }

  TEST_CASE("principal value") {
    const auto j = run_json({"pv", "--f0", "odd_gaussian"});
    CHECK(j["result"]["value"].get<double>() == doctest::Approx(0.0).scale(1.0));
    const auto g = run_json({"pv", "--f0", "gaussian"});
    CHECK(g["result"]["value"].get<double>() == doctest::Approx(-2.0 * std::sqrt(std::numbers::pi)).epsilon(1e-8));
    CHECK(g["result"]["converged"].get<bool>());
  }

  TEST_CASE("usage errors exit 1 and print nothing") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {},
             {"frobnicate"},
             {"solve", "--f0", "nope"},
             {"solve", "--theta", "0.5"},
             {"solve", "--r", "-1"},
             {"solve", "--omega", "7"},
             {"solve", "--method", "guess"},
             {"solve", "--theta", "6.2831853"},
             {"exit-dist", "--convention", "other"},
             {"wos-validate", "--n", "10"},
             {"regularity", "--sigma", "1.5"},
             {"regularity", "--rho-min", "1e-3,1e-2"},
             {"regularity", "--delta", "3"},
             {"limits", "--theta", "1.0"},
             {"pv", "--eps", "0.1"},
             {"poisson-reduce", "--center-x1", "1", "--center-x2", "1"},
             {"poisson-reduce", "--radius", "0"},
         }) {
      CAPTURE(args.size() ? args[0] : std::string("<none>"));
      const auto r = run(args);
      CHECK(r.code == 1);
      CHECK(r.out.empty());
      CHECK_FALSE(r.err.empty());
    }
  }

  TEST_CASE("KS rejection exits 2") {
    const auto ok = run({"wos-validate", "--n", "20000", "--seed", "3"});
    CHECK(ok.code == 0);
    CHECK_FALSE(json::parse(ok.out)["result"]["reject"].get<bool>());
    const auto bad = run({"wos-validate", "--n", "100000", "--seed", "3", "--convention", "paper-literal"});
    CHECK(bad.code == 2);
    CHECK(json::parse(bad.out)["result"]["reject"].get<bool>());
  }

  TEST_CASE("reruns are byte identical") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"solve", "--method", "mc", "--n", "200000", "--seed", "9"},
             {"exit-dist", "--n", "50", "--seed", "2", "--sampler", "wos"},
             {"wos-validate", "--n", "5000", "--seed", "4"},
         }) {
      auto a = args, b = args;
      a.insert(a.end(), {"--threads", "1"});
      b.insert(b.end(), {"--threads", "3"});
      CHECK(run(a).out == run(b).out);
      CHECK(run(a).out == run(a).out);
    }
    CHECK(run({"solve", "--method", "mc", "--seed", "1"}).out != run({"solve", "--method", "mc", "--seed", "2"}).out);
  }

  TEST_CASE("csv output") {
    const auto r = run({"pv", "--format", "csv"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 9);
    CHECK(ls[0] == std::string("# lshape ") + lshape::cli::kVersion + " pv");
    CHECK(ls[1].rfind("# config {", 0) == 0);
    CHECK(ls[2] == "epsilon,truncated,extrapolated");

    const auto e = run({"exit-dist", "--n", "10", "--format", "csv"});
    const auto el = lines(e.out);
    REQUIRE(el.size() == 13);
    CHECK(el[2] == "u,x1,x2,arm");
  }

  TEST_CASE("exit samples") {
    const auto j = run_json({"exit-dist", "--n", "2000", "--seed", "1"});
    const auto& res = j["result"];
    CHECK(res["samples"].size() == 2000);
    CHECK(res["x_arm_probability"].get<double>() == doctest::Approx(0.5));
    CHECK(std::abs(res["x_arm_fraction"].get<double>() - 0.5) < 0.06);
    for (const auto& s : res["samples"]) {
      const double u = s[0], x1 = s[1], x2 = s[2];
      if (u > 0) {
        CHECK(x1 == doctest::Approx(std::pow(u, 1.5)));
        CHECK(x2 == 0.0);
        CHECK(s[3] == "x_arm");
      } else {
        CHECK(x1 == 0.0);
        CHECK(x2 == doctest::Approx(std::pow(-u, 1.5)));
      }
    }
  }

  TEST_CASE("small regularity scan") {
    const auto j = run_json({"regularity", "--sigma", "0.5,0.9", "--rho-min", "1e-2,1e-3,1e-4"});
    const auto& res = j["result"];
    REQUIRE(res["results"].size() == 2);
    CHECK(res["results"][0]["verdict"] == "finite");
    CHECK(res["results"][1]["verdict"] == "divergent");
    CHECK(res["sigma_crit_estimate"].get<double>() == doctest::Approx(0.7));
    CHECK(j["config"]["sigma"].size() == 2);
  }

  TEST_CASE("limits") {
    const auto j = run_json({"limits", "--f0", "gaussian", "--theta", "4.71238898038469"});
    const auto& l = j["result"]["limits"][0];
    CHECK(l["gap"].get<double>() < 1e-6);
    CHECK(l["converged"].get<bool>());
  }

  TEST_CASE("poisson reduction") {
    const auto j = run_json({"poisson-reduce", "--u", "-1,0,1"});
    const auto& res = j["result"];
    CHECK(res["laplacian_check"]["relative_error"].get<double>() < 1e-3);
    CHECK(res["trace_hypothesis"] == "not verified");
    REQUIRE(res["f0"].size() == 3);
    CHECK(res["f0"][0][1].get<double>() == doctest::Approx(res["f0"][2][1].get<double>()));
  }

  TEST_CASE("output file and version") {
    const auto path = std::filesystem::temp_directory_path() / "lshape_cli_test.json";
    std::filesystem::remove(path);
    const auto r = run({"pv", "--out", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    const json j = json::parse(in);
    CHECK(j["command"] == "pv");
    std::filesystem::remove(path);

    const auto v = run({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find(lshape::cli::kVersion) != std::string::npos);
  }
}
