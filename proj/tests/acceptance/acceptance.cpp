// Acceptance checks. Usage: acceptance <id>... or acceptance all.
// Prints one PASS/FAIL line per criterion; exits nonzero if any failed.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "blurtv/bounds.hpp"
#include "blurtv/estimator.hpp"
#include "blurtv/experiments.hpp"
#include "blurtv/kernels.hpp"
#include "blurtv/normal.hpp"
#include "blurtv/oracle.hpp"
#include "blurtv/rng.hpp"

using namespace blurtv;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const auto kP1 = OracleDistribution::gaussian_1d(1.0, 1.0);
const auto kQ1 = OracleDistribution::gaussian_1d(-1.0, 1.0);

Outcome a1() {
  const double v = oracle_blurred_tv_gaussian(kP1, kQ1, Bandwidth(1e-3));
  return {std::abs(v - 0.6827) <= 0.001, fmt("oracle at h=1e-3 is %.7f (target 0.6827 +/- 0.001)", v)};
}

Outcome a2() {
  double worst = 0.0;
  const auto k = Kernel::gaussian(1);
  for (double beta : {0.1, 0.5, 1.0, 2.0, 4.0})
    for (double h : {0.01, 0.1, 1.0, 3.0, 10.0}) {
      const auto p = OracleDistribution::gaussian_1d(beta, 1.0);
      const auto q = OracleDistribution::gaussian_1d(-beta, 1.0);
      worst = std::max(worst, std::abs(oracle_blurred_tv_gaussian(p, q, Bandwidth(h)) -
                                       oracle_blurred_tv_quadrature_1d(p, q, k, Bandwidth(h), 1e-9)));
    }
  return {worst <= 1e-6, fmt("max |closed form - quadrature| over 5x5 grid = %.3g (tol 1e-6)", worst)};
}

Outcome a3() {
  const auto grid = BandwidthGrid::geometric(0.05, 1.1, 61).values();
  double worst_rise_gauss = -1.0, best_rise_tri = 0.0;
  double prev_g = 0.0, prev_t = 0.0;
  const auto g = Kernel::gaussian(1);
  const auto t = Kernel::trimodal();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double vg = oracle_blurred_tv_quadrature_1d(kP1, kQ1, g, Bandwidth(grid[i]), 1e-11);
    const double vt = oracle_blurred_tv_quadrature_1d(kP1, kQ1, t, Bandwidth(grid[i]), 1e-9);
    if (i > 0) {
      worst_rise_gauss = std::max(worst_rise_gauss, vg - prev_g);
      best_rise_tri = std::max(best_rise_tri, vt - prev_t);
    }
    prev_g = vg;
    prev_t = vt;
  }
  return {worst_rise_gauss <= 1e-8 && best_rise_tri >= 1e-3,
          fmt("largest step increase: gaussian %.3g (must be <= 1e-8), trimodal %.4f (must be >= 1e-3)",
              worst_rise_gauss, best_rise_tri)};
}

Outcome a4() {
  Rng rx(101), ry(102);
  const auto x = sample_oracle(kP1, 100, rx), y = sample_oracle(kQ1, 100, ry);
  const auto k = Kernel::gaussian(1);
  const Bandwidth h(0.5);
  const double exact = blurred_tv_quadrature_1d(x.measure(), y.measure(), k, h);
  std::vector<double> est;
  for (std::uint64_t s = 0; s < 200; ++s)
    est.push_back(blurred_tv_monte_carlo(x.measure(), y.measure(), k, h, {2000, derive_seed(7, s)}).value);
  double mean = 0.0, ss = 0.0;
  for (double e : est) mean += e / 200.0;
  for (double e : est) ss += (e - mean) * (e - mean);
  const double se = std::sqrt(ss / 199.0 / 200.0);
  const double big = blurred_tv_monte_carlo(x.measure(), y.measure(), k, h, {100000, 8}).value;
  const bool ok = std::abs(mean - exact) <= 3 * se && std::abs(big - exact) <= 0.01;
  return {ok, fmt("quadrature %.5f, mean of 200 MC %.5f (se %.5f, |gap|/se = %.2f <= 3), B=1e5 gap %.5f (<= 0.01)",
                  exact, mean, se, std::abs(mean - exact) / se, std::abs(big - exact))};
}

Outcome coverage(double beta, bool null_check) {
  CoverageConfig c;
  c.beta = beta;
  c.trials = 500;
  c.seed = null_check ? 6 : 5;
  const auto t = run_coverage(c);
  bool ok = true;
  std::string detail;
  const double floor = 0.856, cap = 0.144;
  for (const auto& name : c.methods) {
    std::map<std::string, double> q;
    for (const auto& row : t.rows())
      if (row.params[0] == name) q[row.quantity] = row.value;
    if (null_check) {
      ok = ok && q["lcb_positive_fraction"] <= cap;
      detail += fmt("%s P(lcb>0)=%.3f; ", name.c_str(), q["lcb_positive_fraction"]);
    } else {
      ok = ok && q["ucb_coverage"] >= floor && q["lcb_coverage"] >= floor;
      detail += fmt("%s ucb %.3f lcb %.3f; ", name.c_str(), q["ucb_coverage"], q["lcb_coverage"]);
    }
  }
  detail += null_check ? "(each must be <= 0.144)" : "(each must be >= 0.856)";
  return {ok, detail};
}

Outcome a5() { return coverage(1.0, false); }
Outcome a6() { return coverage(0.0, true); }

Outcome a7() {
  const auto k = Kernel::gaussian(1);
  double worst = 0.0;
  for (double r : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double closed = two_phi_minus_one(r / 2.0);
    worst = std::max(worst, std::abs(closed - k.shift_modulus(std::vector<double>{r})));
    worst = std::max(worst, std::abs(closed - shift_modulus_quadrature(k, r)));
  }
  const double zero = k.shift_modulus(std::vector<double>{0.0});
  return {worst <= 1e-6 && zero == 0.0, fmt("max deviation %.3g (tol 1e-6), omega(0) = %g", worst, zero)};
}

Outcome a8() {
  Rng rng(808);
  const auto k = Kernel::gaussian(1);
  int violations = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng.index(200), m = 2 + rng.index(200);
    std::vector<double> a(n), b(m);
    const double scale = std::exp(3.0 * rng.normal());
    for (auto& v : a) v = scale * rng.normal();
    for (auto& v : b) v = scale * rng.normal();
    const double h = std::exp(2.0 * rng.normal());
    if (variance_proxy(Sample(a, 1), Sample(b, 1), k, Bandwidth(h)).value > 1.0 / n + 1.0 / m) ++violations;
  }
  Rng fx(1), fy(2);
  const auto x = sample_oracle(kP1, 200, fx), y = sample_oracle(kQ1, 200, fy);
  std::vector<double> s;
  for (double h : {1.0, 10.0, 100.0}) s.push_back(variance_proxy(x, y, k, Bandwidth(h)).value);
  const bool decreasing = s[0] > s[1] && s[1] > s[2];
  return {violations == 0 && decreasing && s[2] < 1e-3,
          fmt("%d violations of the 1/n+1/m bound in 100 datasets; sigma at h=1,10,100: %.4g %.4g %.4g", violations,
              s[0], s[1], s[2])};
}

Outcome a9() {
  const double alpha = 0.1;
  Rng rx(91), ry(92);
  const auto x = sample_oracle(kP1, 200, rx), y = sample_oracle(kQ1, 200, ry);
  TermEvaluator terms(x, y, Kernel::gaussian(1));
  const auto r = bounds_adaptive(terms, Bandwidth(5.0), alpha);
  const double adaptive = r.ucb_raw - r.estimate;
  const double naive = epsilon_nm(200, 200, alpha);
  // Smallest n = m (step 25) at which the same construction would pass.
  std::size_t n_pass = 0;
  for (std::size_t n = 225; n <= 2000 && n_pass == 0; n += 25) {
    Rng sx(derive_seed(93, n)), sy(derive_seed(94, n));
    TermEvaluator t(sample_oracle(kP1, n, sx), sample_oracle(kQ1, n, sy), Kernel::gaussian(1));
    const auto rn = bounds_adaptive(t, Bandwidth(5.0), alpha);
    if (rn.ucb_raw - rn.estimate < epsilon_nm(n, n, alpha)) n_pass = n;
  }
  return {adaptive < naive, fmt("adaptive margin %.4f vs naive %.4f at n=m=200 (constant term %.4f alone); "
                                "first passing n=m is %zu",
                                adaptive, naive, r.margins.at("ucb_constant_term"), n_pass)};
}

Outcome a10() {
  const std::size_t d = 10;
  Rng rng(1010);
  std::vector<double> a(d);
  double norm = 0.0;
  for (auto& v : a) {
    v = rng.normal();
    norm += v * v;
  }
  for (auto& v : a) v /= std::sqrt(norm);
  const auto p = OracleDistribution::embedded_1d(1.0, 1.0, a);
  const auto q = OracleDistribution::embedded_1d(-1.0, 1.0, a);
  Rng rx(1011), ry(1012);
  const auto x = sample_oracle(p, 500, rx), y = sample_oracle(q, 500, ry);
  const double mc =
      blurred_tv_monte_carlo(x.measure(), y.measure(), Kernel::gaussian(d), Bandwidth(1.0), {100000, 1013}).value;
  const double oracle = two_phi_minus_one(1.0 / std::sqrt(2.0));
  return {std::abs(mc - oracle) <= 0.02, fmt("d=10 MC estimate %.4f vs 1-D oracle %.4f (gap %.4f, tol 0.02)", mc,
                                             oracle, std::abs(mc - oracle))};
}

Outcome a11() {
  Fig3Config c;
  c.betas = {0.0, 2.0};
  c.taus = {0.01, 1.0};
  c.h_grid = BandwidthGrid::geometric(0.05, 1.25, 22).values();
  c.seed = 11;
  const auto t = run_fig3(c);
  std::map<std::pair<double, double>, std::map<double, double>> curve;  // (tau, h) -> beta -> value
  for (const auto& row : t.select("estimate"))
    curve[{t.param(row, "tau"), t.param(row, "h")}][t.param(row, "beta")] = row.value;
  std::map<double, double> sep;
  for (const auto& [key, by_beta] : curve)
    sep[key.first] = std::max(sep[key.first], std::abs(by_beta.at(2.0) - by_beta.at(0.0)));
  const double ratio = sep[0.01] / sep[1.0];
  return {ratio >= 3.0, fmt("max separation beta=0 vs 2: tau=0.01 %.3f, tau=1 %.3f, ratio %.2f (must be >= 3)",
                            sep[0.01], sep[1.0], ratio)};
}

Outcome a12() {
  HardnessConfig c;
  c.dims = {1, 20};
  c.h_grid = {0.05, 10.0};
  c.seed = 12;
  const auto t = run_hardness_demo(c);
  std::map<std::pair<int, double>, double> v;
  for (const auto& row : t.select("estimate"))
    v[{static_cast<int>(t.param(row, "dim")), t.param(row, "h")}] = row.value;
  const double envelope = std::sqrt(2.0 / std::numbers::pi) / 10.0;
  const bool ok = v[{20, 0.05}] > 0.9 && v[{20, 10.0}] <= envelope && v[{1, 10.0}] <= envelope;
  return {ok, fmt("d=20,h=0.05: %.4f (> 0.9); h=10: d=1 %.4f, d=20 %.4f (<= %.4f); d=1,h=0.05: %.4f", v[{20, 0.05}],
                  v[{1, 10.0}], v[{20, 10.0}], envelope, v[{1, 0.05}])};
}

Outcome a13() {
  SandwichConfig c;
  c.seed = 13;
  const auto t = run_sandwich(c);
  std::map<std::string, ResultTable::Row> q;
  for (const auto& row : t.rows()) q.emplace(row.quantity, row);
  const double oracle = q.at("oracle").value;
  const auto& est = q.at("mean_estimate");
  const auto& low = q.at("mean_estimate_minus_splits");
  const bool upper = est.value >= oracle - 2 * *est.stderr_value;
  const bool lower = oracle >= low.value - 2 * *low.stderr_value;
  return {upper && lower, fmt("oracle %.4f; mean estimate %.4f (se %.4f); mean estimate - splits %.4f (se %.4f)",
                              oracle, est.value, *est.stderr_value, low.value, *low.stderr_value)};
}

// CLI determinism: each command runs three times (threads 1, 1, 4); outputs must match byte for byte.

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome a14() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "blurtv_acceptance_a14";
  fs::remove_all(dir);
  fs::create_directories(dir);
  Rng rng(14);
  auto write = [&](const char* name, std::size_t n, std::size_t d, double shift) {
    std::ofstream out(dir / name);
    out.precision(17);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < d; ++k) out << shift + rng.normal() << (k + 1 == d ? "\n" : ",");
  };
  write("x1.csv", 80, 1, 1.0);
  write("y1.csv", 80, 1, -1.0);
  write("x20.csv", 100, 20, 0.3);
  write("y20.csv", 100, 20, -0.3);
  {
    std::ofstream(dir / "fig3.json") << R"({"betas":[0,2],"taus":[0.1,1],"h_grid":[0.5,2],"n":40,"m":40,"B":800,"trials":3,"seed":3})";
    std::ofstream(dir / "coverage.json") << R"({"n":30,"m":30,"trials":6,"B":400,"seed":4})";
    std::ofstream(dir / "hardness.json") << R"({"dims":[1,5],"h_grid":[0.1,10],"n":40,"m":40,"B":800,"trials":2})";
    std::ofstream(dir / "fig2.json") << R"({"betas":[0,1],"h_grid":[0.3,1],"n":40,"m":40,"B":800,"trials":2})";
  }
  const std::string cli = BLURTV_CLI_PATH;
  const std::string d1 = " --x " + (dir / "x1.csv").string() + " --y " + (dir / "y1.csv").string() + " --dim 1 --h 0.5";
  const std::string d20 =
      " --x " + (dir / "x20.csv").string() + " --y " + (dir / "y20.csv").string() + " --dim 20 --h 1";
  const std::vector<std::string> commands = {
      "estimate" + d1,
      "estimate" + d1 + " --kernel mix:-4,0,4/0.25,0.5,0.25/1,1,1",
      "estimate" + d20 + " --mc 5000 --seed 7",
      "bound --method naive --alpha 0.1" + d1,
      "bound --method monte_carlo --alpha 0.1 --mc 4000 --seed 3" + d1,
      "bound --method uniform --alpha 0.1 --hstar 0.05" + d1,
      "bound --method adaptive --alpha 0.1" + d1,
      "bound --method combined --alpha 0.1 --mc 2000 --seed 5 --grid geom:0.5:1.3:6" + d1,
      "bound --method naive --alpha 0.1 --mc 3000 --seed 2" + d20,
      "experiment --name fig1",
      "experiment --name fig2 --config " + (dir / "fig2.json").string(),
      "experiment --name fig3 --config " + (dir / "fig3.json").string(),
      "experiment --name coverage --config " + (dir / "coverage.json").string(),
      "experiment --name hardness-demo --config " + (dir / "hardness.json").string(),
  };
  int mismatches = 0, failures = 0;
  std::string first_bad;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::vector<std::string> outputs;
    for (int run = 0; run < 3; ++run) {
      const fs::path out_dir = dir / ("run" + std::to_string(run));
      fs::create_directories(out_dir);
      const std::string threads = run == 2 ? " --threads 4" : " --threads 1";
      const bool is_exp = commands[i].rfind("experiment", 0) == 0;
      const fs::path stdout_file = dir / ("stdout" + std::to_string(run));
      const std::string cmd = cli + " " + commands[i] + threads + (is_exp ? " --out " + out_dir.string() : "") +
                              " > " + stdout_file.string() + " 2>/dev/null";
      if (std::system(cmd.c_str()) != 0) {
        ++failures;
        if (first_bad.empty()) first_bad = commands[i];
      }
      std::string bytes = slurp(stdout_file);
      if (is_exp) {
        const std::string name = commands[i].substr(18, commands[i].find(' ', 18) - 18);
        bytes = slurp(out_dir / (name + ".csv"));
        // The summary line names the output directory, which differs per run.
        if (bytes.empty()) ++failures;
      }
      outputs.push_back(bytes);
    }
    if (outputs[0] != outputs[1] || outputs[0] != outputs[2]) {
      ++mismatches;
      if (first_bad.empty()) first_bad = commands[i];
    }
  }
  fs::remove_all(dir);
  return {mismatches == 0 && failures == 0,
          fmt("%zu commands x 3 runs (threads 1,1,4): %d mismatches, %d failed runs%s%s", commands.size(), mismatches,
              failures, first_bad.empty() ? "" : "; first problem: ", first_bad.c_str())};
}

struct Criterion {
  const char* id;
  double budget_seconds;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"A1", 1, a1},    {"A2", 10, a2},   {"A3", 30, a3},   {"A4", 60, a4},    {"A5", 600, a5},
      {"A6", 600, a6},  {"A7", 5, a7},    {"A8", 30, a8},   {"A9", 30, a9},    {"A10", 120, a10},
      {"A11", 900, a11}, {"A12", 300, a12}, {"A13", 300, a13}, {"A14", 60, a14},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> wanted(argv + 1, argv + argc);
  if (wanted.empty() || (wanted.size() == 1 && wanted[0] == "all")) {
    wanted.clear();
    for (const auto& c : criteria()) wanted.push_back(c.id);
  }
  int failed = 0;
  for (const auto& id : wanted) {
    const Criterion* found = nullptr;
    for (const auto& c : criteria())
      if (id == c.id) found = &c;
    if (!found) {
      std::cout << id << " FAIL unknown criterion\n";
      ++failed;
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = found->run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= found->budget_seconds;
    const bool pass = o.pass && in_time;
    std::cout << id << (pass ? " PASS " : " FAIL ") << o.detail
              << fmt(" [%.2fs of %.0fs budget%s]", secs, found->budget_seconds, in_time ? "" : ", over budget")
              << std::endl;
    if (!pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
