#include "blurtv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "blurtv/bounds.hpp"
#include "blurtv/error.hpp"
#include "blurtv/normal.hpp"
#include "blurtv/oracle.hpp"
#include "blurtv/parallel.hpp"
#include "blurtv/rng.hpp"
#include "blurtv/serialize.hpp"

namespace blurtv {

using nlohmann::json;

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

ResultTable::ResultTable(std::string experiment, std::vector<std::string> parameters, json metadata)
    : experiment_(std::move(experiment)), parameters_(std::move(parameters)), metadata_(std::move(metadata)) {}

void ResultTable::add(const std::vector<std::string>& params, const std::string& quantity, double value,
                      std::optional<double> stderr_value, std::uint64_t seed) {
  if (params.size() != parameters_.size()) throw ArgumentError("result row has the wrong number of parameters");
  rows_.push_back({params, quantity, value, stderr_value, seed});
}

std::vector<ResultTable::Row> ResultTable::select(const std::string& quantity) const {
  std::vector<Row> out;
  for (const auto& r : rows_)
    if (r.quantity == quantity) out.push_back(r);
  return out;
}

double ResultTable::param(const Row& row, const std::string& name) const {
  const auto it = std::find(parameters_.begin(), parameters_.end(), name);
  if (it == parameters_.end()) throw ArgumentError("no parameter named '" + name + "'");
  return std::stod(row.params[static_cast<std::size_t>(it - parameters_.begin())]);
}

void ResultTable::write_csv(std::ostream& out) const {
  out << "# metadata: " << metadata_.dump() << "\n";
  out << "experiment";
  for (const auto& p : parameters_) out << "," << p;
  out << ",quantity,value,stderr,seed\n";
  for (const auto& r : rows_) {
    out << experiment_;
    for (const auto& p : r.params) out << "," << p;
    out << "," << r.quantity << "," << format_number(r.value) << ","
        << (r.stderr_value ? format_number(*r.stderr_value) : "") << "," << r.seed << "\n";
  }
}

void ResultTable::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(out);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

namespace {

constexpr const char* kVersion = BLURTV_VERSION;

std::vector<double> geometric(double start, double ratio, std::size_t count) {
  return BandwidthGrid::geometric(start, ratio, count).values();
}

/// Mean and standard error of the mean.
struct Summary {
  double mean = 0.0;
  double stderr_value = 0.0;
};

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  if (xs.empty()) return s;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stderr_value = std::sqrt(ss / (n - 1.0) / n);
  }
  return s;
}

json metadata(const std::string& experiment, json config, json notes = json::array()) {
  return {{"experiment", experiment}, {"library", "blurtv"}, {"version", kVersion},
          {"config", std::move(config)}, {"notes", std::move(notes)}};
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t cell, std::uint64_t trial) {
  return derive_seed(seed, {cell, trial});
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ArgumentError(what);
}

std::vector<LabeledKernel> default_fig1_kernels() {
  return {{"gaussian", {{"family", "gaussian"}, {"dim", 1}}},
          {"trimodal",
           {{"family", "gaussian_mixture_1d"},
            {"means", {-4.0, 0.0, 4.0}},
            {"weights", {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}},
            {"sds", {1.0, 1.0, 1.0}}}}};
}

// Config (de)serialization.

class Reader {
 public:
  Reader(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw ArgumentError(name_ + " config must be a JSON object");
  }
  template <typename T>
  void get(const char* key, T& target) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      target = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ArgumentError(name_ + " config: bad value for '" + key + "': " + e.what());
    }
  }
  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ArgumentError(name_ + " config: unknown key '" + key + "'");
  }

 private:
  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

json to_json(const Fig1Config& c) {
  json kernels = json::array();
  for (const auto& k : c.kernels) kernels.push_back({{"label", k.label}, {"kernel", k.spec}});
  return {{"kernels", kernels}, {"h_grid", c.h_grid}, {"beta", c.beta}, {"tol", c.tol}};
}
json to_json(const Fig2Config& c) {
  return {{"betas", c.betas}, {"h_grid", c.h_grid}, {"n", c.n},         {"m", c.m},
          {"B", c.draws},     {"alpha", c.alpha},   {"trials", c.trials}, {"seed", c.seed}};
}
json to_json(const Fig3Config& c) {
  return {{"dim", c.dim}, {"betas", c.betas}, {"taus", c.taus},     {"h_grid", c.h_grid},
          {"n", c.n},     {"m", c.m},         {"B", c.draws},       {"trials", c.trials},
          {"seed", c.seed}};
}
json to_json(const CoverageConfig& c) {
  return {{"beta", c.beta},   {"n", c.n},       {"m", c.m},
          {"h", c.h},         {"h_star", c.h_star ? json(*c.h_star) : json(nullptr)},
          {"alpha", c.alpha}, {"trials", c.trials}, {"B", c.draws},
          {"methods", c.methods}, {"seed", c.seed}};
}
json to_json(const HardnessConfig& c) {
  return {{"dims", c.dims}, {"h_grid", c.h_grid}, {"n", c.n},           {"m", c.m},
          {"B", c.draws},   {"trials", c.trials}, {"seed", c.seed}, {"data", "uniform_unit_ball"}};
}
json to_json(const SandwichConfig& c) {
  return {{"beta", c.beta}, {"n", c.n}, {"m", c.m}, {"h", c.h}, {"trials", c.trials}, {"seed", c.seed}};
}
json to_json(const ConvergenceConfig& c) {
  return {{"sizes", c.sizes}, {"h", c.h}, {"trials", c.trials}, {"seed", c.seed}};
}

void fill_defaults(Fig1Config& c) {
  if (c.kernels.empty()) c.kernels = default_fig1_kernels();
  if (c.h_grid.empty()) c.h_grid = geometric(0.01, 1.1, 98);
}
void fill_defaults(Fig2Config& c) {
  if (c.h_grid.empty()) c.h_grid = geometric(0.05, 1.25, 20);
}
void fill_defaults(Fig3Config& c) {
  if (c.h_grid.empty()) c.h_grid = geometric(0.05, 1.5, 12);
}

void check_grid(const std::vector<double>& grid, const char* what) {
  require(!grid.empty(), std::string(what) + " must not be empty");
  for (double h : grid) require(h > 0.0 && std::isfinite(h), std::string(what) + " values must be positive");
}

/// MC seed for bandwidth index k within a trial.
std::uint64_t mc_seed(std::uint64_t trial, std::size_t k) { return derive_seed(trial, {2, k}); }

}  // namespace

ResultTable run_fig1(const Fig1Config& input) {
  Fig1Config c = input;
  fill_defaults(c);
  check_grid(c.h_grid, "fig1 h_grid");
  require(c.tol > 0.0, "fig1 tol must be positive");
  const auto p = OracleDistribution::gaussian_1d(c.beta, 1.0);
  const auto q = OracleDistribution::gaussian_1d(-c.beta, 1.0);
  ResultTable table("fig1", {"kernel", "h"}, metadata("fig1", to_json(c)));
  const double limit = oracle_tv_1d(p, q, c.tol);
  for (const auto& lk : c.kernels) {
    const Kernel kernel = kernel_from_json(lk.spec);
    require(kernel.dim() == 1, "fig1 kernels must be one-dimensional");
    table.add({lk.label, "0"}, "tv_limit", limit);
    for (double h : c.h_grid)
      table.add({lk.label, format_number(h)}, "oracle_blurred_tv",
                oracle_blurred_tv_quadrature_1d(p, q, kernel, Bandwidth(h), c.tol));
  }
  return table;
}

ResultTable run_fig2(const Fig2Config& input) {
  Fig2Config c = input;
  fill_defaults(c);
  check_grid(c.h_grid, "fig2 h_grid");
  require(!c.betas.empty() && c.trials >= 1 && c.n >= 1 && c.m >= 1 && c.draws >= 1,
          "fig2 needs non-empty betas and positive n, m, B, trials");
  const json notes = json::array({"n, m, B, alpha and the beta grid are not stated for this figure; "
                                  "these values are this harness's defaults"});
  ResultTable table("fig2", {"beta", "h"}, metadata("fig2", to_json(c), notes));
  const Kernel kernel = Kernel::gaussian(1);
  const std::size_t nh = c.h_grid.size();
  const std::size_t cells = c.betas.size();

  struct Out {
    std::vector<double> estimate, ucb, lcb;
  };
  std::vector<Out> out(cells * c.trials);
  parallel_for(out.size(), c.threads, [&](std::size_t idx) {
    const std::size_t b = idx / c.trials;
    const std::size_t t = idx % c.trials;
    const std::uint64_t seed = trial_seed(c.seed, b, t);
    Rng rx(derive_seed(seed, 0)), ry(derive_seed(seed, 1));
    const Sample x = sample_oracle(OracleDistribution::gaussian_1d(c.betas[b], 1.0), c.n, rx, "X");
    const Sample y = sample_oracle(OracleDistribution::gaussian_1d(-c.betas[b], 1.0), c.m, ry, "Y");
    Out& o = out[idx];
    for (std::size_t k = 0; k < nh; ++k) {
      const auto r = bounds_monte_carlo(x, y, kernel, Bandwidth(c.h_grid[k]), c.alpha, c.draws, mc_seed(seed, k));
      o.estimate.push_back(r.estimate);
      o.ucb.push_back(r.ucb);
      o.lcb.push_back(r.lcb.value_or(0.0));
    }
  });

  for (std::size_t b = 0; b < cells; ++b) {
    const double beta = c.betas[b];
    const auto p = OracleDistribution::gaussian_1d(beta, 1.0);
    const auto q = OracleDistribution::gaussian_1d(-beta, 1.0);
    const std::uint64_t row_seed = c.trials == 1 ? trial_seed(c.seed, b, 0) : c.seed;
    table.add({format_number(beta), "0"}, "tv_limit", two_phi_minus_one(beta), std::nullopt, row_seed);
    for (std::size_t k = 0; k < nh; ++k) {
      const std::vector<std::string> params{format_number(beta), format_number(c.h_grid[k])};
      std::vector<double> est, ucb, lcb, positive;
      for (std::size_t t = 0; t < c.trials; ++t) {
        const Out& o = out[b * c.trials + t];
        est.push_back(o.estimate[k]);
        ucb.push_back(o.ucb[k]);
        lcb.push_back(o.lcb[k]);
        positive.push_back(o.lcb[k] > 0.0 ? 1.0 : 0.0);
      }
      auto emit = [&](const char* name, const std::vector<double>& xs) {
        const Summary s = summarize(xs);
        table.add(params, name, s.mean, c.trials > 1 ? std::optional(s.stderr_value) : std::nullopt, row_seed);
      };
      table.add(params, "oracle", oracle_blurred_tv_gaussian(p, q, Bandwidth(c.h_grid[k])), std::nullopt, row_seed);
      emit("estimate", est);
      emit("ucb", ucb);
      emit("lcb", lcb);
      emit("lcb_positive_fraction", positive);
    }
  }
  return table;
}

ResultTable run_fig3(const Fig3Config& input) {
  Fig3Config c = input;
  fill_defaults(c);
  check_grid(c.h_grid, "fig3 h_grid");
  require(c.dim >= 1 && !c.betas.empty() && !c.taus.empty() && c.trials >= 1 && c.draws >= 1,
          "fig3 needs dim >= 1, non-empty beta and tau grids, and positive B and trials");
  ResultTable table("fig3", {"beta", "tau", "h"}, metadata("fig3", to_json(c)));
  const Kernel kernel = Kernel::gaussian(c.dim);
  const std::size_t nh = c.h_grid.size();
  const std::size_t cells = c.betas.size() * c.taus.size();

  std::vector<std::vector<double>> out(cells * c.trials);
  parallel_for(out.size(), c.threads, [&](std::size_t idx) {
    const std::size_t cell = idx / c.trials;
    const std::size_t t = idx % c.trials;
    const double beta = c.betas[cell / c.taus.size()];
    const double tau = c.taus[cell % c.taus.size()];
    const std::uint64_t seed = trial_seed(c.seed, cell, t);
    Rng rx(derive_seed(seed, 0)), ry(derive_seed(seed, 1));
    const Sample x = sample_oracle(OracleDistribution::spiked(c.dim, beta, tau, 1.0), c.n, rx, "X");
    const Sample y = sample_oracle(OracleDistribution::spiked(c.dim, beta, tau, -1.0), c.m, ry, "Y");
    for (std::size_t k = 0; k < nh; ++k)
      out[idx].push_back(blurred_tv_monte_carlo(x.measure(), y.measure(), kernel, Bandwidth(c.h_grid[k]),
                                                {c.draws, mc_seed(seed, k), 1})
                             .value);
  });

  for (std::size_t cell = 0; cell < cells; ++cell) {
    const double beta = c.betas[cell / c.taus.size()];
    const double tau = c.taus[cell % c.taus.size()];
    for (std::size_t k = 0; k < nh; ++k) {
      const double h = c.h_grid[k];
      const std::vector<std::string> params{format_number(beta), format_number(tau), format_number(h)};
      std::vector<double> xs;
      for (std::size_t t = 0; t < c.trials; ++t) xs.push_back(out[cell * c.trials + t][k]);
      const Summary s = summarize(xs);
      table.add(params, "estimate", s.mean, c.trials > 1 ? std::optional(s.stderr_value) : std::nullopt, c.seed);
      table.add(params, "oracle", two_phi_minus_one(beta / std::sqrt(1.0 + h * h)), std::nullopt, c.seed);
    }
  }
  return table;
}

ResultTable run_coverage(const CoverageConfig& c) {
  require(c.trials >= 1 && c.n >= 1 && c.m >= 1 && c.h > 0.0, "coverage needs positive n, m, h and trials");
  require(!c.methods.empty(), "coverage needs at least one method");
  std::vector<BoundMethod> methods;
  for (const auto& name : c.methods) methods.push_back(parse_bound_method(name));
  const double h_star = c.h_star.value_or(c.h / 10.0);
  const Bandwidth h(c.h);
  const Kernel kernel = Kernel::gaussian(1);
  const auto p = OracleDistribution::gaussian_1d(c.beta, 1.0);
  const auto q = OracleDistribution::gaussian_1d(-c.beta, 1.0);
  const double oracle = oracle_blurred_tv_gaussian(p, q, h);

  CoverageConfig echo = c;
  echo.h_star = h_star;
  ResultTable table("coverage", {"method"}, metadata("coverage", to_json(echo)));

  std::vector<std::vector<BoundResult>> out(c.trials);
  parallel_for(c.trials, c.threads, [&](std::size_t t) {
    const std::uint64_t seed = trial_seed(c.seed, 0, t);
    Rng rx(derive_seed(seed, 0)), ry(derive_seed(seed, 1));
    const Sample x = sample_oracle(p, c.n, rx, "X");
    const Sample y = sample_oracle(q, c.m, ry, "Y");
    TermEvaluator terms(x, y, kernel);
    for (BoundMethod m : methods) {
      switch (m) {
        case BoundMethod::naive: out[t].push_back(bounds_naive(terms, h, c.alpha)); break;
        case BoundMethod::monte_carlo:
          out[t].push_back(bounds_monte_carlo(x, y, kernel, h, c.alpha, c.draws, derive_seed(seed, 2)));
          break;
        case BoundMethod::uniform:
          out[t].push_back(bounds_uniform(terms, h, c.alpha, Bandwidth(h_star)));
          break;
        case BoundMethod::adaptive: out[t].push_back(bounds_adaptive(terms, h, c.alpha)); break;
        case BoundMethod::combined:
          out[t].push_back(bounds_combined(x, y, kernel, h, c.alpha, c.draws, derive_seed(seed, 3)));
          break;
      }
    }
  });

  table.add({"all"}, "oracle", oracle, std::nullopt, c.seed);
  for (std::size_t k = 0; k < methods.size(); ++k) {
    std::vector<double> ucb_cover, lcb_cover, positive, margin, estimate, ucb, lcb;
    for (std::size_t t = 0; t < c.trials; ++t) {
      const BoundResult& r = out[t][k];
      ucb_cover.push_back(r.ucb >= oracle ? 1.0 : 0.0);
      margin.push_back(r.ucb_raw - r.estimate);
      estimate.push_back(r.estimate);
      ucb.push_back(r.ucb);
      if (r.lcb) {
        lcb_cover.push_back(*r.lcb <= oracle ? 1.0 : 0.0);
        positive.push_back(*r.lcb > 0.0 ? 1.0 : 0.0);
        lcb.push_back(*r.lcb);
      }
    }
    const std::vector<std::string> params{to_string(methods[k])};
    auto emit = [&](const char* name, const std::vector<double>& xs) {
      if (xs.empty()) return;
      const Summary s = summarize(xs);
      table.add(params, name, s.mean, s.stderr_value, c.seed);
    };
    emit("ucb_coverage", ucb_cover);
    emit("lcb_coverage", lcb_cover);
    emit("lcb_positive_fraction", positive);
    emit("mean_ucb_margin", margin);
    emit("mean_estimate", estimate);
    emit("mean_ucb", ucb);
    emit("mean_lcb", lcb);
  }
  return table;
}

ResultTable run_hardness_demo(const HardnessConfig& c) {
  check_grid(c.h_grid, "hardness-demo h_grid");
  require(!c.dims.empty() && c.trials >= 1 && c.draws >= 1, "hardness-demo needs dims, trials and B");
  for (auto d : c.dims) require(d >= 1, "hardness-demo dims must be positive");
  ResultTable table("hardness-demo", {"dim", "h"}, metadata("hardness-demo", to_json(c)));
  const std::size_t nh = c.h_grid.size();
  std::vector<std::vector<double>> out(c.dims.size() * c.trials);
  parallel_for(out.size(), c.threads, [&](std::size_t idx) {
    const std::size_t cell = idx / c.trials;
    const std::size_t t = idx % c.trials;
    const std::size_t d = c.dims[cell];
    const std::uint64_t seed = trial_seed(c.seed, cell, t);
    Rng rx(derive_seed(seed, 0)), ry(derive_seed(seed, 1));
    const Sample x = sample_unit_ball(d, c.n, rx, "X");
    const Sample y = sample_unit_ball(d, c.m, ry, "Y");
    const Kernel kernel = Kernel::gaussian(d);
    for (std::size_t k = 0; k < nh; ++k)
      out[idx].push_back(blurred_tv_monte_carlo(x.measure(), y.measure(), kernel, Bandwidth(c.h_grid[k]),
                                                {c.draws, mc_seed(seed, k), 1})
                             .value);
  });
  for (std::size_t cell = 0; cell < c.dims.size(); ++cell) {
    for (std::size_t k = 0; k < nh; ++k) {
      const double h = c.h_grid[k];
      const std::vector<std::string> params{std::to_string(c.dims[cell]), format_number(h)};
      std::vector<double> xs;
      for (std::size_t t = 0; t < c.trials; ++t) xs.push_back(out[cell * c.trials + t][k]);
      const Summary s = summarize(xs);
      table.add(params, "estimate", s.mean, c.trials > 1 ? std::optional(s.stderr_value) : std::nullopt, c.seed);
      table.add(params, "large_h_envelope", std::sqrt(2.0 / std::numbers::pi) / h, std::nullopt, c.seed);
    }
  }
  return table;
}

ResultTable run_sandwich(const SandwichConfig& c) {
  require(c.trials >= 2 && c.n >= 2 && c.m >= 2 && c.h > 0.0, "sandwich needs n, m, trials >= 2 and h > 0");
  ResultTable table("sandwich", {"n", "h"}, metadata("sandwich", to_json(c)));
  const Kernel kernel = Kernel::gaussian(1);
  const auto p = OracleDistribution::gaussian_1d(c.beta, 1.0);
  const auto q = OracleDistribution::gaussian_1d(-c.beta, 1.0);
  const Bandwidth h(c.h);
  std::vector<SplitTerms> out(c.trials);
  parallel_for(c.trials, c.threads, [&](std::size_t t) {
    const std::uint64_t seed = trial_seed(c.seed, 0, t);
    Rng rx(derive_seed(seed, 0)), ry(derive_seed(seed, 1));
    TermEvaluator terms(sample_oracle(p, c.n, rx, "X"), sample_oracle(q, c.m, ry, "Y"), kernel);
    out[t] = terms.split(h);
  });
  std::vector<double> full, splits, lower;
  for (const auto& s : out) {
    full.push_back(s.full);
    splits.push_back(s.x_split + s.y_split);
    lower.push_back(s.expression());
  }
  const std::vector<std::string> params{std::to_string(c.n), format_number(c.h)};
  table.add(params, "oracle", oracle_blurred_tv_gaussian(p, q, h), std::nullopt, c.seed);
  for (auto [name, xs] : {std::pair{"mean_estimate", &full}, std::pair{"mean_split_sum", &splits},
                          std::pair{"mean_estimate_minus_splits", &lower}}) {
    const Summary s = summarize(*xs);
    table.add(params, name, s.mean, s.stderr_value, c.seed);
  }
  return table;
}

ResultTable run_convergence(const ConvergenceConfig& c) {
  require(!c.sizes.empty() && c.trials >= 2 && c.h > 0.0, "convergence needs sizes, trials >= 2, h > 0");
  ResultTable table("convergence", {"n", "h"}, metadata("convergence", to_json(c)));
  const Kernel kernel = Kernel::gaussian(1);
  const auto p = OracleDistribution::gaussian_1d(0.0, 1.0);
  std::vector<double> out(c.sizes.size() * c.trials);
  parallel_for(out.size(), c.threads, [&](std::size_t idx) {
    const std::size_t cell = idx / c.trials;
    const std::uint64_t seed = trial_seed(c.seed, cell, idx % c.trials);
    Rng rx(derive_seed(seed, 0)), ry(derive_seed(seed, 1));
    const Sample x = sample_oracle(p, c.sizes[cell], rx, "X");
    const Sample y = sample_oracle(p, c.sizes[cell], ry, "Y");
    out[idx] = blurred_tv_quadrature_1d(x.measure(), y.measure(), kernel, Bandwidth(c.h));
  });
  for (std::size_t cell = 0; cell < c.sizes.size(); ++cell) {
    const std::vector<double> xs(out.begin() + static_cast<std::ptrdiff_t>(cell * c.trials),
                                 out.begin() + static_cast<std::ptrdiff_t>((cell + 1) * c.trials));
    const Summary s = summarize(xs);
    table.add({std::to_string(c.sizes[cell]), format_number(c.h)}, "mean_distance", s.mean, s.stderr_value, c.seed);
  }
  return table;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"fig1", "fig2", "fig3", "coverage", "hardness-demo",
                                              "sandwich", "convergence"};
  return names;
}

ResultTable run_experiment(const std::string& name, const json& config, unsigned threads) {
  const json& cfg = config.is_null() ? json::object() : config;
  auto pick = [&](unsigned& target) {
    if (threads) target = threads;
  };
  if (name == "fig1") {
    Fig1Config c;
    Reader r(cfg, name);
    json kernels = json::array();
    r.get("kernels", kernels);
    for (const auto& k : kernels) {
      if (!k.is_object() || !k.contains("kernel")) throw ArgumentError("fig1 kernels entries need a 'kernel' object");
      c.kernels.push_back({k.value("label", to_string(kernel_from_json(k["kernel"]).family())), k["kernel"]});
    }
    r.get("h_grid", c.h_grid);
    r.get("beta", c.beta);
    r.get("tol", c.tol);
    r.get("threads", threads);
    r.finish();
    return run_fig1(c);
  }
  if (name == "fig2") {
    Fig2Config c;
    Reader r(cfg, name);
    r.get("betas", c.betas);
    r.get("h_grid", c.h_grid);
    r.get("n", c.n);
    r.get("m", c.m);
    r.get("B", c.draws);
    r.get("alpha", c.alpha);
    r.get("trials", c.trials);
    r.get("seed", c.seed);
    r.get("threads", c.threads);
    r.finish();
    pick(c.threads);
    return run_fig2(c);
  }
  if (name == "fig3") {
    Fig3Config c;
    Reader r(cfg, name);
    r.get("dim", c.dim);
    r.get("betas", c.betas);
    r.get("taus", c.taus);
    r.get("h_grid", c.h_grid);
    r.get("n", c.n);
    r.get("m", c.m);
    r.get("B", c.draws);
    r.get("trials", c.trials);
    r.get("seed", c.seed);
    r.get("threads", c.threads);
    r.finish();
    pick(c.threads);
    return run_fig3(c);
  }
  if (name == "coverage") {
    CoverageConfig c;
    Reader r(cfg, name);
    double h_star = 0.0;
    r.get("beta", c.beta);
    r.get("n", c.n);
    r.get("m", c.m);
    r.get("h", c.h);
    r.get("h_star", h_star);
    r.get("alpha", c.alpha);
    r.get("trials", c.trials);
    r.get("B", c.draws);
    r.get("methods", c.methods);
    r.get("seed", c.seed);
    r.get("threads", c.threads);
    r.finish();
    if (h_star > 0.0) c.h_star = h_star;
    pick(c.threads);
    return run_coverage(c);
  }
  if (name == "hardness-demo") {
    HardnessConfig c;
    Reader r(cfg, name);
    r.get("dims", c.dims);
    r.get("h_grid", c.h_grid);
    r.get("n", c.n);
    r.get("m", c.m);
    r.get("B", c.draws);
    r.get("trials", c.trials);
    r.get("seed", c.seed);
    r.get("threads", c.threads);
    r.finish();
    pick(c.threads);
    return run_hardness_demo(c);
  }
  if (name == "sandwich") {
    SandwichConfig c;
    Reader r(cfg, name);
    r.get("beta", c.beta);
    r.get("n", c.n);
    r.get("m", c.m);
    r.get("h", c.h);
    r.get("trials", c.trials);
    r.get("seed", c.seed);
    r.get("threads", c.threads);
    r.finish();
    pick(c.threads);
    return run_sandwich(c);
  }
  if (name == "convergence") {
    ConvergenceConfig c;
    Reader r(cfg, name);
    r.get("sizes", c.sizes);
    r.get("h", c.h);
    r.get("trials", c.trials);
    r.get("seed", c.seed);
    r.get("threads", c.threads);
    r.finish();
    pick(c.threads);
    return run_convergence(c);
  }
  std::string list;
  for (const auto& n : experiment_names()) list += (list.empty() ? "" : ", ") + n;
  throw ArgumentError("unknown experiment '" + name + "' (valid names: " + list + ")");
}

}  // namespace blurtv
