// blurtv command-line front end. JSON goes to stdout, messages to stderr.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "blurtv/bounds.hpp"
#include "blurtv/error.hpp"
#include "blurtv/estimator.hpp"
#include "blurtv/experiments.hpp"
#include "blurtv/kernels.hpp"
#include "blurtv/measures.hpp"
#include "blurtv/serialize.hpp"

namespace {

using namespace blurtv;
using nlohmann::json;

enum Exit { kOk = 0, kArgument = 2, kIo = 3, kNumerical = 4 };

struct DataFlags {
  std::string x, y;
  std::size_t dim = 1;
  std::string kernel = "gaussian";
  double h = 0.0;
  std::optional<std::size_t> mc;
  std::uint64_t seed = 0;
  double tol = kDefaultTolerance;
  unsigned threads = 1;
};

void add_data_flags(CLI::App* cmd, DataFlags& f) {
  cmd->set_help_flag("--help", "print this help message");  // frees -h for the bandwidth
  cmd->add_option("--x", f.x, "CSV file with the X sample")->required();
  cmd->add_option("--y", f.y, "CSV file with the Y sample")->required();
  cmd->add_option("--dim", f.dim, "point dimension")->required()->check(CLI::PositiveNumber);
  cmd->add_option("--kernel", f.kernel, "gaussian or mix:<means>/<weights>/<sds>");
  cmd->add_option("--h", f.h, "bandwidth")->required();
  cmd->add_option("--mc,--B", f.mc, "Monte Carlo sample size B");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--tol", f.tol, "quadrature tolerance");
  cmd->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_estimate(const DataFlags& f) {
  if (f.dim > 1 && !f.mc) throw ArgumentError("quadrature unavailable above dimension 1 (pass --mc B)");
  const Kernel kernel = parse_kernel_spec(f.kernel, f.dim);
  const Bandwidth h(f.h);
  const Sample x = load_sample(f.x, f.dim, "X");
  const Sample y = load_sample(f.y, f.dim, "Y");
  json out;
  if (f.mc) {
    const auto est = blurred_tv_monte_carlo(x.measure(), y.measure(), kernel, h, {*f.mc, f.seed, f.threads});
    out["estimate"] = est.value;
    out["method"] = "monte_carlo";
    out["diagnostics"] = {{"B", est.draws}, {"skipped_draws", est.skipped_draws}, {"seed", f.seed}};
  } else {
    out["estimate"] = blurred_tv_quadrature_1d(x.measure(), y.measure(), kernel, h, f.tol);
    out["method"] = "quadrature";
    out["diagnostics"] = {{"tol", f.tol}};
  }
  out["h"] = f.h;
  out["n"] = x.size();
  out["m"] = y.size();
  out["kernel"] = kernel_to_json(kernel);
  print(out);
  return kOk;
}

int cmd_bound(const DataFlags& f, const std::string& method, double alpha, std::optional<double> h_star,
              const std::string& grid) {
  BoundSpec spec;
  spec.method = parse_bound_method(method);
  spec.alpha = alpha;
  spec.h = Bandwidth(f.h);
  spec.seed = f.seed;
  spec.estimator.tol = f.tol;
  spec.estimator.threads = f.threads;
  if (h_star) spec.h_star = Bandwidth(*h_star);
  if (!grid.empty()) spec.grid = BandwidthGrid::parse(grid);
  const bool sampled = spec.method == BoundMethod::monte_carlo || spec.method == BoundMethod::combined;
  if (sampled) {
    if (!f.mc) throw ArgumentError("method " + method + " requires --mc B");
    spec.draws = f.mc;
  } else if (f.mc) {
    spec.estimator.substitute_draws = f.mc;
  } else if (f.dim > 1) {
    throw ArgumentError("quadrature unavailable above dimension 1 (pass --mc B)");
  }
  const Kernel kernel = parse_kernel_spec(f.kernel, f.dim);
  const Sample x = load_sample(f.x, f.dim, "X");
  const Sample y = load_sample(f.y, f.dim, "Y");
  print(to_json(compute_bound(x, y, kernel, spec)));
  return kOk;
}

int cmd_experiment(const std::string& name, const std::string& config_path, const std::string& out_dir,
                   unsigned threads) {
  json config = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open config '" + config_path + "'");
    try {
      config = json::parse(in);
    } catch (const json::parse_error& e) {
      throw IoError("config '" + config_path + "': " + e.what());
    }
  }
  const ResultTable table = run_experiment(name, config, threads);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());
  const auto path = std::filesystem::path(out_dir) / (name + ".csv");
  table.write_csv(path);
  std::cout << name << ": wrote " << table.rows().size() << " rows to " << path.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blurred total variation distance: estimates and confidence bounds"};
  app.require_subcommand(1);

  DataFlags est_flags;
  auto* estimate = app.add_subcommand("estimate", "estimate the blurred TV between two samples");
  add_data_flags(estimate, est_flags);

  DataFlags bound_flags;
  std::string method = "naive";
  double alpha = 0.05;
  std::optional<double> h_star;
  std::string grid;
  auto* bound = app.add_subcommand("bound", "confidence bounds for the blurred TV");
  add_data_flags(bound, bound_flags);
  bound->add_option("--method", method, "naive, monte_carlo, uniform, adaptive or combined");
  bound->add_option("--alpha", alpha, "confidence level alpha in (0, 1)");
  bound->add_option("--hstar", h_star, "lower bandwidth for the uniform LCB");
  bound->add_option("--grid", grid, "bandwidth grid: a,b,c or geom:<start>:<ratio>:<count>");

  std::string name, config_path, out_dir = ".";
  unsigned exp_threads = 0;
  auto* experiment = app.add_subcommand("experiment", "run a named simulation experiment");
  experiment->add_option("--name", name, "experiment name")->required();
  experiment->add_option("--config", config_path, "JSON config file");
  experiment->add_option("--out", out_dir, "output directory");
  experiment->add_option("--threads", exp_threads, "worker threads")->check(CLI::PositiveNumber);

  auto* version = app.add_subcommand("version", "print the library version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kArgument;
  }

  try {
    if (*estimate) return cmd_estimate(est_flags);
    if (*bound) return cmd_bound(bound_flags, method, alpha, h_star, grid);
    if (*experiment) return cmd_experiment(name, config_path, out_dir, exp_threads);
    if (*version) {
      std::cout << "blurtv " << BLURTV_VERSION << "\n";
      return kOk;
    }
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kArgument;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << " (achieved error " << e.achieved_error() << ")\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
