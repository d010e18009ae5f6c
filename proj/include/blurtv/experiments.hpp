#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace blurtv {

/// Rows of {experiment, parameters…, quantity, value, stderr, seed}; written
/// as CSV with a leading `# metadata: {json}` comment line.
class ResultTable {
 public:
  ResultTable(std::string experiment, std::vector<std::string> parameters, nlohmann::json metadata);

  /// `params` must match the parameter names in order. Numbers are
  /// formatted with 17 significant digits.
  void add(const std::vector<std::string>& params, const std::string& quantity, double value,
           std::optional<double> stderr_value = std::nullopt, std::uint64_t seed = 0);

  struct Row {
    std::vector<std::string> params;
    std::string quantity;
    double value = 0.0;
    std::optional<double> stderr_value;
    std::uint64_t seed = 0;
  };

  const std::string& experiment() const noexcept { return experiment_; }
  const std::vector<std::string>& parameters() const noexcept { return parameters_; }
  const nlohmann::json& metadata() const noexcept { return metadata_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }

  /// Rows whose quantity column equals `quantity`, in table order.
  std::vector<Row> select(const std::string& quantity) const;
  /// Value of parameter `name` in `row`, parsed as a number.
  double param(const Row& row, const std::string& name) const;

  void write_csv(std::ostream& out) const;
  void write_csv(const std::filesystem::path& path) const;

 private:
  std::string experiment_;
  std::vector<std::string> parameters_;
  nlohmann::json metadata_;
  std::vector<Row> rows_;
};

/// %.17g formatting used throughout the CSV output.
std::string format_number(double value);

struct LabeledKernel {
  std::string label;
  nlohmann::json spec;  ///< {"family":"gaussian","dim":1} or a gaussian_mixture_1d description
};

struct Fig1Config {
  std::vector<LabeledKernel> kernels;  ///< default: gaussian and the trimodal mixture
  std::vector<double> h_grid;          ///< default 0.01·1.1^k up to ≈ 100
  double beta = 1.0;
  double tol = 1e-9;
};

struct Fig2Config {
  std::vector<double> betas{0.0, 0.5, 1.0};
  std::vector<double> h_grid;  ///< default 0.05·1.25^k, 20 points
  std::size_t n = 500;
  std::size_t m = 500;
  std::size_t draws = 20000;
  double alpha = 0.1;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct Fig3Config {
  std::size_t dim = 20;
  std::vector<double> betas{0.0, 0.5, 1.0, 2.0};
  std::vector<double> taus{0.01, 0.1, 0.5, 1.0};
  std::vector<double> h_grid;  ///< default 0.05·1.5^k, 12 points
  std::size_t n = 200;
  std::size_t m = 200;
  std::size_t draws = 5000;
  std::size_t trials = 5;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct CoverageConfig {
  double beta = 1.0;
  std::size_t n = 200;
  std::size_t m = 200;
  double h = 0.5;
  /// Lower end for the uniform LCB; default h/10.
  std::optional<double> h_star;
  double alpha = 0.1;
  std::size_t trials = 500;
  std::size_t draws = 5000;
  std::vector<std::string> methods{"naive", "monte_carlo", "uniform", "adaptive"};
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct HardnessConfig {
  std::vector<std::size_t> dims{1, 20};
  std::vector<double> h_grid{0.05, 0.1, 0.5, 1.0, 2.0, 10.0};
  std::size_t n = 200;
  std::size_t m = 200;
  std::size_t draws = 5000;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Repeated 1-D Gaussian study of E d(P̂,Q̂) against the oracle and the split terms.
struct SandwichConfig {
  double beta = 0.5;
  std::size_t n = 100;
  std::size_t m = 100;
  double h = 0.5;
  std::size_t trials = 300;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// E d(P̂ₙ, P̂′ₙ) for two independent samples from one 1-D Gaussian, over n.
struct ConvergenceConfig {
  std::vector<std::size_t> sizes{50, 100, 200, 400};
  double h = 0.5;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

ResultTable run_fig1(const Fig1Config& config);
ResultTable run_fig2(const Fig2Config& config);
ResultTable run_fig3(const Fig3Config& config);
ResultTable run_coverage(const CoverageConfig& config);
ResultTable run_hardness_demo(const HardnessConfig& config);
ResultTable run_sandwich(const SandwichConfig& config);
ResultTable run_convergence(const ConvergenceConfig& config);

/// Names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

/// Parses `config` (missing keys take defaults, unknown keys are an
/// ArgumentError) and runs the named experiment. A non-zero `threads`
/// overrides the config's value.
ResultTable run_experiment(const std::string& name, const nlohmann::json& config, unsigned threads = 0);

}  // namespace blurtv
