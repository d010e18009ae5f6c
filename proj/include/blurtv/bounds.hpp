#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blurtv/estimator.hpp"
#include "blurtv/kernels.hpp"
#include "blurtv/measures.hpp"

namespace blurtv {

enum class BoundMethod { naive, monte_carlo, uniform, adaptive, combined };

std::string to_string(BoundMethod method);
/// Accepts the names produced by to_string; anything else is an ArgumentError.
BoundMethod parse_bound_method(const std::string& name);

/// How the "exact" blurred TV terms are computed. Quadrature is used in 1-D;
/// setting substitute_draws switches to Monte Carlo, which is the only option
/// above dimension 1.
struct EstimatorOptions {
  double tol = kDefaultTolerance;
  std::optional<std::size_t> substitute_draws;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct BoundSpec {
  BoundMethod method = BoundMethod::naive;
  double alpha = 0.05;
  Bandwidth h{1.0};
  /// Monte Carlo sample size, required by monte_carlo and combined.
  std::optional<std::size_t> draws;
  /// Lower end of the bandwidth range for the uniform LCB.
  std::optional<Bandwidth> h_star;
  std::optional<BandwidthGrid> grid;
  std::uint64_t seed = 0;
  EstimatorOptions estimator;
};

struct BoundResult {
  BoundMethod method = BoundMethod::naive;
  double alpha = 0.0;
  double h = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::optional<std::size_t> draws;
  double estimate = 0.0;
  /// Absent when the method does not provide one (combined; uniform without h_star).
  std::optional<double> lcb;
  double ucb_raw = 0.0;
  /// min(ucb_raw, 1).
  double ucb = 0.0;
  std::map<std::string, double> margins;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> notes;
  std::uint64_t seed = 0;
};

/// √(log(1/α)/2 · (1/n + 1/m)).
double epsilon_nm(std::size_t n, std::size_t m, double alpha);
/// √(log(1/α)/(2B)).
double epsilon_B(std::size_t draws, double alpha);

struct RConstants {
  double r1 = 0.0;  ///< √(2 log(2/α))
  double r2 = 0.0;  ///< √(log(16/α))
};
RConstants r_constants(double alpha);

/// Σ̂ = Σ_{i<j} ω((Xᵢ−Xⱼ)/h)² / (n·C(n,2)) + the same for Y. Lies in [0, 1/n + 1/m].
struct VarianceProxy {
  double value = 0.0;
  double x_part = 0.0;
  double y_part = 0.0;
};
VarianceProxy variance_proxy(const Sample& x, const Sample& y, const Kernel& kernel, Bandwidth h);

/// d(P̂,Q̂) and the two split-half distances at one bandwidth.
struct SplitTerms {
  double full = 0.0;
  double x_split = 0.0;
  double y_split = 0.0;
  double expression() const noexcept { return full - x_split - y_split; }
};

/// Computes and caches blurred TV terms for one pair of samples, so several
/// bounds at the same bandwidths share the work.
class TermEvaluator {
 public:
  TermEvaluator(const Sample& x, const Sample& y, const Kernel& kernel, EstimatorOptions options = {});

  double full(Bandwidth h);
  /// Throws SplitUndefinedError when n < 2 or m < 2.
  SplitTerms split(Bandwidth h);

  const Sample& x() const noexcept { return x_; }
  const Sample& y() const noexcept { return y_; }
  const Kernel& kernel() const noexcept { return kernel_; }
  bool uses_monte_carlo() const noexcept { return options_.substitute_draws.has_value(); }
  const EstimatorOptions& options() const noexcept { return options_; }
  std::size_t skipped_draws() const noexcept { return skipped_; }

 private:
  double evaluate(const EmpiricalMeasure& p, const EmpiricalMeasure& q, Bandwidth h, std::uint64_t stream);

  Sample x_;
  Sample y_;
  Kernel kernel_;
  EstimatorOptions options_;
  std::optional<SplitPair> x_halves_;
  std::optional<SplitPair> y_halves_;
  std::map<double, double> full_;
  std::map<double, SplitTerms> split_;
  std::size_t skipped_ = 0;
};

BoundResult bounds_naive(TermEvaluator& terms, Bandwidth h, double alpha);
BoundResult bounds_monte_carlo(const Sample& x, const Sample& y, const Kernel& kernel, Bandwidth h,
                               double alpha, std::size_t draws, std::uint64_t seed,
                               unsigned threads = 1);
BoundResult bounds_uniform(TermEvaluator& terms, Bandwidth h, double alpha,
                           std::optional<Bandwidth> h_star = std::nullopt,
                           const std::optional<BandwidthGrid>& grid = std::nullopt);
BoundResult bounds_adaptive(TermEvaluator& terms, Bandwidth h, double alpha);
/// UCB only.
BoundResult bounds_combined(const Sample& x, const Sample& y, const Kernel& kernel, Bandwidth h,
                            double alpha, std::size_t draws, std::uint64_t seed,
                            const std::optional<BandwidthGrid>& grid = std::nullopt,
                            unsigned threads = 1);

/// Runs the method named in `spec`.
BoundResult compute_bound(const Sample& x, const Sample& y, const Kernel& kernel, const BoundSpec& spec);

/// n^{−q/(2(d+q))} · 2 M_q^{dq/(d+q)} · (B·Vol(𝔹_d)/h^d)^{q/(d+q)}: upper bound on
/// E d_TV^h(P̂ₙ, P) for densities bounded by B with q-th moment M_q.
double convergence_bound(double sup_density, double moment, double q, std::size_t d, Bandwidth h,
                         std::size_t n);

/// π^{d/2} / Γ(d/2 + 1).
double unit_ball_volume(std::size_t d);

}  // namespace blurtv
