#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "blurtv/kernels.hpp"
#include "blurtv/measures.hpp"

namespace blurtv {

inline constexpr double kDefaultTolerance = 1e-6;

/// Monte Carlo sample size and seed. Draws are generated in fixed-size
/// chunks, each from its own substream of `seed`, so the estimate does not
/// depend on `threads`.
struct MonteCarloPlan {
  std::size_t draws = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

inline constexpr std::size_t kMonteCarloChunk = 1024;

struct MonteCarloEstimate {
  double value = 0.0;
  std::size_t draws = 0;
  /// Draws where the pooled smoothed density fell below 1e-300; they contribute 0.
  std::size_t skipped_draws = 0;
};

/// ½∫|p̂_h − q̂_h| by adaptive quadrature, for 1-D measures.
/// Absolute error ≤ tol; result clamped to [0, 1].
double blurred_tv_quadrature_1d(const EmpiricalMeasure& p, const EmpiricalMeasure& q,
                                const Kernel& kernel, Bandwidth h, double tol = kDefaultTolerance);

/// Importance-sampled estimate: draws W ~ ½P̂ + ½Q̂, ξ ~ ψ and averages
/// ½|p̂_h − q̂_h| / (½p̂_h + ½q̂_h) at W + hξ. Unbiased for the empirical
/// blurred TV given the data.
MonteCarloEstimate blurred_tv_monte_carlo(const EmpiricalMeasure& p, const EmpiricalMeasure& q,
                                          const Kernel& kernel, Bandwidth h,
                                          const MonteCarloPlan& plan);

/// Positive, nondecreasing bandwidths h₀ ≤ … ≤ h_L.
class BandwidthGrid {
 public:
  explicit BandwidthGrid(std::vector<double> values);
  static BandwidthGrid geometric(double start, double ratio, std::size_t count);
  /// lo·ratio^k for lo·ratio^k < hi, then hi itself.
  static BandwidthGrid geometric_between(double lo, double hi, double ratio);
  /// `a,b,c` or `geom:<start>:<ratio>:<count>`.
  static BandwidthGrid parse(const std::string& spec);

  const std::vector<double>& values() const& noexcept { return values_; }
  std::vector<double> values() && noexcept { return std::move(values_); }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
};

/// Outcome of a sup/inf scan over bandwidths.
struct EnvelopeResult {
  double value = 0.0;
  /// Bandwidth where the sup (or inf) was attained.
  double at_h = 0.0;
  std::size_t evaluations = 0;
  /// The scan stopped at a cap or at the end of the grid before the
  /// estimate had decayed below 1/(n∧m).
  bool truncated = false;
};

using BandwidthFunction = std::function<double(Bandwidth)>;

inline constexpr double kUpGridRatio = 1.05;
inline constexpr double kUpGridMaxFactor = 100.0;
inline constexpr std::size_t kUpGridQuietPoints = 5;
inline constexpr double kLoGridRatio = 1.1;

/// Always scans: max of f over {h} ∪ grid points above h. Without a grid,
/// walks h·1.05^k until f < 1/(n∧m) at 5 consecutive points or h·1.05^k > 100h.
EnvelopeResult sup_scan(const BandwidthFunction& f, Bandwidth h, std::size_t n_min,
                        const std::optional<BandwidthGrid>& grid = std::nullopt);

/// sup_{h₁ ≥ h} f(h₁). For the Gaussian kernel f is nonincreasing, so this is f(h).
EnvelopeResult monotonized_up(const BandwidthFunction& f, const Kernel& kernel, Bandwidth h,
                              std::size_t n_min,
                              const std::optional<BandwidthGrid>& grid = std::nullopt);

/// Quadrature form on two 1-D measures.
EnvelopeResult monotonized_up(const EmpiricalMeasure& p, const EmpiricalMeasure& q,
                              const Kernel& kernel, Bandwidth h,
                              const std::optional<BandwidthGrid>& grid = std::nullopt,
                              double tol = kDefaultTolerance);

/// inf of f over grid points in [h_star, h]. The default grid is
/// geometric with ratio 1.1 from h_star, ending exactly at h.
EnvelopeResult monotonized_lo(const BandwidthFunction& f, Bandwidth h, Bandwidth h_star,
                              const std::optional<BandwidthGrid>& grid = std::nullopt);

/// d(P̂,Q̂) − d(P̂⁽¹⁾,P̂⁽²⁾) − d(Q̂⁽¹⁾,Q̂⁽²⁾) at h, by 1-D quadrature.
double split_expression_quadrature_1d(const Sample& x, const Sample& y, const Kernel& kernel,
                                      Bandwidth h, double tol = kDefaultTolerance);

/// Quadrature form of monotonized_lo on the split expression.
EnvelopeResult monotonized_lo(const Sample& x, const Sample& y, const Kernel& kernel, Bandwidth h,
                              Bandwidth h_star,
                              const std::optional<BandwidthGrid>& grid = std::nullopt,
                              double tol = kDefaultTolerance);

}  // namespace blurtv
