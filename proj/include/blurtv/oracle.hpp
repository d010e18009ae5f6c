#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "blurtv/estimator.hpp"
#include "blurtv/kernels.hpp"
#include "blurtv/measures.hpp"
#include "blurtv/rng.hpp"

namespace blurtv {

enum class OracleFamily { gaussian, gaussian_mixture_1d };

/// Analytic distribution with a known blurred TV. Gaussians are stored as
/// mean + factor·z with z ~ N(0, I_k), so covariance = factor·factorᵀ.
class OracleDistribution {
 public:
  /// N(mean, covariance); covariance is row-major d×d and must be
  /// symmetric positive-definite (otherwise ValidationError).
  static OracleDistribution gaussian(std::vector<double> mean, std::vector<double> covariance);
  static OracleDistribution gaussian_1d(double mean, double sd);
  /// Weights may be zero but must be nonnegative and sum to 1 within 1e-12.
  static OracleDistribution mixture_1d(std::vector<double> means, std::vector<double> weights,
                                       std::vector<double> sds);
  /// N(sign·β·e₁, (1−τ)e₁e₁ᵀ + τI_d) with τ ∈ (0, 1].
  static OracleDistribution spiked(std::size_t dim, double beta, double tau, double sign = 1.0);
  /// A∘N(mean, sd²) for a unit-norm column A ∈ R^d (a rank-one Gaussian).
  static OracleDistribution embedded_1d(double mean, double sd, std::vector<double> column);

  OracleFamily family() const noexcept { return family_; }
  std::size_t dim() const noexcept { return dim_; }
  /// Gaussian mean, or the component means of a mixture.
  const std::vector<double>& means() const noexcept { return means_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& sds() const noexcept { return sds_; }
  /// Row-major d×d covariance (Gaussian family only).
  std::vector<double> covariance() const;

  /// One draw into `out` (size dim()).
  void sample(Rng& rng, std::span<double> out) const;

 private:
  OracleFamily family_ = OracleFamily::gaussian;
  std::size_t dim_ = 1;
  std::vector<double> means_;
  std::vector<double> weights_;
  std::vector<double> sds_;
  std::size_t rank_ = 0;
  std::vector<double> factor_;  // row-major d×rank
};

/// 2Φ(Δ/2) − 1 with Δ = ‖(Σ + h²I)^{−1/2}(μ_P − μ_Q)‖ for Gaussians with a
/// common covariance Σ, under the Gaussian kernel. A 1-D pair with unequal
/// variances is routed to the quadrature oracle; in higher dimensions it is
/// an ArgumentError.
double oracle_blurred_tv_gaussian(const OracleDistribution& p, const OracleDistribution& q, Bandwidth h);

/// ½∫|p∗ψ_h − q∗ψ_h| for 1-D Gaussians or Gaussian mixtures under a Gaussian
/// or Gaussian-mixture kernel, using the closed-form convolved mixtures.
double oracle_blurred_tv_quadrature_1d(const OracleDistribution& p, const OracleDistribution& q,
                                       const Kernel& kernel, Bandwidth h,
                                       double tol = kDefaultTolerance);

/// Unsmoothed d_TV(P, Q) for 1-D Gaussians or mixtures (the h → 0 limit).
double oracle_tv_1d(const OracleDistribution& p, const OracleDistribution& q,
                    double tol = kDefaultTolerance);

Sample sample_oracle(const OracleDistribution& dist, std::size_t n, Rng& rng, std::string label = {});

/// n uniform draws from the unit ball in R^d (normalized Gaussian times U^{1/d}).
Sample sample_unit_ball(std::size_t dim, std::size_t n, Rng& rng, std::string label = {});

}  // namespace blurtv
