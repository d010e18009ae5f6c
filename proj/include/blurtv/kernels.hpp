#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "blurtv/rng.hpp"

namespace blurtv {

/// Smoothing scale h > 0, in the same length units as the data.
class Bandwidth {
 public:
  explicit Bandwidth(double h);
  double value() const noexcept { return h_; }
  friend bool operator==(Bandwidth, Bandwidth) = default;
  friend auto operator<=>(Bandwidth, Bandwidth) = default;

 private:
  double h_;
};

enum class KernelFamily { gaussian, gaussian_mixture_1d };

std::string to_string(KernelFamily family);

/// A probability density on R^d used for smoothing.
///
/// Either the standard Gaussian in any dimension or a finite mixture of
/// univariate Gaussians. Immutable after construction.
class Kernel {
 public:
  static Kernel gaussian(std::size_t dim);
  static Kernel gaussian_mixture_1d(std::vector<double> means, std::vector<double> weights,
                                    std::vector<double> sds);
  /// ⅓N(−4,1) + ⅓N(0,1) + ⅓N(4,1).
  static Kernel trimodal();

  KernelFamily family() const noexcept { return family_; }
  std::size_t dim() const noexcept { return dim_; }
  bool is_gaussian() const noexcept { return family_ == KernelFamily::gaussian; }
  const std::vector<double>& means() const noexcept { return means_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& sds() const noexcept { return sds_; }

  double density(std::span<const double> u) const;
  double scaled_density(Bandwidth h, std::span<const double> u) const;

  /// Density of a one-dimensional kernel at u. No dimension check.
  double density_1d(double u) const noexcept;

  /// Draws ξ ~ ψ into `out` (size dim()).
  void sample(Rng& rng, std::span<double> out) const;
  std::vector<double> sample(Rng& rng) const;

  /// ω(v) = d_TV(δ_v ∗ ψ, ψ). Closed form for the Gaussian, quadrature otherwise.
  double shift_modulus(std::span<const double> v) const;

  /// Radius proxy K such that the kernel mass outside [−K, K] is negligible
  /// (1 for the Gaussian, max|mean| + 10·max sd for mixtures).
  double support_radius() const noexcept;

  /// True when ψ(u) = ψ(−u).
  bool is_symmetric() const noexcept;

  std::string describe() const;

 private:
  Kernel(KernelFamily family, std::size_t dim) : family_(family), dim_(dim) {}
  void check_dim(std::span<const double> u) const;

  KernelFamily family_;
  std::size_t dim_;
  std::vector<double> means_;
  std::vector<double> weights_;
  std::vector<double> sds_;
};

/// ∫(ψ(u) − ψ(u − v))₊ du by adaptive quadrature, for any 1-D kernel
/// (including the Gaussian, so the closed form can be cross-checked).
double shift_modulus_quadrature(const Kernel& kernel, double v, double abs_tol = 1e-8);

/// 2Φ(r/2) − 1: the Gaussian shift modulus at distance r = ‖v‖₂.
double gaussian_shift_modulus(double distance) noexcept;

/// Parses `gaussian` or `mix:<means>/<weights>/<sds>` (comma-separated reals).
Kernel parse_kernel_spec(const std::string& spec, std::size_t dim);

}  // namespace blurtv
