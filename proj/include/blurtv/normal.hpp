#pragma once

#include <cmath>
#include <numbers>

namespace blurtv {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;

/// Standard normal density.
inline double normal_pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

/// Standard normal CDF through erfc, accurate in both tails.
inline double normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// 2Φ(t) − 1, evaluated as erf(t/√2) to keep relative accuracy near 0.
inline double two_phi_minus_one(double t) noexcept { return std::erf(t / std::numbers::sqrt2); }

}  // namespace blurtv
