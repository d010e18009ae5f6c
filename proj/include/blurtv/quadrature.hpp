#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace blurtv::quadrature {

struct Options {
  double abs_tol = 1e-8;
  std::size_t max_intervals = 200000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
};

/// Globally adaptive 7/15-point Gauss–Kronrod integration.
///
/// `breakpoints` must be sorted and hold at least two values; the first and
/// last are the integration limits and every interior value starts as an
/// interval boundary. The interval with the largest error estimate is
/// bisected until the summed estimate drops below `abs_tol`.
/// Throws NumericalError (carrying the achieved error) if `max_intervals`
/// is reached first.
Result integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 const Options& options = {});

/// Convenience form over [lo, hi].
Result integrate(const std::function<double(double)>& f, double lo, double hi,
                 const Options& options = {});

}  // namespace blurtv::quadrature
