#include "blurtv/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "blurtv/error.hpp"

namespace blurtv::quadrature {
namespace {

// QUADPACK qk15 abscissae (Kronrod points, every second one is a Gauss point).
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double lo, hi, value, error;
  bool operator<(const Piece& other) const { return error < other.error; }
};

Piece kronrod15(const std::function<double(double)>& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 const Options& options) {
  if (breakpoints.size() < 2) throw ArgumentError("integrate: need at least two breakpoints");
  if (!(options.abs_tol > 0.0)) throw ArgumentError("integrate: tolerance must be positive");

  std::vector<Piece> storage;
  storage.reserve(std::max<std::size_t>(2 * breakpoints.size(), 64));
  std::priority_queue<Piece, std::vector<Piece>> queue(std::less<Piece>{}, std::move(storage));

  Result result;
  double value = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] >= breakpoints[i]))
      throw ArgumentError("integrate: breakpoints must be sorted");
    if (breakpoints[i + 1] == breakpoints[i]) continue;
    Piece p = kronrod15(f, breakpoints[i], breakpoints[i + 1]);
    result.evaluations += 15;
    value += p.value;
    error += p.error;
    queue.push(p);
  }

  std::size_t intervals = queue.size();
  while (error > options.abs_tol && !queue.empty()) {
    if (intervals >= options.max_intervals) {
      std::ostringstream msg;
      msg << "integrate: interval budget " << options.max_intervals
          << " exhausted with error estimate " << error << " > tolerance " << options.abs_tol;
      throw NumericalError(msg.str(), error);
    }
    Piece worst = queue.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      // Interval cannot be split further in double precision; accept it.
      error -= worst.error;
      queue.pop();
      continue;
    }
    queue.pop();
    Piece left = kronrod15(f, worst.lo, mid);
    Piece right = kronrod15(f, mid, worst.hi);
    result.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++intervals;
  }

  result.value = value;
  result.error = std::max(error, 0.0);
  result.intervals = intervals;
  return result;
}

Result integrate(const std::function<double(double)>& f, double lo, double hi,
                 const Options& options) {
  const std::array<double, 2> ends = {lo, hi};
  return integrate(f, ends, options);
}

}  // namespace blurtv::quadrature
