#include "blurtv/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "blurtv/error.hpp"
#include "blurtv/normal.hpp"
#include "blurtv/parallel.hpp"
#include "blurtv/quadrature.hpp"

namespace blurtv {
namespace {

// Kernel terms further than this many component sds from z are dropped by the
// quadrature evaluator; each dropped term carries tail mass below 1e-18.
constexpr double kWindowSds = 9.0;
constexpr double kTinyDensity = 1e-300;

/// 1-D smoothed density over sorted points, summing only points within
/// kWindowSds component scales of z.
class SortedDensity1d {
 public:
  SortedDensity1d(const EmpiricalMeasure& measure, const Kernel& kernel, Bandwidth h)
      : kernel_(kernel), h_(h.value()), points_(measure.coords().begin(), measure.coords().end()) {
    std::sort(points_.begin(), points_.end());
    double reach = kWindowSds;
    if (!kernel.is_gaussian()) {
      double max_mean = 0.0;
      for (double m : kernel.means()) max_mean = std::max(max_mean, std::abs(m));
      reach = max_mean + kWindowSds * *std::max_element(kernel.sds().begin(), kernel.sds().end());
    }
    window_ = reach * h_;
    scale_ = 1.0 / (static_cast<double>(points_.size()) * h_);
  }

  double operator()(double z) const {
    const auto lo = std::lower_bound(points_.begin(), points_.end(), z - window_);
    const auto hi = std::upper_bound(lo, points_.end(), z + window_);
    double total = 0.0;
    if (kernel_.is_gaussian()) {
      for (auto it = lo; it != hi; ++it) {
        const double u = (z - *it) / h_;
        total += std::exp(-0.5 * u * u);
      }
      return total * kInvSqrt2Pi * scale_;
    }
    for (auto it = lo; it != hi; ++it) total += kernel_.density_1d((z - *it) / h_);
    return total * scale_;
  }

  const std::vector<double>& points() const noexcept { return points_; }

 private:
  const Kernel& kernel_;
  double h_;
  std::vector<double> points_;
  double window_ = 0.0;
  double scale_ = 0.0;
};

void require_same_dim(const EmpiricalMeasure& p, const EmpiricalMeasure& q, const Kernel& kernel) {
  if (p.dim() != q.dim() || p.dim() != kernel.dim()) {
    std::ostringstream msg;
    msg << "dimension mismatch: P has dim " << p.dim() << ", Q has dim " << q.dim()
        << ", kernel has dim " << kernel.dim();
    throw ArgumentError(msg.str());
  }
}

/// Unnormalized Σᵢ k((z − xᵢ)/h); the normalization cancels in the ratio.
double kernel_sum(const EmpiricalMeasure& measure, const Kernel& kernel, double h,
                  std::span<const double> z) {
  const std::size_t d = measure.dim();
  const auto coords = measure.coords();
  const double inv_h = 1.0 / h;
  double total = 0.0;
  if (kernel.is_gaussian()) {
    const double c = -0.5 * inv_h * inv_h;
    if (d == 1) {
      for (double x : coords) {
        const double u = z[0] - x;
        total += std::exp(c * u * u);
      }
      return total;
    }
    for (std::size_t i = 0, n = measure.size(); i < n; ++i) {
      const double* x = coords.data() + i * d;
      double sq = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double u = z[k] - x[k];
        sq += u * u;
      }
      total += std::exp(c * sq);
    }
    return total;
  }
  for (double x : coords) total += kernel.density_1d((z[0] - x) * inv_h);
  return total;
}

}  // namespace

double blurred_tv_quadrature_1d(const EmpiricalMeasure& p, const EmpiricalMeasure& q,
                                const Kernel& kernel, Bandwidth h, double tol) {
  require_same_dim(p, q, kernel);
  if (p.dim() != 1) throw ArgumentError("quadrature unavailable above dimension 1");
  if (!(tol > 0.0)) throw ArgumentError("quadrature tolerance must be positive");

  const SortedDensity1d dp(p, kernel, h);
  const SortedDensity1d dq(q, kernel, h);
  if (dp.points() == dq.points()) return 0.0;

  // Breakpoints at the data points, thinned so no two are closer than a
  // quarter of the smallest kernel scale, inside [min − 12hK, max + 12hK].
  std::vector<double> points;
  points.reserve(dp.points().size() + dq.points().size());
  std::merge(dp.points().begin(), dp.points().end(), dq.points().begin(), dq.points().end(),
             std::back_inserter(points));
  const double min_sd =
      kernel.is_gaussian() ? 1.0 : *std::min_element(kernel.sds().begin(), kernel.sds().end());
  const double spacing = 0.25 * h.value() * min_sd;
  const double pad = 12.0 * h.value() * kernel.support_radius();
  std::vector<double> breaks{points.front() - pad};
  for (double x : points)
    if (x >= breaks.back() + spacing) breaks.push_back(x);
  breaks.push_back(points.back() + pad);

  auto integrand = [&](double z) { return std::abs(dp(z) - dq(z)); };
  const auto result = quadrature::integrate(integrand, breaks, {.abs_tol = 2.0 * tol});
  return std::clamp(0.5 * result.value, 0.0, 1.0);
}

MonteCarloEstimate blurred_tv_monte_carlo(const EmpiricalMeasure& p, const EmpiricalMeasure& q,
                                          const Kernel& kernel, Bandwidth h,
                                          const MonteCarloPlan& plan) {
  require_same_dim(p, q, kernel);
  if (plan.draws == 0) throw ArgumentError("Monte Carlo sample size B must be >= 1");

  const std::size_t d = p.dim();
  const double hv = h.value();
  const double inv_n = 1.0 / static_cast<double>(p.size());
  const double inv_m = 1.0 / static_cast<double>(q.size());
  const std::size_t chunks = (plan.draws + kMonteCarloChunk - 1) / kMonteCarloChunk;

  struct ChunkSum {
    double sum = 0.0;
    std::size_t skipped = 0;
  };
  std::vector<ChunkSum> partial(chunks);

  parallel_for(chunks, plan.threads, [&](std::size_t c) {
    Rng rng(derive_seed(plan.seed, c));
    const std::size_t begin = c * kMonteCarloChunk;
    const std::size_t end = std::min(plan.draws, begin + kMonteCarloChunk);
    std::vector<double> xi(d);
    std::vector<double> z(d);
    ChunkSum acc;
    for (std::size_t k = begin; k < end; ++k) {
      const bool from_p = rng.uniform() < 0.5;
      const EmpiricalMeasure& source = from_p ? p : q;
      const auto w = source.point(rng.index(source.size()));
      kernel.sample(rng, xi);
      for (std::size_t j = 0; j < d; ++j) z[j] = w[j] + hv * xi[j];
      const double dp = kernel_sum(p, kernel, hv, z) * inv_n;
      const double dq = kernel_sum(q, kernel, hv, z) * inv_m;
      const double pooled = 0.5 * (dp + dq);
      if (!(pooled >= kTinyDensity)) {
        ++acc.skipped;
        continue;
      }
      acc.sum += std::abs(dp - dq) / pooled;
    }
    partial[c] = acc;
  });

  MonteCarloEstimate out;
  out.draws = plan.draws;
  double total = 0.0;
  for (const auto& c : partial) {
    total += c.sum;
    out.skipped_draws += c.skipped;
  }
  out.value = std::clamp(total / (2.0 * static_cast<double>(plan.draws)), 0.0, 1.0);
  return out;
}

BandwidthGrid::BandwidthGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ArgumentError("bandwidth grid must not be empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i]))
      throw ArgumentError("bandwidth grid values must be finite and positive");
    if (i > 0 && values_[i] < values_[i - 1])
      throw ArgumentError("bandwidth grid must be nondecreasing");
  }
}

BandwidthGrid BandwidthGrid::geometric(double start, double ratio, std::size_t count) {
  if (!(ratio >= 1.0)) throw ArgumentError("geometric grid ratio must be >= 1");
  if (count == 0) throw ArgumentError("geometric grid needs at least one point");
  std::vector<double> values(count);
  for (std::size_t k = 0; k < count; ++k) values[k] = start * std::pow(ratio, static_cast<double>(k));
  return BandwidthGrid(std::move(values));
}

BandwidthGrid BandwidthGrid::geometric_between(double lo, double hi, double ratio) {
  if (!(ratio > 1.0)) throw ArgumentError("geometric grid ratio must be > 1");
  if (!(lo <= hi)) throw ArgumentError("geometric grid needs lo <= hi");
  std::vector<double> values;
  for (std::size_t k = 0;; ++k) {
    const double v = lo * std::pow(ratio, static_cast<double>(k));
    // Merge a final point that would sit within 1e-9 (relative) of hi.
    if (v >= hi * (1.0 - 1e-9)) break;
    values.push_back(v);
  }
  values.push_back(hi);
  return BandwidthGrid(std::move(values));
}

BandwidthGrid BandwidthGrid::parse(const std::string& spec) {
  if (spec.rfind("geom:", 0) == 0) {
    std::stringstream in(spec.substr(5));
    double start = 0.0, ratio = 0.0;
    long long count = 0;
    char sep1 = 0, sep2 = 0;
    if (!(in >> start >> sep1 >> ratio >> sep2 >> count) || sep1 != ':' || sep2 != ':' || count <= 0 ||
        !in.eof())
      throw ArgumentError("grid spec must look like geom:<start>:<ratio>:<count>");
    return geometric(start, ratio, static_cast<std::size_t>(count));
  }
  std::vector<double> values;
  std::stringstream in(spec);
  std::string field;
  while (std::getline(in, field, ',')) {
    std::size_t used = 0;
    try {
      values.push_back(std::stod(field, &used));
    } catch (const std::exception&) {
      throw ArgumentError("grid spec: cannot parse '" + field + "'");
    }
    if (used != field.size()) throw ArgumentError("grid spec: trailing text in '" + field + "'");
  }
  return BandwidthGrid(std::move(values));
}

EnvelopeResult sup_scan(const BandwidthFunction& f, Bandwidth h, std::size_t n_min,
                        const std::optional<BandwidthGrid>& grid) {
  if (n_min == 0) throw ArgumentError("sup_scan: n∧m must be positive");
  EnvelopeResult out;
  out.value = f(h);
  out.at_h = h.value();
  out.evaluations = 1;
  const double floor = 1.0 / static_cast<double>(n_min);

  if (grid) {
    double last = out.value;
    for (double g : grid->values()) {
      if (g <= h.value()) continue;
      last = f(Bandwidth(g));
      ++out.evaluations;
      if (last > out.value) {
        out.value = last;
        out.at_h = g;
      }
    }
    out.truncated = last >= floor;
    return out;
  }

  std::size_t quiet = out.value < floor ? 1 : 0;
  for (std::size_t k = 1; quiet < kUpGridQuietPoints; ++k) {
    const double g = h.value() * std::pow(kUpGridRatio, static_cast<double>(k));
    if (g > kUpGridMaxFactor * h.value()) {
      out.truncated = true;
      break;
    }
    const double v = f(Bandwidth(g));
    ++out.evaluations;
    if (v > out.value) {
      out.value = v;
      out.at_h = g;
    }
    quiet = v < floor ? quiet + 1 : 0;
  }
  return out;
}

EnvelopeResult monotonized_up(const BandwidthFunction& f, const Kernel& kernel, Bandwidth h,
                              std::size_t n_min, const std::optional<BandwidthGrid>& grid) {
  if (kernel.is_gaussian()) {
    EnvelopeResult out;
    out.value = f(h);
    out.at_h = h.value();
    out.evaluations = 1;
    return out;
  }
  return sup_scan(f, h, n_min, grid);
}

EnvelopeResult monotonized_up(const EmpiricalMeasure& p, const EmpiricalMeasure& q,
                              const Kernel& kernel, Bandwidth h,
                              const std::optional<BandwidthGrid>& grid, double tol) {
  auto f = [&](Bandwidth b) { return blurred_tv_quadrature_1d(p, q, kernel, b, tol); };
  return monotonized_up(f, kernel, h, std::min(p.size(), q.size()), grid);
}

EnvelopeResult monotonized_lo(const BandwidthFunction& f, Bandwidth h, Bandwidth h_star,
                              const std::optional<BandwidthGrid>& grid) {
  if (h_star.value() > h.value()) throw ArgumentError("monotonized_lo needs h_star <= h");
  EnvelopeResult out;
  out.value = std::numeric_limits<double>::infinity();
  auto visit = [&](double g) {
    const double v = f(Bandwidth(g));
    ++out.evaluations;
    if (v < out.value) {
      out.value = v;
      out.at_h = g;
    }
  };
  if (grid) {
    for (double g : grid->values())
      if (g >= h_star.value() && g <= h.value()) visit(g);
    if (out.evaluations == 0)
      throw ArgumentError("monotonized_lo: no grid points inside [h_star, h]");
    return out;
  }
  if (h_star == h) {
    visit(h.value());
    return out;
  }
  const auto scan = BandwidthGrid::geometric_between(h_star.value(), h.value(), kLoGridRatio);
  for (double g : scan.values()) visit(g);
  return out;
}

double split_expression_quadrature_1d(const Sample& x, const Sample& y, const Kernel& kernel,
                                      Bandwidth h, double tol) {
  const auto sx = split_halves(x);
  const auto sy = split_halves(y);
  return blurred_tv_quadrature_1d(x.measure(), y.measure(), kernel, h, tol) -
         blurred_tv_quadrature_1d(sx.first, sx.second, kernel, h, tol) -
         blurred_tv_quadrature_1d(sy.first, sy.second, kernel, h, tol);
}

EnvelopeResult monotonized_lo(const Sample& x, const Sample& y, const Kernel& kernel, Bandwidth h,
                              Bandwidth h_star, const std::optional<BandwidthGrid>& grid,
                              double tol) {
  auto f = [&](Bandwidth b) { return split_expression_quadrature_1d(x, y, kernel, b, tol); };
  return monotonized_lo(f, h, h_star, grid);
}

}  // namespace blurtv
