#include "blurtv/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "blurtv/error.hpp"
#include "blurtv/rng.hpp"

namespace blurtv {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream msg;
    msg << "alpha must lie in (0, 1), got " << alpha;
    throw ArgumentError(msg.str());
  }
}

void check_pair(const Sample& x, const Sample& y, const Kernel& kernel) {
  if (x.dim() != y.dim() || x.dim() != kernel.dim()) {
    std::ostringstream msg;
    msg << "dimension mismatch: X has dim " << x.dim() << ", Y has dim " << y.dim()
        << ", kernel has dim " << kernel.dim();
    throw ArgumentError(msg.str());
  }
}

BoundResult start(BoundMethod method, const Sample& x, const Sample& y, Bandwidth h, double alpha) {
  check_alpha(alpha);
  BoundResult r;
  r.method = method;
  r.alpha = alpha;
  r.h = h.value();
  r.n = x.size();
  r.m = y.size();
  return r;
}

void finish(BoundResult& r) {
  r.ucb = std::min(r.ucb_raw, 1.0);
  if (r.lcb) r.lcb = std::min(*r.lcb, r.estimate);
}

constexpr const char* kFootnote = "lcb set to 0: the split is undefined when n = 1 or m = 1";

double pair_sum(const Sample& s, const Kernel& kernel, Bandwidth h) {
  const std::size_t n = s.size();
  const std::size_t d = s.dim();
  const double inv_h = 1.0 / h.value();
  std::vector<double> v(d);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = s.point(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto xj = s.point(j);
      double w;
      if (kernel.is_gaussian()) {
        double sq = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double u = (xi[k] - xj[k]) * inv_h;
          sq += u * u;
        }
        w = gaussian_shift_modulus(std::sqrt(sq));
      } else {
        for (std::size_t k = 0; k < d; ++k) v[k] = (xi[k] - xj[k]) * inv_h;
        w = kernel.shift_modulus(v);
      }
      w = std::clamp(w, 0.0, 1.0);
      total += w * w;
    }
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return total / (static_cast<double>(n) * pairs);
}

}  // namespace

std::string to_string(BoundMethod method) {
  switch (method) {
    case BoundMethod::naive: return "naive";
    case BoundMethod::monte_carlo: return "monte_carlo";
    case BoundMethod::uniform: return "uniform";
    case BoundMethod::adaptive: return "adaptive";
    case BoundMethod::combined: return "combined";
  }
  return "unknown";
}

BoundMethod parse_bound_method(const std::string& name) {
  for (auto m : {BoundMethod::naive, BoundMethod::monte_carlo, BoundMethod::uniform,
                 BoundMethod::adaptive, BoundMethod::combined})
    if (to_string(m) == name) return m;
  throw ArgumentError("unknown bound method '" + name +
                      "' (expected naive, monte_carlo, uniform, adaptive or combined)");
}

double epsilon_nm(std::size_t n, std::size_t m, double alpha) {
  check_alpha(alpha);
  if (n == 0 || m == 0) throw ArgumentError("epsilon_nm: sample sizes must be positive");
  return std::sqrt(std::log(1.0 / alpha) / 2.0 * (1.0 / static_cast<double>(n) + 1.0 / static_cast<double>(m)));
}

double epsilon_B(std::size_t draws, double alpha) {
  check_alpha(alpha);
  if (draws == 0) throw ArgumentError("epsilon_B: B must be positive");
  return std::sqrt(std::log(1.0 / alpha) / (2.0 * static_cast<double>(draws)));
}

RConstants r_constants(double alpha) {
  check_alpha(alpha);
  return {std::sqrt(2.0 * std::log(2.0 / alpha)), std::sqrt(std::log(16.0 / alpha))};
}

VarianceProxy variance_proxy(const Sample& x, const Sample& y, const Kernel& kernel, Bandwidth h) {
  check_pair(x, y, kernel);
  if (x.size() < 2 || y.size() < 2)
    throw ArgumentError("variance proxy requires n >= 2 and m >= 2");
  VarianceProxy out;
  out.x_part = pair_sum(x, kernel, h);
  out.y_part = pair_sum(y, kernel, h);
  out.value = out.x_part + out.y_part;
  return out;
}

TermEvaluator::TermEvaluator(const Sample& x, const Sample& y, const Kernel& kernel,
                             EstimatorOptions options)
    : x_(x), y_(y), kernel_(kernel), options_(options) {
  check_pair(x, y, kernel);
  if (x.dim() > 1 && !options_.substitute_draws)
    throw ArgumentError("quadrature unavailable above dimension 1");
  if (x.size() >= 2) x_halves_ = split_halves(x);
  if (y.size() >= 2) y_halves_ = split_halves(y);
}

double TermEvaluator::evaluate(const EmpiricalMeasure& p, const EmpiricalMeasure& q, Bandwidth h,
                               std::uint64_t stream) {
  if (!options_.substitute_draws) return blurred_tv_quadrature_1d(p, q, kernel_, h, options_.tol);
  const MonteCarloPlan plan{*options_.substitute_draws, derive_seed(options_.seed, stream),
                            options_.threads};
  const auto est = blurred_tv_monte_carlo(p, q, kernel_, h, plan);
  skipped_ += est.skipped_draws;
  return est.value;
}

double TermEvaluator::full(Bandwidth h) {
  if (auto it = full_.find(h.value()); it != full_.end()) return it->second;
  const double v = evaluate(x_.measure(), y_.measure(), h, 0);
  full_.emplace(h.value(), v);
  return v;
}

SplitTerms TermEvaluator::split(Bandwidth h) {
  if (!x_halves_ || !y_halves_)
    throw SplitUndefinedError("split halves need at least two points in each sample");
  if (auto it = split_.find(h.value()); it != split_.end()) return it->second;
  SplitTerms t;
  t.full = full(h);
  t.x_split = evaluate(x_halves_->first, x_halves_->second, h, 1);
  t.y_split = evaluate(y_halves_->first, y_halves_->second, h, 2);
  split_.emplace(h.value(), t);
  return t;
}

BoundResult bounds_naive(TermEvaluator& terms, Bandwidth h, double alpha) {
  const Sample& x = terms.x();
  const Sample& y = terms.y();
  BoundResult r = start(BoundMethod::naive, x, y, h, alpha);
  r.seed = terms.options().seed;
  r.estimate = terms.full(h);
  const double eps = epsilon_nm(r.n, r.m, alpha);
  r.margins["epsilon_nm"] = eps;
  r.ucb_raw = r.estimate + eps;
  if (r.n < 2 || r.m < 2) {
    r.lcb = 0.0;
    r.notes.push_back(kFootnote);
  } else {
    const SplitTerms s = terms.split(h);
    const double eps1 = epsilon_nm(r.n - 1, r.m - 1, alpha);
    r.margins["split_x"] = s.x_split;
    r.margins["split_y"] = s.y_split;
    r.margins["three_epsilon_n1m1"] = 3.0 * eps1;
    r.lcb = std::max(s.expression() - 3.0 * eps1, 0.0);
  }
  if (terms.uses_monte_carlo()) {
    r.diagnostics["substitute_draws"] = static_cast<double>(*terms.options().substitute_draws);
    r.diagnostics["skipped_draws"] = static_cast<double>(terms.skipped_draws());
  }
  finish(r);
  return r;
}

BoundResult bounds_monte_carlo(const Sample& x, const Sample& y, const Kernel& kernel, Bandwidth h,
                               double alpha, std::size_t draws, std::uint64_t seed,
                               unsigned threads) {
  check_pair(x, y, kernel);
  BoundResult r = start(BoundMethod::monte_carlo, x, y, h, alpha);
  if (draws == 0) throw ArgumentError("monte_carlo bound requires B >= 1");
  r.draws = draws;
  r.seed = seed;
  std::size_t skipped = 0;
  auto run = [&](const EmpiricalMeasure& p, const EmpiricalMeasure& q, std::uint64_t stream) {
    const auto est = blurred_tv_monte_carlo(p, q, kernel, h, {draws, derive_seed(seed, stream), threads});
    skipped += est.skipped_draws;
    return est.value;
  };
  r.estimate = run(x.measure(), y.measure(), 0);
  const double half = alpha / 2.0;
  const double eps = epsilon_nm(r.n, r.m, half);
  const double eps_b = epsilon_B(draws, half);
  r.margins["epsilon_nm_half_alpha"] = eps;
  r.margins["epsilon_B_half_alpha"] = eps_b;
  r.ucb_raw = r.estimate + eps + eps_b;
  if (r.n < 2 || r.m < 2) {
    r.lcb = 0.0;
    r.notes.push_back(kFootnote);
  } else {
    const auto sx = split_halves(x);
    const auto sy = split_halves(y);
    const double dx = run(sx.first, sx.second, 1);
    const double dy = run(sy.first, sy.second, 2);
    const double eps1 = epsilon_nm(r.n - 1, r.m - 1, half);
    r.margins["split_x"] = dx;
    r.margins["split_y"] = dy;
    r.margins["three_epsilon_n1m1_half_alpha"] = 3.0 * eps1;
    r.margins["sqrt3_epsilon_B_half_alpha"] = std::sqrt(3.0) * eps_b;
    r.lcb = std::max(r.estimate - dx - dy - 3.0 * eps1 - std::sqrt(3.0) * eps_b, 0.0);
  }
  r.diagnostics["skipped_draws"] = static_cast<double>(skipped);
  finish(r);
  return r;
}

BoundResult bounds_uniform(TermEvaluator& terms, Bandwidth h, double alpha,
                           std::optional<Bandwidth> h_star, const std::optional<BandwidthGrid>& grid) {
  const Sample& x = terms.x();
  const Sample& y = terms.y();
  BoundResult r = start(BoundMethod::uniform, x, y, h, alpha);
  r.seed = terms.options().seed;
  const std::size_t n_min = std::min(r.n, r.m);
  const double level = alpha / static_cast<double>(n_min);
  const double slack = 1.0 / static_cast<double>(n_min);
  r.margins["level"] = level;
  r.margins["inverse_n_min"] = slack;

  r.estimate = terms.full(h);
  const auto up = monotonized_up([&](Bandwidth b) { return terms.full(b); }, terms.kernel(), h,
                                 n_min, grid);
  const double eps = epsilon_nm(r.n, r.m, level);
  r.margins["epsilon_nm_level"] = eps;
  r.diagnostics["up_value"] = up.value;
  r.diagnostics["up_at_h"] = up.at_h;
  r.diagnostics["up_evaluations"] = static_cast<double>(up.evaluations);
  r.diagnostics["up_truncated"] = up.truncated ? 1.0 : 0.0;
  if (up.truncated) r.notes.push_back("sup over bandwidths truncated before the estimate decayed below 1/(n∧m)");
  r.ucb_raw = up.value + eps + slack;

  if (r.n < 2 || r.m < 2) {
    r.lcb = 0.0;
    r.notes.push_back(kFootnote);
  } else if (!h_star) {
    r.notes.push_back("lcb omitted: the uniform lower bound needs h_star");
  } else {
    const auto lo = monotonized_lo([&](Bandwidth b) { return terms.split(b).expression(); }, h,
                                   *h_star, grid);
    const double eps1 = epsilon_nm(r.n - 1, r.m - 1, level);
    r.margins["three_epsilon_n1m1_level"] = 3.0 * eps1;
    r.diagnostics["h_star"] = h_star->value();
    r.diagnostics["lo_value"] = lo.value;
    r.diagnostics["lo_at_h"] = lo.at_h;
    r.diagnostics["lo_evaluations"] = static_cast<double>(lo.evaluations);
    r.lcb = std::max(lo.value - 3.0 * eps1 - slack, 0.0);
  }
  if (terms.uses_monte_carlo()) {
    r.diagnostics["substitute_draws"] = static_cast<double>(*terms.options().substitute_draws);
    r.diagnostics["skipped_draws"] = static_cast<double>(terms.skipped_draws());
  }
  finish(r);
  return r;
}

BoundResult bounds_adaptive(TermEvaluator& terms, Bandwidth h, double alpha) {
  const Sample& x = terms.x();
  const Sample& y = terms.y();
  BoundResult r = start(BoundMethod::adaptive, x, y, h, alpha);
  r.seed = terms.options().seed;
  if (r.n < 2 || r.m < 2)
    throw ArgumentError("adaptive bound requires n >= 2 and m >= 2 for the variance proxy");
  if (r.n < 4 || r.m < 4) r.notes.push_back("warning: the adaptive constants assume n, m >= 4");

  const std::size_t n_min = std::min(r.n, r.m);
  const auto [r1, r2] = r_constants(alpha);
  const auto sigma = variance_proxy(x, y, terms.kernel(), h);
  const double root = std::sqrt(sigma.value);
  const double inv = 1.0 / static_cast<double>(n_min);
  const double sqrt5 = std::sqrt(5.0);

  r.estimate = terms.full(h);
  r.margins["r1"] = r1;
  r.margins["r2"] = r2;
  r.margins["sigma_hat"] = sigma.value;
  r.margins["ucb_variance_term"] = root * r1;
  r.margins["ucb_constant_term"] = inv * (r1 * r1 / 3.0 + 2.0 * sqrt5 * r1 * r2);
  r.ucb_raw = r.estimate + r.margins["ucb_variance_term"] + r.margins["ucb_constant_term"];

  const SplitTerms s = terms.split(h);
  r.margins["split_x"] = s.x_split;
  r.margins["split_y"] = s.y_split;
  r.margins["lcb_variance_term"] = 6.0 * root * r1;
  r.margins["lcb_constant_term"] = inv * (2.0 * r1 * r1 + 12.0 * sqrt5 * r1 * r2);
  r.lcb = std::max(s.expression() - r.margins["lcb_variance_term"] - r.margins["lcb_constant_term"], 0.0);
  if (terms.uses_monte_carlo()) {
    r.diagnostics["substitute_draws"] = static_cast<double>(*terms.options().substitute_draws);
    r.diagnostics["skipped_draws"] = static_cast<double>(terms.skipped_draws());
  }
  finish(r);
  return r;
}

BoundResult bounds_combined(const Sample& x, const Sample& y, const Kernel& kernel, Bandwidth h,
                            double alpha, std::size_t draws, std::uint64_t seed,
                            const std::optional<BandwidthGrid>& grid, unsigned threads) {
  check_pair(x, y, kernel);
  BoundResult r = start(BoundMethod::combined, x, y, h, alpha);
  if (draws == 0) throw ArgumentError("combined bound requires B >= 1");
  if (r.n < 2 || r.m < 2)
    throw ArgumentError("combined bound requires n >= 2 and m >= 2 for the variance proxy");
  r.draws = draws;
  r.seed = seed;
  const std::size_t n_min = std::min(r.n, r.m);
  const double level = alpha / (2.0 * static_cast<double>(n_min));
  const double inv = 1.0 / static_cast<double>(n_min);

  // Every bandwidth reuses the same substream, so the scan compares
  // estimates under common random numbers.
  const std::uint64_t stream_seed = derive_seed(seed, 0);
  std::size_t skipped = 0;
  std::vector<double> visited;
  auto estimate_at = [&](Bandwidth b) {
    visited.push_back(b.value());
    const auto est = blurred_tv_monte_carlo(x.measure(), y.measure(), kernel, b, {draws, stream_seed, threads});
    skipped += est.skipped_draws;
    return est.value;
  };
  const auto up = sup_scan(estimate_at, h, n_min, grid);
  r.estimate = blurred_tv_monte_carlo(x.measure(), y.measure(), kernel, h, {draws, stream_seed, threads}).value;

  double sigma_up = 0.0;
  double sigma_at = h.value();
  for (double b : visited) {
    const double s = variance_proxy(x, y, kernel, Bandwidth(b)).value;
    if (s > sigma_up) {
      sigma_up = s;
      sigma_at = b;
    }
  }

  const auto [r1, r2] = r_constants(level);
  r.margins["level"] = level;
  r.margins["r1"] = r1;
  r.margins["r2"] = r2;
  r.margins["sigma_hat_up"] = sigma_up;
  r.margins["variance_term"] = std::sqrt(sigma_up) * r1;
  r.margins["constant_term"] = inv * (r1 * r1 / 3.0 + 2.0 * std::sqrt(5.0) * r1 * r2);
  r.margins["epsilon_B_level"] = epsilon_B(draws, level);
  r.margins["inverse_n_min"] = inv;
  r.ucb_raw = up.value + r.margins["variance_term"] + r.margins["constant_term"] +
              r.margins["epsilon_B_level"] + inv;

  r.diagnostics["up_value"] = up.value;
  r.diagnostics["up_at_h"] = up.at_h;
  r.diagnostics["up_evaluations"] = static_cast<double>(up.evaluations);
  r.diagnostics["up_truncated"] = up.truncated ? 1.0 : 0.0;
  r.diagnostics["sigma_up_at_h"] = sigma_at;
  r.diagnostics["skipped_draws"] = static_cast<double>(skipped);
  if (up.truncated) r.notes.push_back("sup over bandwidths truncated before the estimate decayed below 1/(n∧m)");
  r.notes.push_back("combined method provides an upper bound only");
  finish(r);
  return r;
}

BoundResult compute_bound(const Sample& x, const Sample& y, const Kernel& kernel, const BoundSpec& spec) {
  auto need_draws = [&] {
    if (!spec.draws) throw ArgumentError(to_string(spec.method) + " bound requires B (Monte Carlo draws)");
    return *spec.draws;
  };
  switch (spec.method) {
    case BoundMethod::monte_carlo:
      return bounds_monte_carlo(x, y, kernel, spec.h, spec.alpha, need_draws(), spec.seed,
                                spec.estimator.threads);
    case BoundMethod::combined:
      return bounds_combined(x, y, kernel, spec.h, spec.alpha, need_draws(), spec.seed, spec.grid,
                             spec.estimator.threads);
    default:
      break;
  }
  EstimatorOptions options = spec.estimator;
  options.seed = spec.seed;
  TermEvaluator terms(x, y, kernel, options);
  switch (spec.method) {
    case BoundMethod::naive: return bounds_naive(terms, spec.h, spec.alpha);
    case BoundMethod::uniform: return bounds_uniform(terms, spec.h, spec.alpha, spec.h_star, spec.grid);
    case BoundMethod::adaptive: return bounds_adaptive(terms, spec.h, spec.alpha);
    default: break;
  }
  throw ArgumentError("unhandled bound method");
}

double unit_ball_volume(std::size_t d) {
  if (d == 0) throw ArgumentError("unit_ball_volume: dimension must be positive");
  const double half = 0.5 * static_cast<double>(d);
  return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0));
}

double convergence_bound(double sup_density, double moment, double q, std::size_t d, Bandwidth h,
                         std::size_t n) {
  if (!(sup_density > 0.0) || !(moment > 0.0) || !(q > 0.0) || d == 0 || n == 0)
    throw ArgumentError("convergence_bound: all arguments must be positive");
  const double dd = static_cast<double>(d);
  const double ratio = q / (dd + q);
  return std::pow(static_cast<double>(n), -q / (2.0 * (dd + q))) * 2.0 * std::pow(moment, dd * ratio) *
         std::pow(sup_density * unit_ball_volume(d) / std::pow(h.value(), dd), ratio);
}

}  // namespace blurtv
