#include "blurtv/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "blurtv/error.hpp"
#include "blurtv/normal.hpp"
#include "blurtv/quadrature.hpp"

namespace blurtv {
namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Component {
  double mean, sd, weight;
};

std::vector<Component> components(const OracleDistribution& d) {
  if (d.dim() != 1) throw ArgumentError("1-D oracle needs one-dimensional distributions");
  std::vector<Component> out;
  if (d.family() == OracleFamily::gaussian) {
    out.push_back({d.means()[0], std::sqrt(d.covariance()[0]), 1.0});
    return out;
  }
  for (std::size_t i = 0; i < d.means().size(); ++i)
    if (d.weights()[i] > 0.0) out.push_back({d.means()[i], d.sds()[i], d.weights()[i]});
  return out;
}

/// Components of dist ∗ ψ_h: means μᵢ + h·mⱼ, variances σᵢ² + h²sⱼ², weights wᵢvⱼ.
std::vector<Component> convolve(const std::vector<Component>& dist, const Kernel& kernel, double h) {
  std::vector<Component> k;
  if (kernel.is_gaussian())
    k.push_back({0.0, 1.0, 1.0});
  else
    for (std::size_t j = 0; j < kernel.means().size(); ++j)
      k.push_back({kernel.means()[j], kernel.sds()[j], kernel.weights()[j]});
  std::vector<Component> out;
  for (const auto& a : dist)
    for (const auto& b : k)
      out.push_back({a.mean + h * b.mean, std::sqrt(a.sd * a.sd + h * h * b.sd * b.sd), a.weight * b.weight});
  return out;
}

double mixture_pdf(const std::vector<Component>& c, double z) {
  double total = 0.0;
  for (const auto& k : c) total += k.weight * normal_pdf((z - k.mean) / k.sd) / k.sd;
  return total;
}

double half_l1(const std::vector<Component>& f, const std::vector<Component>& g, double tol) {
  std::vector<double> breaks;
  double max_sd = 0.0;
  for (const auto* set : {&f, &g})
    for (const auto& k : *set) {
      breaks.push_back(k.mean);
      max_sd = std::max(max_sd, k.sd);
    }
  std::sort(breaks.begin(), breaks.end());
  const double lo = breaks.front() - 12.0 * max_sd;
  const double hi = breaks.back() + 12.0 * max_sd;
  breaks.insert(breaks.begin(), lo);
  breaks.push_back(hi);
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  auto integrand = [&](double z) { return std::abs(mixture_pdf(f, z) - mixture_pdf(g, z)); };
  const auto r = quadrature::integrate(integrand, breaks, {.abs_tol = 2.0 * tol});
  return std::clamp(0.5 * r.value, 0.0, 1.0);
}

void check_weights(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("mixture weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("mixture weights must sum to 1");
}

}  // namespace

OracleDistribution OracleDistribution::gaussian(std::vector<double> mean, std::vector<double> covariance) {
  const std::size_t d = mean.size();
  if (d == 0) throw ArgumentError("gaussian oracle needs a non-empty mean");
  if (covariance.size() != d * d) throw ArgumentError("covariance must be d×d");
  for (double v : mean)
    if (!std::isfinite(v)) throw ValidationError("gaussian oracle: non-finite mean");
  const Eigen::Map<const Matrix> cov(covariance.data(), d, d);
  if (!cov.allFinite() || !cov.isApprox(cov.transpose(), 1e-12))
    throw ValidationError("covariance must be finite and symmetric");
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) throw ValidationError("covariance is not positive-definite");
  OracleDistribution out;
  out.family_ = OracleFamily::gaussian;
  out.dim_ = d;
  out.means_ = std::move(mean);
  out.rank_ = d;
  out.factor_.resize(d * d);
  Eigen::Map<Matrix>(out.factor_.data(), d, d) = llt.matrixL();
  return out;
}

OracleDistribution OracleDistribution::gaussian_1d(double mean, double sd) {
  if (!(sd > 0.0)) throw ValidationError("gaussian oracle: sd must be positive");
  return gaussian({mean}, {sd * sd});
}

OracleDistribution OracleDistribution::mixture_1d(std::vector<double> means, std::vector<double> weights,
                                                  std::vector<double> sds) {
  if (means.empty() || means.size() != weights.size() || means.size() != sds.size())
    throw ArgumentError("mixture oracle: means, weights and sds must be non-empty and equal length");
  check_weights(weights);
  for (std::size_t i = 0; i < means.size(); ++i)
    if (!std::isfinite(means[i]) || !(sds[i] > 0.0))
      throw ValidationError("mixture oracle: means must be finite and sds positive");
  OracleDistribution out;
  out.family_ = OracleFamily::gaussian_mixture_1d;
  out.dim_ = 1;
  out.means_ = std::move(means);
  out.weights_ = std::move(weights);
  out.sds_ = std::move(sds);
  return out;
}

OracleDistribution OracleDistribution::spiked(std::size_t dim, double beta, double tau, double sign) {
  if (dim == 0) throw ArgumentError("spiked oracle: dimension must be positive");
  if (!(tau > 0.0 && tau <= 1.0)) throw ArgumentError("spiked oracle: tau must lie in (0, 1]");
  std::vector<double> mean(dim, 0.0);
  mean[0] = sign * beta;
  std::vector<double> cov(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) cov[i * dim + i] = tau;
  cov[0] = 1.0;
  return gaussian(std::move(mean), std::move(cov));
}

OracleDistribution OracleDistribution::embedded_1d(double mean, double sd, std::vector<double> column) {
  if (column.empty()) throw ArgumentError("embedded oracle: empty column");
  if (!(sd > 0.0)) throw ValidationError("embedded oracle: sd must be positive");
  double norm = 0.0;
  for (double a : column) norm += a * a;
  if (std::abs(norm - 1.0) > 1e-10) throw ArgumentError("embedded oracle: column must have unit norm");
  OracleDistribution out;
  out.family_ = OracleFamily::gaussian;
  out.dim_ = column.size();
  out.rank_ = 1;
  for (double a : column) {
    out.means_.push_back(mean * a);
    out.factor_.push_back(sd * a);
  }
  return out;
}

std::vector<double> OracleDistribution::covariance() const {
  if (family_ != OracleFamily::gaussian) throw ArgumentError("covariance is defined for the gaussian family");
  const Eigen::Map<const Matrix> f(factor_.data(), dim_, rank_);
  std::vector<double> out(dim_ * dim_);
  Eigen::Map<Matrix>(out.data(), dim_, dim_) = f * f.transpose();
  return out;
}

void OracleDistribution::sample(Rng& rng, std::span<double> out) const {
  if (out.size() != dim_) throw ArgumentError("oracle sample: output size must equal dim");
  if (family_ == OracleFamily::gaussian_mixture_1d) {
    const double u = rng.uniform();
    double cum = 0.0;
    std::size_t pick = 0;
    for (; pick + 1 < weights_.size(); ++pick) {
      cum += weights_[pick];
      if (u < cum) break;
    }
    // Rounding in the cumulative sum must never select a zero-weight tail component.
    while (weights_[pick] == 0.0 && pick > 0) --pick;
    out[0] = means_[pick] + sds_[pick] * rng.normal();
    return;
  }
  std::vector<double> z(rank_);
  for (auto& v : z) v = rng.normal();
  for (std::size_t i = 0; i < dim_; ++i) {
    double v = means_[i];
    for (std::size_t k = 0; k < rank_; ++k) v += factor_[i * rank_ + k] * z[k];
    out[i] = v;
  }
}

double oracle_blurred_tv_gaussian(const OracleDistribution& p, const OracleDistribution& q, Bandwidth h) {
  if (p.family() != OracleFamily::gaussian || q.family() != OracleFamily::gaussian)
    throw ArgumentError("closed-form oracle needs two Gaussian distributions");
  if (p.dim() != q.dim()) throw ArgumentError("closed-form oracle: dimension mismatch");
  const std::size_t d = p.dim();
  const auto cp = p.covariance();
  const auto cq = q.covariance();
  const Eigen::Map<const Matrix> sp(cp.data(), d, d);
  const Eigen::Map<const Matrix> sq(cq.data(), d, d);
  if (!sp.isApprox(sq, 1e-12)) {
    if (d == 1) return oracle_blurred_tv_quadrature_1d(p, q, Kernel::gaussian(1), h);
    throw ArgumentError("closed-form oracle needs equal covariances above dimension 1");
  }
  const double h2 = h.value() * h.value();
  const Matrix s = sp + h2 * Matrix::Identity(d, d);
  Eigen::VectorXd delta(d);
  for (std::size_t i = 0; i < d; ++i) delta[i] = p.means()[i] - q.means()[i];
  const Eigen::VectorXd solved = s.llt().solve(delta);
  const double gap = std::sqrt(std::max(delta.dot(solved), 0.0));
  return two_phi_minus_one(gap / 2.0);
}

double oracle_blurred_tv_quadrature_1d(const OracleDistribution& p, const OracleDistribution& q,
                                       const Kernel& kernel, Bandwidth h, double tol) {
  if (kernel.dim() != 1) throw ArgumentError("1-D oracle needs a one-dimensional kernel");
  if (!(tol > 0.0)) throw ArgumentError("oracle tolerance must be positive");
  return half_l1(convolve(components(p), kernel, h.value()), convolve(components(q), kernel, h.value()), tol);
}

double oracle_tv_1d(const OracleDistribution& p, const OracleDistribution& q, double tol) {
  if (!(tol > 0.0)) throw ArgumentError("oracle tolerance must be positive");
  return half_l1(components(p), components(q), tol);
}

Sample sample_oracle(const OracleDistribution& dist, std::size_t n, Rng& rng, std::string label) {
  if (n == 0) throw ArgumentError("sample_oracle: n must be positive");
  const std::size_t d = dist.dim();
  std::vector<double> coords(n * d);
  for (std::size_t i = 0; i < n; ++i) dist.sample(rng, std::span<double>(coords).subspan(i * d, d));
  return Sample(std::move(coords), d, std::move(label));
}

Sample sample_unit_ball(std::size_t dim, std::size_t n, Rng& rng, std::string label) {
  if (dim == 0 || n == 0) throw ArgumentError("sample_unit_ball: dimension and n must be positive");
  std::vector<double> coords(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    double* x = coords.data() + i * dim;
    double norm = 0.0;
    do {
      norm = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        x[k] = rng.normal();
        norm += x[k] * x[k];
      }
    } while (norm == 0.0);
    const double scale = std::pow(rng.uniform(), 1.0 / static_cast<double>(dim)) / std::sqrt(norm);
    for (std::size_t k = 0; k < dim; ++k) x[k] *= scale;
  }
  return Sample(std::move(coords), dim, std::move(label));
}

}  // namespace blurtv
