#include "blurtv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "blurtv/error.hpp"
#include "blurtv/normal.hpp"
#include "blurtv/quadrature.hpp"

namespace blurtv {

Bandwidth::Bandwidth(double h) : h_(h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    std::ostringstream msg;
    msg << "bandwidth must be a finite positive real, got " << h;
    throw ArgumentError(msg.str());
  }
}

std::string to_string(KernelFamily family) {
  return family == KernelFamily::gaussian ? "gaussian" : "gaussian_mixture_1d";
}

Kernel Kernel::gaussian(std::size_t dim) {
  if (dim == 0) throw ArgumentError("kernel dimension must be positive");
  return Kernel(KernelFamily::gaussian, dim);
}

Kernel Kernel::gaussian_mixture_1d(std::vector<double> means, std::vector<double> weights,
                                   std::vector<double> sds) {
  if (means.empty() || means.size() != weights.size() || means.size() != sds.size())
    throw ArgumentError("mixture kernel: means, weights and sds must be non-empty and equal length");
  for (std::size_t j = 0; j < means.size(); ++j) {
    if (!std::isfinite(means[j])) throw ArgumentError("mixture kernel: non-finite mean");
    if (!(weights[j] > 0.0) || !std::isfinite(weights[j]))
      throw ArgumentError("mixture kernel: weights must be positive");
    if (!(sds[j] > 0.0) || !std::isfinite(sds[j]))
      throw ArgumentError("mixture kernel: standard deviations must be positive");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "mixture kernel: weights sum to " << total << ", expected 1";
    throw ArgumentError(msg.str());
  }
  Kernel k(KernelFamily::gaussian_mixture_1d, 1);
  k.means_ = std::move(means);
  k.weights_ = std::move(weights);
  k.sds_ = std::move(sds);
  return k;
}

Kernel Kernel::trimodal() {
  const double w = 1.0 / 3.0;
  return gaussian_mixture_1d({-4.0, 0.0, 4.0}, {w, w, w}, {1.0, 1.0, 1.0});
}

void Kernel::check_dim(std::span<const double> u) const {
  if (u.size() != dim_) {
    std::ostringstream msg;
    msg << "dimension mismatch: kernel has dim " << dim_ << ", point has " << u.size();
    throw ArgumentError(msg.str());
  }
}

double Kernel::density_1d(double u) const noexcept {
  if (family_ == KernelFamily::gaussian) return normal_pdf(u);
  double value = 0.0;
  for (std::size_t j = 0; j < means_.size(); ++j)
    value += weights_[j] * normal_pdf((u - means_[j]) / sds_[j]) / sds_[j];
  return value;
}

double Kernel::density(std::span<const double> u) const {
  check_dim(u);
  if (family_ == KernelFamily::gaussian) {
    double sq = 0.0;
    for (double x : u) sq += x * x;
    return std::exp(-0.5 * sq) / std::pow(2.0 * std::numbers::pi, 0.5 * static_cast<double>(dim_));
  }
  return density_1d(u[0]);
}

double Kernel::scaled_density(Bandwidth h, std::span<const double> u) const {
  check_dim(u);
  std::vector<double> scaled(u.begin(), u.end());
  for (double& x : scaled) x /= h.value();
  return density(scaled) / std::pow(h.value(), static_cast<double>(dim_));
}

void Kernel::sample(Rng& rng, std::span<double> out) const {
  check_dim(out);
  if (family_ == KernelFamily::gaussian) {
    for (double& x : out) x = rng.normal();
    return;
  }
  const double pick = rng.uniform();
  double cumulative = 0.0;
  std::size_t component = means_.size() - 1;
  for (std::size_t j = 0; j < means_.size(); ++j) {
    cumulative += weights_[j];
    if (pick < cumulative) {
      component = j;
      break;
    }
  }
  out[0] = means_[component] + sds_[component] * rng.normal();
}

std::vector<double> Kernel::sample(Rng& rng) const {
  std::vector<double> out(dim_);
  sample(rng, out);
  return out;
}

double gaussian_shift_modulus(double distance) noexcept {
  return two_phi_minus_one(0.5 * distance);
}

double Kernel::shift_modulus(std::span<const double> v) const {
  check_dim(v);
  if (family_ == KernelFamily::gaussian) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    return gaussian_shift_modulus(std::sqrt(sq));
  }
  return shift_modulus_quadrature(*this, v[0]);
}

double Kernel::support_radius() const noexcept {
  if (family_ == KernelFamily::gaussian) return 1.0;
  double max_abs_mean = 0.0;
  for (double m : means_) max_abs_mean = std::max(max_abs_mean, std::abs(m));
  return max_abs_mean + 10.0 * *std::max_element(sds_.begin(), sds_.end());
}

bool Kernel::is_symmetric() const noexcept {
  if (family_ == KernelFamily::gaussian) return true;
  // Symmetric iff each component has a mirrored partner with equal weight and sd.
  std::vector<bool> used(means_.size(), false);
  for (std::size_t i = 0; i < means_.size(); ++i) {
    if (used[i]) continue;
    bool matched = false;
    for (std::size_t j = i; j < means_.size(); ++j) {
      if (used[j] && j != i) continue;
      if (std::abs(means_[i] + means_[j]) <= 1e-12 && std::abs(weights_[i] - weights_[j]) <= 1e-12 &&
          std::abs(sds_[i] - sds_[j]) <= 1e-12) {
        used[i] = used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

std::string Kernel::describe() const {
  if (family_ == KernelFamily::gaussian) return "gaussian(d=" + std::to_string(dim_) + ")";
  std::ostringstream out;
  out.precision(17);
  out << "mix:";
  auto list = [&](const std::vector<double>& xs) {
    for (std::size_t j = 0; j < xs.size(); ++j) out << (j ? "," : "") << xs[j];
  };
  list(means_);
  out << "/";
  list(weights_);
  out << "/";
  list(sds_);
  return out.str();
}

double shift_modulus_quadrature(const Kernel& kernel, double v, double abs_tol) {
  if (kernel.dim() != 1) throw ArgumentError("shift_modulus_quadrature: kernel must be 1-D");
  if (v == 0.0) return 0.0;
  double lo;
  double hi;
  std::vector<double> breaks;
  if (kernel.is_gaussian()) {
    lo = -40.0;
    hi = 40.0;
    breaks = {lo, 0.5 * v, hi};
  } else {
    const auto& means = kernel.means();
    const double max_sd = *std::max_element(kernel.sds().begin(), kernel.sds().end());
    lo = *std::min_element(means.begin(), means.end()) - 10.0 * max_sd;
    hi = *std::max_element(means.begin(), means.end()) + 10.0 * max_sd;
    breaks.push_back(lo);
    for (double m : means) {
      breaks.push_back(m);
      breaks.push_back(m + v);
    }
    breaks.push_back(hi);
    for (double& b : breaks) b = std::clamp(b, lo, hi);
    std::sort(breaks.begin(), breaks.end());
  }
  auto integrand = [&](double u) {
    return std::max(kernel.density_1d(u) - kernel.density_1d(u - v), 0.0);
  };
  const auto result = quadrature::integrate(integrand, breaks, {.abs_tol = abs_tol});
  return std::clamp(result.value, 0.0, 1.0);
}

namespace {

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) {
    std::size_t used = 0;
    double value;
    try {
      value = std::stod(field, &used);
    } catch (const std::exception&) {
      throw ArgumentError("kernel spec: cannot parse '" + field + "' as a real");
    }
    if (used != field.size()) throw ArgumentError("kernel spec: trailing text in '" + field + "'");
    out.push_back(value);
  }
  return out;
}

}  // namespace

Kernel parse_kernel_spec(const std::string& spec, std::size_t dim) {
  if (spec == "gaussian") return Kernel::gaussian(dim);
  if (spec.rfind("mix:", 0) == 0) {
    if (dim != 1) throw ArgumentError("mixture kernels are one-dimensional; got --dim " + std::to_string(dim));
    const std::string body = spec.substr(4);
    const auto first = body.find('/');
    const auto second = first == std::string::npos ? std::string::npos : body.find('/', first + 1);
    if (second == std::string::npos)
      throw ArgumentError("kernel spec must look like mix:<means>/<weights>/<sds>");
    return Kernel::gaussian_mixture_1d(parse_reals(body.substr(0, first)),
                                       parse_reals(body.substr(first + 1, second - first - 1)),
                                       parse_reals(body.substr(second + 1)));
  }
  throw ArgumentError("unknown kernel spec '" + spec + "' (expected gaussian or mix:<means>/<weights>/<sds>)");
}

}  // namespace blurtv
