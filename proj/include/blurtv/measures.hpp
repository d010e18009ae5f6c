#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "blurtv/kernels.hpp"

namespace blurtv {

class EmpiricalMeasure;

/// An ordered list of n ≥ 1 points in R^d, stored row-major.
class Sample {
 public:
  Sample(std::vector<double> coords, std::size_t dim, std::string label = {});
  static Sample from_points(const std::vector<std::vector<double>>& points, std::string label = {});

  std::size_t size() const noexcept { return coords_->size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }
  std::span<const double> coords() const noexcept { return *coords_; }
  std::span<const double> point(std::size_t i) const { return coords().subspan(i * dim_, dim_); }

  /// Uniform-weight measure over all points; shares storage with the sample.
  EmpiricalMeasure measure() const;

 private:
  std::shared_ptr<const std::vector<double>> coords_;
  std::size_t dim_;
  std::string label_;
};

/// Uniform distribution over a contiguous run of a sample's points.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure(std::shared_ptr<const std::vector<double>> storage, std::size_t dim,
                   std::size_t first, std::size_t count);

  std::size_t size() const noexcept { return count_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> coords() const noexcept {
    return std::span<const double>(*storage_).subspan(first_ * dim_, count_ * dim_);
  }
  std::span<const double> point(std::size_t i) const { return coords().subspan(i * dim_, dim_); }

  /// Sub-measure over points [first, first + count) of this measure.
  EmpiricalMeasure slice(std::size_t first, std::size_t count) const;

 private:
  std::shared_ptr<const std::vector<double>> storage_;
  std::size_t dim_;
  std::size_t first_;
  std::size_t count_;
};

/// First ⌊n/2⌋ and last ⌈n/2⌉ points, in index order.
struct SplitPair {
  EmpiricalMeasure first;
  EmpiricalMeasure second;
};

/// Throws SplitUndefinedError when the measure has fewer than two points.
SplitPair split_halves(const EmpiricalMeasure& measure);
SplitPair split_halves(const Sample& sample);

/// (1/n) Σᵢ ψ_h(z − Xᵢ).
double smoothed_density(const EmpiricalMeasure& measure, const Kernel& kernel, Bandwidth h,
                        std::span<const double> z);

/// One point per line, `dim` comma-separated reals, no header; LF or CRLF.
Sample parse_sample(std::istream& in, std::size_t dim, std::string label = {});
Sample load_sample(const std::filesystem::path& path, std::size_t dim, std::string label = {});

}  // namespace blurtv
