#include "blurtv/measures.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "blurtv/error.hpp"

namespace blurtv {

Sample::Sample(std::vector<double> coords, std::size_t dim, std::string label)
    : dim_(dim), label_(std::move(label)) {
  if (dim == 0) throw ArgumentError("sample dimension must be positive");
  if (coords.empty()) throw ArgumentError("sample must contain at least one point");
  if (coords.size() % dim != 0)
    throw ArgumentError("sample coordinates are not a whole number of points");
  for (double x : coords)
    if (!std::isfinite(x)) throw ValidationError("sample contains a non-finite value");
  coords_ = std::make_shared<const std::vector<double>>(std::move(coords));
}

Sample Sample::from_points(const std::vector<std::vector<double>>& points, std::string label) {
  if (points.empty()) throw ArgumentError("sample must contain at least one point");
  const std::size_t dim = points.front().size();
  std::vector<double> flat;
  flat.reserve(points.size() * dim);
  for (const auto& p : points) {
    if (p.size() != dim) throw ArgumentError("all points must have the same dimension");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return Sample(std::move(flat), dim, std::move(label));
}

EmpiricalMeasure Sample::measure() const { return EmpiricalMeasure(coords_, dim_, 0, size()); }

EmpiricalMeasure::EmpiricalMeasure(std::shared_ptr<const std::vector<double>> storage,
                                   std::size_t dim, std::size_t first, std::size_t count)
    : storage_(std::move(storage)), dim_(dim), first_(first), count_(count) {
  if (count_ == 0) throw ArgumentError("empirical measure needs at least one point");
  if ((first_ + count_) * dim_ > storage_->size())
    throw ArgumentError("empirical measure range exceeds the sample");
}

EmpiricalMeasure EmpiricalMeasure::slice(std::size_t first, std::size_t count) const {
  if (first + count > count_) throw ArgumentError("slice exceeds the measure");
  return EmpiricalMeasure(storage_, dim_, first_ + first, count);
}

SplitPair split_halves(const EmpiricalMeasure& measure) {
  const std::size_t n = measure.size();
  if (n < 2) throw SplitUndefinedError("half-sample split needs n >= 2, got n = " + std::to_string(n));
  const std::size_t half = n / 2;
  return {measure.slice(0, half), measure.slice(half, n - half)};
}

SplitPair split_halves(const Sample& sample) { return split_halves(sample.measure()); }

double smoothed_density(const EmpiricalMeasure& measure, const Kernel& kernel, Bandwidth h,
                        std::span<const double> z) {
  if (z.size() != measure.dim() || kernel.dim() != measure.dim())
    throw ArgumentError("smoothed_density: dimension mismatch");
  const std::size_t d = measure.dim();
  std::vector<double> diff(d);
  double total = 0.0;
  for (std::size_t i = 0; i < measure.size(); ++i) {
    const auto x = measure.point(i);
    for (std::size_t k = 0; k < d; ++k) diff[k] = z[k] - x[k];
    total += kernel.scaled_density(h, diff);
  }
  return total / static_cast<double>(measure.size());
}

Sample parse_sample(std::istream& in, std::size_t dim, std::string label) {
  if (dim == 0) throw ArgumentError("--dim must be positive");
  std::vector<double> coords;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t fields = 0;
    const char* cursor = line.c_str();
    while (true) {
      char* end = nullptr;
      errno = 0;
      const double value = std::strtod(cursor, &end);
      if (end == cursor) {
        std::ostringstream msg;
        msg << "line " << line_no << ": cannot parse field " << fields + 1 << " as a real";
        throw IoError(msg.str());
      }
      if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "line " << line_no << ": non-finite value in field " << fields + 1;
        throw ValidationError(msg.str());
      }
      coords.push_back(value);
      ++fields;
      while (*end == ' ' || *end == '\t') ++end;
      if (*end == '\0') break;
      if (*end != ',') {
        std::ostringstream msg;
        msg << "line " << line_no << ": unexpected character '" << *end << "'";
        throw IoError(msg.str());
      }
      cursor = end + 1;
    }
    if (fields != dim) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected " << dim << " fields, found " << fields;
      throw IoError(msg.str());
    }
  }
  if (coords.empty()) throw IoError("sample file contains no points");
  return Sample(std::move(coords), dim, std::move(label));
}

Sample load_sample(const std::filesystem::path& path, std::size_t dim, std::string label) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sample file " + path.string());
  try {
    return parse_sample(in, dim, std::move(label));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace blurtv
