#include "tlif/sample.hpp"

#include <algorithm>
#include <cmath>

#include "tlif/error.hpp"

namespace tlif {

namespace {

double ordered_mean(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

Sample Sample::from_values(std::vector<double> values) {
  if (values.empty()) raise(ErrorCode::InvalidParameter, "sample must contain at least one value");
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      raise(ErrorCode::InvalidParameter, "sample values must be finite and non-negative");
    }
  }
  std::sort(values.begin(), values.end());
  const double mean = ordered_mean(values);
  if (!(mean > 0.0)) raise(ErrorCode::InvalidParameter, "sample mean must be positive");
  return Sample(std::move(values), mean);
}

Sample Sample::with_value(double z) const {
  if (!std::isfinite(z) || z < 0.0) {
    raise(ErrorCode::InvalidParameter, "inserted value must be finite and non-negative");
  }
  std::vector<double> out;
  out.reserve(values_.size() + 1);
  const auto pos = std::upper_bound(values_.begin(), values_.end(), z);
  out.insert(out.end(), values_.begin(), pos);
  out.push_back(z);
  out.insert(out.end(), pos, values_.end());
  const double mean = ordered_mean(out);
  return Sample(std::move(out), mean);
}

}  // namespace tlif
