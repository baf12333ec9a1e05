#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tlif {

/// Sorted, non-negative income observations with a positive mean.
class Sample {
 public:
  /// Sorts the values. Throws InvalidParameter for an empty list, a
  /// negative or non-finite value, or a zero mean.
  static Sample from_values(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double mean() const noexcept { return mean_; }

  /// Copy of this sample with z inserted at its sorted position.
  Sample with_value(double z) const;

 private:
  Sample(std::vector<double> values, double mean) : values_(std::move(values)), mean_(mean) {}

  std::vector<double> values_;
  double mean_;
};

}  // namespace tlif
