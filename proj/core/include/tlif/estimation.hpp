#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "tlif/distribution.hpp"
#include "tlif/measures.hpp"
#include "tlif/rng.hpp"
#include "tlif/sample.hpp"

namespace tlif {

/// Default seed shipped with the tools.
inline constexpr std::uint64_t kDefaultSeed = 42;

/// n inverse-transform variates Q(U), U from `rng`, returned sorted.
Sample draw_sample(const Distribution& f, std::size_t n, RngStream& rng);

/// SC_n(z) = (n + 1) (T(s with z inserted) - T(s)).
double sensitivity_curve(const MeasureFunctional& t, const Sample& s, double z);

struct MCReport {
  std::string measure_id;
  std::string distribution;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  double population_value = 0.0;  // T(F)
  double mc_variance = 0.0;       // mean of n (T(F_n) - T(F))^2 over replicas
  double replica_variance = 0.0;  // n times the two-pass variance of T(F_n)
  double if_variance = 0.0;       // integral of IF^2 dF
  std::optional<double> ratio;    // mc_variance / if_variance; empty when degenerate
  bool degenerate = false;
  std::size_t rejected = 0;
};

struct MCOptions {
  Tolerance tol{};
  /// Attempt k of replica r uses RngStream(seed, first_stream + r + k * reps).
  std::uint64_t first_stream = 0;
  std::size_t max_rejections = 100;
  /// Concurrent workers; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// Monte Carlo check of sigma^2 = E IF^2 against the spread of sqrt(n) (T(F_n) - T(F)).
/// A vanishing if_variance makes the report degenerate (no ratio).
MCReport mc_variance_study(const MeasureFunctional& t, const Distribution& f, std::size_t n,
                           std::size_t reps, std::uint64_t seed, const MCOptions& options = {});

}  // namespace tlif
