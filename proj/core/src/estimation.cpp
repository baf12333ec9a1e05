#include "tlif/estimation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "tlif/error.hpp"
#include "tlif/influence.hpp"

namespace tlif {

Sample draw_sample(const Distribution& f, std::size_t n, RngStream& rng) {
  if (n == 0) raise(ErrorCode::InvalidParameter, "sample size must be positive");
  std::vector<double> values(n);
  for (auto& v : values) v = f.quantile(rng.next_uniform());
  return Sample::from_values(std::move(values));
}

double sensitivity_curve(const MeasureFunctional& t, const Sample& s, double z) {
  const double n = static_cast<double>(s.size());
  return (n + 1.0) * (t.evaluate(s.with_value(z)) - t.evaluate(s));
}

namespace {

struct Replica {
  double value = 0.0;
  std::size_t rejected = 0;
};

Replica run_replica(const MeasureFunctional& t, const Distribution& f, std::size_t n, std::size_t reps,
                    std::size_t index, std::uint64_t seed, const MCOptions& options) {
  Replica out;
  for (std::size_t attempt = 0;; ++attempt) {
    RngStream rng(seed, options.first_stream + index + attempt * reps);
    try {
      out.value = t.evaluate(draw_sample(f, n, rng));
      if (!std::isfinite(out.value)) raise(ErrorCode::DomainError, "non-finite plug-in value");
      return out;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DomainError && e.code() != ErrorCode::InvalidParameter &&
          e.code() != ErrorCode::DegenerateDenominator) {
        throw;
      }
      if (++out.rejected > options.max_rejections) {
        raise(ErrorCode::DomainError, t.id() + ": too many rejected replicas");
      }
    }
  }
}

}  // namespace

MCReport mc_variance_study(const MeasureFunctional& t, const Distribution& f, std::size_t n,
                           std::size_t reps, std::uint64_t seed, const MCOptions& options) {
  if (n == 0 || reps < 2) raise(ErrorCode::InvalidParameter, "mc study needs n >= 1 and reps >= 2");

  MCReport report;
  report.measure_id = t.id();
  report.distribution = f.describe();
  report.n = n;
  report.reps = reps;
  report.seed = seed;
  report.population_value = t.evaluate(f, options.tol);
  report.if_variance = asymptotic_variance(t, f, options.tol);

  std::vector<Replica> replicas(reps);
  unsigned workers = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, reps));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto work = [&] {
    for (std::size_t r; (r = next.fetch_add(1)) < reps;) {
      try {
        replicas[r] = run_replica(t, f, n, reps, r, seed, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = reps;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  // Reduction in replica order, independent of scheduling.
  const double nn = static_cast<double>(n);
  const double r = static_cast<double>(reps);
  double sq = 0.0, sum = 0.0;
  for (const auto& rep : replicas) {
    const double d = rep.value - report.population_value;
    sq += d * d;
    sum += rep.value;
    report.rejected += rep.rejected;
  }
  const double mean = sum / r;
  double centered = 0.0;
  for (const auto& rep : replicas) centered += (rep.value - mean) * (rep.value - mean);
  report.mc_variance = nn * sq / r;
  report.replica_variance = nn * centered / (r - 1.0);

  report.degenerate = !(report.if_variance > 1e-300);
  if (!report.degenerate) report.ratio = report.mc_variance / report.if_variance;
  return report;
}

}  // namespace tlif
