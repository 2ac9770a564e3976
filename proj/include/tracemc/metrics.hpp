#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "tracemc/models.hpp"

namespace tracemc {

/// sup_x |F_n(x) - F(x)| for an empirical distribution given by `samples`
/// (unweighted) against a continuous reference cdf. Ties are handled by
/// comparing the reference against the empirical cdf on both sides of each
/// distinct value. Returns 1 for an empty sample.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Weighted version: `weights` need not be normalized.
double ks_statistic(std::span<const double> values, std::span<const double> weights,
                    const std::function<double(double)>& cdf);

/// KL(p || q) in nats, using 0 ln 0 = 0. Returns +inf when q is zero where p
/// is positive. Entries missing from the shorter vector count as zero.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// Empirical pmf over {0, ..., n-1} of integer-valued samples; samples outside
/// that range are ignored in the counts but kept in the denominator.
std::vector<double> empirical_pmf(std::span<const double> samples, std::size_t n);

/// Mean squared error; throws std::invalid_argument on a length mismatch.
double mse(std::span<const double> predictions, std::span<const double> targets);

/// Incrementally tracks the model's metric on the running average of the
/// samples seen so far (all samples carry equal weight).
class MetricTracker {
 public:
  virtual ~MetricTracker() = default;
  virtual void add(const Predicts& predicts) = 0;
  /// Metric of everything added so far.
  virtual double value() const = 0;
  virtual std::size_t count() const = 0;
};

/// Throws std::invalid_argument when the model has no oracle for its metric.
std::unique_ptr<MetricTracker> make_tracker(const BenchmarkModel& model);

}  // namespace tracemc
