#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tracemc/models.hpp"
#include "tracemc/scheduler.hpp"

namespace tracemc {

struct Quartiles {
  double p25 = 0.0;
  double median = 0.0;
  double p75 = 0.0;
};

/// Linear-interpolation quantiles of `values` (sorted internally). Infinite
/// entries are allowed.
Quartiles quartiles(std::vector<double> values);
double median(std::vector<double> values);

struct KernelCurve {
  KernelSpec spec;
  /// metric[run][checkpoint]
  std::vector<std::vector<double>> metric;
  /// Across-run quartiles at each checkpoint.
  std::vector<Quartiles> summary;
  /// LL-evaluations actually spent by each run.
  std::vector<std::uint64_t> ll_spent;
  /// Samples recorded by each run.
  std::vector<std::uint64_t> samples;
  std::size_t failed_runs = 0;

  /// Median across runs at the last checkpoint.
  double final_median() const { return summary.empty() ? 0.0 : summary.back().median; }
};

struct ExperimentResult {
  std::string model;
  std::vector<std::uint64_t> checkpoints;
  std::vector<KernelCurve> kernels;
};

struct ExperimentConfig {
  std::uint64_t budget = 100000;
  std::size_t runs = 20;
  std::uint64_t base_seed = 1;
  /// Empty means default_checkpoints(budget).
  std::vector<std::uint64_t> checkpoints;
  /// 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// 20 log-spaced LL-evaluation counts from budget/100 to budget.
std::vector<std::uint64_t> default_checkpoints(std::uint64_t budget);

/// Runs `config.runs` chains per kernel with seeds base_seed + run index and
/// evaluates the model metric of the running sample average at every
/// checkpoint (all samples with ll_count <= checkpoint). Chains whose
/// initialization fails are reported on stderr and left out of the summary.
ExperimentResult run_experiment(const BenchmarkModel& model, const std::vector<KernelSpec>& specs,
                                const ExperimentConfig& config);

/// Metric of a single chain at each checkpoint.
std::vector<double> metric_curve(const BenchmarkModel& model, const KernelSpec& spec,
                                 std::uint64_t budget, std::uint64_t seed,
                                 const std::vector<std::uint64_t>& checkpoints,
                                 std::uint64_t* ll_spent = nullptr,
                                 std::uint64_t* samples = nullptr);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  double mass = 0.0;
};

/// Equal-width histogram over [lo, hi]; values outside are dropped from the
/// counts but not from the normalization.
std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins, double lo,
                                    double hi);

}  // namespace tracemc
