#include "tracemc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "tracemc/kernel.hpp"
#include "tracemc/metrics.hpp"

namespace tracemc {
namespace {

double interpolate(const std::vector<double>& sorted, double q) {
  double pos = q * static_cast<double>(sorted.size() - 1);
  auto i = static_cast<std::size_t>(std::floor(pos));
  double frac = pos - static_cast<double>(i);
  if (i + 1 >= sorted.size() || frac == 0.0) return sorted[i];
  double a = sorted[i];
  double b = sorted[i + 1];
  if (a == b) return a;  // also covers inf == inf
  return a + frac * (b - a);
}

}  // namespace

Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("quartiles: no values");
  std::sort(values.begin(), values.end());
  return {interpolate(values, 0.25), interpolate(values, 0.5), interpolate(values, 0.75)};
}

double median(std::vector<double> values) { return quartiles(std::move(values)).median; }

std::vector<std::uint64_t> default_checkpoints(std::uint64_t budget) {
  constexpr int kPoints = 20;
  std::vector<std::uint64_t> out;
  double lo = std::log(std::max<double>(1.0, static_cast<double>(budget) / 100.0));
  double hi = std::log(static_cast<double>(std::max<std::uint64_t>(budget, 1)));
  for (int i = 0; i < kPoints; ++i) {
    double t = lo + (hi - lo) * i / (kPoints - 1);
    auto c = static_cast<std::uint64_t>(std::llround(std::exp(t)));
    if (out.empty() || c > out.back()) out.push_back(c);
  }
  out.back() = budget;
  return out;
}

std::vector<double> metric_curve(const BenchmarkModel& model, const KernelSpec& spec,
                                 std::uint64_t budget, std::uint64_t seed,
                                 const std::vector<std::uint64_t>& checkpoints,
                                 std::uint64_t* ll_spent, std::uint64_t* samples) {
  auto tracker = make_tracker(model);
  std::vector<double> curve;
  curve.reserve(checkpoints.size());
  auto sink = [&](std::uint64_t ll_count, const Trace& trace) {
    while (curve.size() < checkpoints.size() && ll_count > checkpoints[curve.size()]) {
      curve.push_back(tracker->value());
    }
    tracker->add(trace.predicts);
  };
  RunStats stats = run_inference(model.program, spec, budget, seed, sink);
  while (curve.size() < checkpoints.size()) curve.push_back(tracker->value());
  if (ll_spent != nullptr) *ll_spent = stats.ll_evaluations;
  if (samples != nullptr) *samples = tracker->count();
  return curve;
}

ExperimentResult run_experiment(const BenchmarkModel& model, const std::vector<KernelSpec>& specs,
                                const ExperimentConfig& config) {
  if (config.runs == 0) throw std::invalid_argument("run_experiment: runs must be positive");
  for (const auto& s : specs) s.validate();

  ExperimentResult result;
  result.model = model.name;
  result.checkpoints =
      config.checkpoints.empty() ? default_checkpoints(config.budget) : config.checkpoints;
  if (!std::is_sorted(result.checkpoints.begin(), result.checkpoints.end())) {
    throw std::invalid_argument("run_experiment: checkpoints must be increasing");
  }

  struct Slot {
    std::vector<double> curve;
    std::uint64_t ll_spent = 0;
    std::uint64_t samples = 0;
    bool failed = false;
  };
  std::vector<std::vector<Slot>> slots(specs.size(), std::vector<Slot>(config.runs));

  const std::size_t jobs = specs.size() * config.runs;
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      std::size_t k = job / config.runs;
      std::size_t r = job % config.runs;
      Slot& slot = slots[k][r];
      try {
        slot.curve = metric_curve(model, specs[k], config.budget, config.base_seed + r,
                                  result.checkpoints, &slot.ll_spent, &slot.samples);
      } catch (const ImpossibleModelError& e) {
        slot.failed = true;
        std::lock_guard lock(log_mutex);
        std::cerr << "warning: " << model.name << " " << specs[k].name() << " seed "
                  << config.base_seed + r << ": " << e.what() << "\n";
      }
    }
  };

  unsigned n_threads = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  n_threads = static_cast<unsigned>(std::clamp<std::size_t>(n_threads, 1, jobs));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }

  for (std::size_t k = 0; k < specs.size(); ++k) {
    KernelCurve kc;
    kc.spec = specs[k];
    for (auto& slot : slots[k]) {
      if (slot.failed) {
        ++kc.failed_runs;
        continue;
      }
      kc.metric.push_back(std::move(slot.curve));
      kc.ll_spent.push_back(slot.ll_spent);
      kc.samples.push_back(slot.samples);
    }
    if (!kc.metric.empty()) {
      for (std::size_t c = 0; c < result.checkpoints.size(); ++c) {
        std::vector<double> column;
        for (const auto& run : kc.metric) column.push_back(run[c]);
        kc.summary.push_back(quartiles(std::move(column)));
      }
    }
    result.kernels.push_back(std::move(kc));
  }
  return result;
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins, double lo,
                                    double hi) {
  if (bins == 0 || !(hi > lo)) throw std::invalid_argument("histogram: bad bin specification");
  std::vector<HistogramBin> out(bins);
  double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    out[i].lo = lo + width * static_cast<double>(i);
    out[i].hi = i + 1 == bins ? hi : lo + width * static_cast<double>(i + 1);
  }
  if (values.empty()) return out;
  for (double v : values) {
    if (!(v >= lo && v <= hi)) continue;
    auto i = std::min(bins - 1, static_cast<std::size_t>((v - lo) / width));
    out[i].mass += 1.0;
  }
  for (auto& b : out) b.mass /= static_cast<double>(values.size());
  return out;
}

}  // namespace tracemc
