#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "tracemc/slice.hpp"
#include "tracemc/trace.hpp"

namespace tracemc {

enum class KernelKind { Mh, Slice, NaiveSlice, Mixture };

struct KernelSpec {
  KernelKind kind = KernelKind::Slice;
  /// Probability of taking an MH step; only used by Mixture.
  double mh_weight = 0.0;
  SliceConfig slice;

  static KernelSpec mh() { return {KernelKind::Mh, 1.0, {}}; }
  static KernelSpec slice_kernel(SliceConfig cfg = {}) { return {KernelKind::Slice, 0.0, cfg}; }
  static KernelSpec naive_slice(SliceConfig cfg = {}) {
    return {KernelKind::NaiveSlice, 0.0, cfg};
  }
  static KernelSpec mixture(double mh_weight, SliceConfig cfg = {});

  /// Parses "mh", "slice", "naive-slice" or "mix:<weight>".
  static KernelSpec parse(std::string_view text);

  /// Inverse of parse().
  std::string name() const;

  void validate() const;
};

/// One recorded posterior sample: the chain's LL-evaluation count at the time
/// it was recorded and the trace's predicts.
struct SampleRecord {
  std::uint64_t ll_count = 0;
  Predicts predicts;
};

struct RunStats {
  std::uint64_t steps = 0;
  std::uint64_t mh_steps = 0;
  std::uint64_t slice_steps = 0;
  std::uint64_t mh_accepted = 0;
  std::uint64_t ll_evaluations = 0;
};

/// LL-evaluations the chain has spent so far.
inline std::uint64_t ll_counter(const Chain& chain) { return chain.ll_evaluations; }

/// Receives every recorded sample in order.
using SampleSink = std::function<void(std::uint64_t ll_count, const Trace& trace)>;

/// Runs one chain: forward-samples an initial trace, then applies the kernel
/// until the chain has spent at least `budget` LL-evaluations. The step that
/// crosses the budget completes. A sample is recorded after initialization
/// and after every step (rejections included). A nonzero `max_samples` also
/// stops the chain once that many samples have been recorded.
RunStats run_inference(const ModelProgram& prog, const KernelSpec& spec, std::uint64_t budget,
                       std::uint64_t seed, const SampleSink& sink, std::uint64_t max_samples = 0);

std::vector<SampleRecord> run_inference(const ModelProgram& prog, const KernelSpec& spec,
                                        std::uint64_t budget, std::uint64_t seed);

}  // namespace tracemc
