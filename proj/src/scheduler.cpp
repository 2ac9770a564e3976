#include "tracemc/scheduler.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "tracemc/kernel.hpp"
#include "tracemc/mh.hpp"

namespace tracemc {

KernelSpec KernelSpec::mixture(double mh_weight, SliceConfig cfg) {
  KernelSpec spec{KernelKind::Mixture, mh_weight, cfg};
  spec.validate();
  return spec;
}

KernelSpec KernelSpec::parse(std::string_view text) {
  if (text == "mh") return mh();
  if (text == "slice") return slice_kernel();
  if (text == "naive-slice") return naive_slice();
  if (text.starts_with("mix:")) {
    auto digits = text.substr(4);
    double weight = 0.0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), weight);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
      throw std::invalid_argument("bad mixture weight in kernel '" + std::string(text) + "'");
    }
    return mixture(weight);
  }
  throw std::invalid_argument("unknown kernel '" + std::string(text) +
                              "' (expected mh, slice, naive-slice or mix:<weight>)");
}

std::string KernelSpec::name() const {
  switch (kind) {
    case KernelKind::Mh:
      return "mh";
    case KernelKind::Slice:
      return "slice";
    case KernelKind::NaiveSlice:
      return "naive-slice";
    case KernelKind::Mixture: {
      char buf[32];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, mh_weight);
      (void)ec;
      return "mix:" + std::string(buf, ptr);
    }
  }
  return "unknown";
}

void KernelSpec::validate() const {
  if (!(mh_weight >= 0.0 && mh_weight <= 1.0)) {
    throw std::invalid_argument("mixture weight must lie in [0, 1]");
  }
  slice.validate();
}

RunStats run_inference(const ModelProgram& prog, const KernelSpec& spec, std::uint64_t budget,
                       std::uint64_t seed, const SampleSink& sink, std::uint64_t max_samples) {
  if (budget < 1) throw std::invalid_argument("run_inference: budget must be at least 1");
  spec.validate();

  Chain chain(seed);
  RunStats stats;
  Trace current = initialize_trace(prog, chain);
  sink(chain.ll_evaluations, current);
  std::uint64_t recorded = 1;

  MhStats mh_stats;
  while (chain.ll_evaluations < budget && (max_samples == 0 || recorded < max_samples)) {
    bool use_mh = false;
    switch (spec.kind) {
      case KernelKind::Mh:
        use_mh = true;
        break;
      case KernelKind::Slice:
      case KernelKind::NaiveSlice:
        break;
      case KernelKind::Mixture:
        // Degenerate weights skip the coin so they replay the pure kernels exactly.
        if (spec.mh_weight >= 1.0) {
          use_mh = true;
        } else if (spec.mh_weight > 0.0) {
          use_mh = chain.rng.coin(spec.mh_weight);
        }
        break;
    }
    if (use_mh) {
      current = mh_step(std::move(current), prog, chain, &mh_stats);
      ++stats.mh_steps;
    } else if (spec.kind == KernelKind::NaiveSlice) {
      current = naive_slice_step(current, prog, spec.slice, chain);
      ++stats.slice_steps;
    } else {
      current = slice_step(current, prog, spec.slice, chain);
      ++stats.slice_steps;
    }
    ++stats.steps;
    sink(chain.ll_evaluations, current);
    ++recorded;
  }
  stats.mh_accepted = mh_stats.accepted;
  stats.ll_evaluations = chain.ll_evaluations;
  return stats;
}

std::vector<SampleRecord> run_inference(const ModelProgram& prog, const KernelSpec& spec,
                                        std::uint64_t budget, std::uint64_t seed) {
  std::vector<SampleRecord> out;
  run_inference(prog, spec, budget, seed, [&out](std::uint64_t ll_count, const Trace& t) {
    out.push_back(SampleRecord{ll_count, t.predicts});
  });
  return out;
}

}  // namespace tracemc
