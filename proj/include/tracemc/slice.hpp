#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tracemc/trace.hpp"

namespace tracemc {

struct SliceConfig {
  double initial_width = 1.0;
  int max_stepout_doublings = 60;
  int max_shrink_iters = 1000;
  /// Halve the initial width until both x - w and x + w lie inside the slice
  /// before stepping out. Off by default: the width then depends on the
  /// current point, which breaks reversibility of the move.
  bool shrink_initial_width = false;

  void validate() const;
};

class SliceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Step-out exceeded its doubling limit; the target is flat or improper.
class WidthOverflowError : public SliceError {
 public:
  using SliceError::SliceError;
};

/// Shrinkage exhausted its iterations without finding a point in the slice.
class DegenerateSliceError : public SliceError {
 public:
  using SliceError::SliceError;
};

/// Bookkeeping for one kernel transition viewed as a reversible-jump move:
/// the moved address, the probability 1/|D| of having selected it, and the
/// uniforms consumed by the slice procedure (their count is the dimension of
/// the auxiliary randomness, their joint law a product of uniforms). The
/// deterministic map from those uniforms to the new value is the step-out /
/// shrink procedure itself.
struct KernelMove {
  Address selected;
  double selection_prob = 0.0;
  std::vector<double> aux_randoms;
};

/// Interval on the lattice origin + width * j produced by step-out.
struct SliceInterval {
  double origin = 0.0;
  double width = 1.0;
  std::int64_t lo = 0;
  std::int64_t hi = 1;

  double at(std::int64_t j) const { return origin + width * static_cast<double>(j); }
  double left() const { return at(lo); }
  double right() const { return at(hi); }
};

/// One-dimensional doubling slice sampler over an arbitrary log target.
///
/// Step-out starts from a randomly positioned window and doubles it, each time
/// towards a randomly chosen side, until both ends score at or below the
/// height. Shrinkage draws uniformly from the interval and shrinks towards the
/// current point; a candidate inside the slice is accepted only if the same
/// doubling sequence could have produced the interval from it, which keeps the
/// move reversible on slices made of several disjoint pieces.
///
/// Endpoint scores are memoized per lattice index, so points revisited by the
/// acceptance check cost nothing extra.
class DoublingSlice {
 public:
  using LogTarget = std::function<double(double)>;
  using UniformSource = std::function<double()>;

  DoublingSlice(LogTarget target, UniformSource uniform, const SliceConfig& cfg);

  /// Returns an interval containing x0 whose ends both score <= logu.
  /// Throws WidthOverflowError after cfg.max_stepout_doublings doublings.
  SliceInterval step_out(double x0, double logu, double width);

  /// Draws the next point; returns it with its score (> logu).
  /// Throws DegenerateSliceError after cfg.max_shrink_iters candidates.
  std::pair<double, double> shrink(double x0, double logu, const SliceInterval& interval);

  /// Whether x1 could have produced `interval` by the same doubling procedure.
  bool acceptable(double x0, double x1, double logu, const SliceInterval& interval);

  std::size_t evaluations() const { return evaluations_; }

 private:
  double score(double x);
  double score_lattice(const SliceInterval& interval, std::int64_t j);

  LogTarget target_;
  UniformSource uniform_;
  SliceConfig cfg_;
  std::size_t evaluations_ = 0;
  double memo_origin_ = 0.0;
  double memo_width_ = 0.0;
  std::map<std::int64_t, double> memo_;
};

/// Log height under the target: ll + ln(U), U uniform on (0, 1].
double log_height(double ll, Rng& rng);

/// Re-executes `prog` with `selected` pinned to `candidate` and every other
/// value reused from `old`. Returns the new trace and its likelihood plus the
/// dimension-jump correction relative to `old`. Consumes one LL-evaluation.
std::pair<Trace, double> corrected_ll(const Trace& old, double candidate, const Address& selected,
                                      const ModelProgram& prog, Chain& chain,
                                      ChoiceMap* fresh_cache = nullptr);

/// One slice-sampling transition on a uniformly chosen variable. Continuous
/// variables are sliced on their natural support; discrete ones are sliced
/// over the uniform coordinate q with value = quantile(prior, q).
Trace slice_step(const Trace& current, const ModelProgram& prog, const SliceConfig& cfg,
                 Chain& chain, KernelMove* move = nullptr);

/// slice_step without the dimension-jump correction. Only meaningful as a
/// demonstration of the bias on trans-dimensional models.
Trace naive_slice_step(const Trace& current, const ModelProgram& prog, const SliceConfig& cfg,
                       Chain& chain, KernelMove* move = nullptr);

}  // namespace tracemc
