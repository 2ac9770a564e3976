#include "tracemc/slice.hpp"

#include <cmath>
#include <iterator>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace tracemc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Scores points along the selected coordinate of one move. In quantile
// coordinates the selected variable's own prior mass is divided out, since
// the coordinate q itself carries a uniform prior.
class SliceMove {
 public:
  SliceMove(const Trace& origin, const ChoiceRecord& selected, const ModelProgram& prog,
            Chain& chain, bool corrected)
      : origin_(origin),
        selected_(selected),
        prog_(prog),
        chain_(chain),
        corrected_(corrected),
        quantile_space_(is_discrete(selected.dist)) {}

  bool quantile_space() const { return quantile_space_; }

  double base_ll() const {
    return quantile_space_ ? origin_.total_ll - selected_.log_prob : origin_.total_ll;
  }

  double to_value(double coord) const {
    if (!quantile_space_) return coord;
    if (!(coord > 0.0 && coord <= 1.0)) return std::numeric_limits<double>::quiet_NaN();
    return quantile(selected_.dist, coord);
  }

  double score(double coord) {
    Trace t = run_model(prog_, chain_, origin_.choices,
                        ForcedChoice{selected_.address, to_value(coord)}, &fresh_cache_);
    double ll = kNegInf;
    if (t.possible()) {
      auto it = t.choices.find(selected_.address);
      if (it == t.choices.end()) {
        throw std::logic_error("selected address " + to_string(selected_.address) +
                               " not reached on re-execution; the model is not deterministic");
      }
      ll = t.total_ll;
      if (corrected_) ll += transdim_correction(origin_, t, selected_.address);
      if (quantile_space_) ll -= it->second.log_prob;
    }
    traces_.insert_or_assign(coord, std::move(t));
    return ll;
  }

  Trace take(double coord) {
    auto it = traces_.find(coord);
    if (it == traces_.end()) throw std::logic_error("slice candidate trace missing");
    return std::move(it->second);
  }

 private:
  const Trace& origin_;
  const ChoiceRecord& selected_;
  const ModelProgram& prog_;
  Chain& chain_;
  bool corrected_;
  bool quantile_space_;
  ChoiceMap fresh_cache_;
  std::unordered_map<double, Trace> traces_;
};

Trace slice_step_impl(const Trace& current, const ModelProgram& prog, const SliceConfig& cfg,
                      Chain& chain, KernelMove* move, bool corrected) {
  if (!current.possible()) throw std::invalid_argument("slice_step: current trace is impossible");
  if (current.choices.empty()) return run_model(prog, chain, current.choices);

  KernelMove local_move;
  KernelMove& mv = move ? *move : local_move;
  mv.aux_randoms.clear();
  auto aux = [&]() {
    double u = chain.rng.uniform();
    mv.aux_randoms.push_back(u);
    return u;
  };

  double pick = aux();
  auto k = static_cast<std::size_t>(pick * static_cast<double>(current.choices.size()));
  if (k >= current.choices.size()) k = current.choices.size() - 1;
  const ChoiceRecord& selected =
      std::next(current.choices.begin(), static_cast<std::ptrdiff_t>(k))->second;
  mv.selected = selected.address;
  mv.selection_prob = 1.0 / static_cast<double>(current.choices.size());

  SliceMove slice_move(current, selected, prog, chain, corrected);

  double x0 = selected.value;
  double width = cfg.initial_width;
  if (slice_move.quantile_space()) {
    // Uniform position inside the cdf step (lo, hi] of the current value.
    double lo = cdf(selected.dist, selected.value - 1.0);
    double hi = cdf(selected.dist, selected.value);
    x0 = lo + (hi - lo) * (1.0 - aux());
    if (quantile(selected.dist, x0) != selected.value) x0 = hi;
    width = std::min(width, 1.0);
  }

  double logu = slice_move.base_ll() + std::log(1.0 - aux());
  DoublingSlice sampler([&](double c) { return slice_move.score(c); }, aux, cfg);
  SliceInterval interval = sampler.step_out(x0, logu, width);
  auto [x1, ll1] = sampler.shrink(x0, logu, interval);
  (void)ll1;
  return slice_move.take(x1);
}

}  // namespace

void SliceConfig::validate() const {
  if (!(initial_width > 0) || !std::isfinite(initial_width))
    throw std::invalid_argument("SliceConfig: initial_width must be positive");
  if (max_stepout_doublings <= 0)
    throw std::invalid_argument("SliceConfig: max_stepout_doublings must be positive");
  if (max_shrink_iters <= 0)
    throw std::invalid_argument("SliceConfig: max_shrink_iters must be positive");
}

DoublingSlice::DoublingSlice(LogTarget target, UniformSource uniform, const SliceConfig& cfg)
    : target_(std::move(target)), uniform_(std::move(uniform)), cfg_(cfg) {
  cfg_.validate();
}

double DoublingSlice::score(double x) {
  ++evaluations_;
  return target_(x);
}

double DoublingSlice::score_lattice(const SliceInterval& interval, std::int64_t j) {
  if (interval.origin != memo_origin_ || interval.width != memo_width_) {
    memo_.clear();
    memo_origin_ = interval.origin;
    memo_width_ = interval.width;
  }
  if (auto it = memo_.find(j); it != memo_.end()) return it->second;
  double v = score(interval.at(j));
  memo_.emplace(j, v);
  return v;
}

SliceInterval DoublingSlice::step_out(double x0, double logu, double width) {
  if (cfg_.shrink_initial_width) {
    for (int i = 0; i < 64 && (score(x0 - width) <= logu || score(x0 + width) <= logu); ++i) {
      width /= 2.0;
    }
  }
  SliceInterval iv;
  iv.width = width;
  iv.origin = x0 - width * uniform_();
  iv.lo = 0;
  iv.hi = 1;
  double f_lo = score_lattice(iv, iv.lo);
  double f_hi = score_lattice(iv, iv.hi);
  int doublings = 0;
  while (f_lo > logu || f_hi > logu) {
    if (doublings++ >= cfg_.max_stepout_doublings) {
      throw WidthOverflowError("slice step-out exceeded " +
                               std::to_string(cfg_.max_stepout_doublings) +
                               " doublings; target looks flat or improper");
    }
    std::int64_t span = iv.hi - iv.lo;
    if (uniform_() < 0.5) {
      iv.lo -= span;
      f_lo = score_lattice(iv, iv.lo);
    } else {
      iv.hi += span;
      f_hi = score_lattice(iv, iv.hi);
    }
  }
  return iv;
}

bool DoublingSlice::acceptable(double x0, double x1, double logu, const SliceInterval& iv) {
  std::int64_t lo = iv.lo;
  std::int64_t hi = iv.hi;
  bool differ = false;
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    double m = iv.at(mid);
    if ((x0 < m) != (x1 < m)) differ = true;
    if (x1 < m) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (differ && score_lattice(iv, lo) <= logu && score_lattice(iv, hi) <= logu) return false;
  }
  return true;
}

std::pair<double, double> DoublingSlice::shrink(double x0, double logu, const SliceInterval& iv) {
  double left = iv.left();
  double right = iv.right();
  for (int i = 0; i < cfg_.max_shrink_iters; ++i) {
    double x1 = left + (right - left) * uniform_();
    double f1 = score(x1);
    if (f1 > logu && acceptable(x0, x1, logu, iv)) return {x1, f1};
    if (x1 < x0) {
      left = x1;
    } else {
      right = x1;
    }
  }
  throw DegenerateSliceError("slice shrinkage found no acceptable point after " +
                             std::to_string(cfg_.max_shrink_iters) + " candidates");
}

double log_height(double ll, Rng& rng) { return ll + std::log(rng.uniform_positive()); }

std::pair<Trace, double> corrected_ll(const Trace& old, double candidate, const Address& selected,
                                      const ModelProgram& prog, Chain& chain,
                                      ChoiceMap* fresh_cache) {
  Trace t = run_model(prog, chain, old.choices, ForcedChoice{selected, candidate}, fresh_cache);
  if (!t.possible()) return {std::move(t), kNegInf};
  double ll = t.total_ll + transdim_correction(old, t, selected);
  return {std::move(t), ll};
}

Trace slice_step(const Trace& current, const ModelProgram& prog, const SliceConfig& cfg,
                 Chain& chain, KernelMove* move) {
  return slice_step_impl(current, prog, cfg, chain, move, true);
}

Trace naive_slice_step(const Trace& current, const ModelProgram& prog, const SliceConfig& cfg,
                       Chain& chain, KernelMove* move) {
  return slice_step_impl(current, prog, cfg, chain, move, false);
}

}  // namespace tracemc
