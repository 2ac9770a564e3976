#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>

#include "test_util.hpp"
#include "tracemc/kernel.hpp"
#include "tracemc/metrics.hpp"
#include "tracemc/models.hpp"
#include "tracemc/scheduler.hpp"
#include "tracemc/slice.hpp"

namespace tracemc {
namespace {

using testing::kHalfLog2Pi;
using testing::scalar_trace;
using testing::single_variable;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double std_normal_ll(double x) { return -kHalfLog2Pi - 0.5 * x * x; }

DoublingSlice make_sampler(DoublingSlice::LogTarget f, Rng& rng, SliceConfig cfg = {}) {
  return DoublingSlice(std::move(f), [&rng] { return rng.uniform(); }, cfg);
}

TEST(LogHeight, BelowLikelihoodAndExponential) {
  Rng rng(1);
  std::vector<double> gaps(10000);
  for (double& g : gaps) {
    double h = log_height(-3.0, rng);
    EXPECT_LE(h, -3.0);
    g = -3.0 - h;
  }
  double ks = ks_statistic(gaps, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-x); });
  EXPECT_LT(ks, 1.949 / std::sqrt(10000.0));
}

TEST(StepOut, NormalSliceIsCovered) {
  const double logu = std_normal_ll(0) - std::log(2.0);
  const double edge = std::sqrt(2.0 * std::log(2.0));  // 1.177
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Rng rng(seed);
    auto s = make_sampler(std_normal_ll, rng);
    SliceInterval iv = s.step_out(0.0, logu, 1.0);
    EXPECT_LE(iv.left(), -edge);
    EXPECT_GE(iv.right(), edge);
    EXPECT_LE(std_normal_ll(iv.left()), logu);
    EXPECT_LE(std_normal_ll(iv.right()), logu);
  }
}

TEST(StepOut, TightSliceOftenNeedsNoDoubling) {
  const double logu = std_normal_ll(0) - 1e-12;
  int undoubled = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    Rng rng(seed);
    auto s = make_sampler(std_normal_ll, rng);
    SliceInterval iv = s.step_out(0.0, logu, 1.0);
    if (iv.hi - iv.lo == 1) {
      ++undoubled;
      EXPECT_LE(iv.right() - iv.left(), 2.0);
    }
  }
  EXPECT_GT(undoubled, 100);
}

TEST(StepOut, FlatTargetStopsAtSupportEdges) {
  auto flat = [](double x) { return x >= 0 && x <= 10 ? 0.0 : kNegInf; };
  Rng rng(3);
  auto s = make_sampler(flat, rng);
  SliceInterval iv = s.step_out(5.0, -1.0, 1.0);
  EXPECT_LT(iv.left(), 0.0);
  EXPECT_GT(iv.right(), 10.0);
  EXPECT_EQ(flat(iv.left()), kNegInf);
  EXPECT_EQ(flat(iv.right()), kNegInf);
}

TEST(StepOut, ImproperTargetOverflows) {
  Rng rng(4);
  SliceConfig cfg;
  cfg.max_stepout_doublings = 20;
  auto s = make_sampler([](double) { return 0.0; }, rng, cfg);
  EXPECT_THROW(s.step_out(0.0, -1.0, 1.0), WidthOverflowError);
}

TEST(StepOut, OnlyGrows) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    double x0 = rng.uniform(-2, 2);
    double logu = std_normal_ll(x0) + std::log(rng.uniform_positive());
    auto s = make_sampler(std_normal_ll, rng);
    SliceInterval iv = s.step_out(x0, logu, 1.0);
    EXPECT_LE(iv.left(), x0);
    EXPECT_GE(iv.right(), x0);
    EXPECT_GE(iv.right() - iv.left(), 1.0 - 1e-12);
  }
}

TEST(Shrink, FirstCandidateInsideSliceUsesOneEvaluation) {
  Rng rng(6);
  auto s = make_sampler([](double x) { return std::abs(x) < 10 ? 0.0 : kNegInf; }, rng);
  SliceInterval iv{-1.0, 2.0, 0, 1};
  auto [x, f] = s.shrink(0.0, -1.0, iv);
  EXPECT_EQ(s.evaluations(), 1u);
  EXPECT_GE(x, -1.0);
  EXPECT_LE(x, 1.0);
  EXPECT_EQ(f, 0.0);
}

TEST(Shrink, AcceptedPointIsInsideSliceAndInterval) {
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    double x0 = rng.uniform(-2, 2);
    double logu = std_normal_ll(x0) + std::log(rng.uniform_positive());
    auto s = make_sampler(std_normal_ll, rng);
    SliceInterval iv = s.step_out(x0, logu, 1.0);
    auto [x1, f1] = s.shrink(x0, logu, iv);
    EXPECT_GT(f1, logu);
    EXPECT_GE(x1, iv.left());
    EXPECT_LE(x1, iv.right());
  }
}

TEST(Shrink, DegenerateSliceErrors) {
  Rng rng(8);
  SliceConfig cfg;
  cfg.max_shrink_iters = 50;
  const double x0 = 0.3;
  auto s = make_sampler([&](double x) { return x == x0 ? 0.0 : kNegInf; }, rng, cfg);
  SliceInterval iv{0.0, 1.0, 0, 1};
  EXPECT_THROW(s.shrink(x0, -1.0, iv), DegenerateSliceError);
}

TEST(Acceptance, RejectsPointsFromOtherPieces) {
  // Two slice pieces [-1, 1] and [7, 9]; an interval reaching both by doubling
  // cannot be regenerated from the far piece when the split separates them.
  auto two = [](double x) { return (std::abs(x) < 1 || std::abs(x - 8) < 1) ? 0.0 : kNegInf; };
  Rng rng(9);
  auto s = make_sampler(two, rng);
  SliceInterval iv{-2.0, 2.0, 0, 8};  // [-2, 14], midpoint 6
  EXPECT_FALSE(s.acceptable(0.0, 8.0, -1.0, iv));
  EXPECT_TRUE(s.acceptable(0.0, 0.5, -1.0, iv));
}

// Long single-variable chains on closed-form targets; the first 1000
// samples are discarded as burn-in.
TEST(Properties, ClosedFormTargets) {
  for (const Distribution& d :
       std::vector<Distribution>{Normal(0, 1), Uniform(-1, 2), InverseGamma(3, 1)}) {
    for (std::uint64_t seed : {1, 2, 3}) {
      std::vector<double> xs;
      run_inference(
          single_variable(d), KernelSpec::slice_kernel(), std::numeric_limits<std::uint64_t>::max(),
          seed, [&](std::uint64_t, const Trace& t) { xs.push_back(std::get<double>(t.predicts.at("x"))); },
          101000);
      xs.erase(xs.begin(), xs.begin() + 1000);
      double ks = ks_statistic(xs, [&](double x) { return cdf(d, x); });
      EXPECT_LT(ks, 0.02) << variant_name(d) << " seed " << seed;
    }
  }
}

TEST(Properties, AtLeastThreeEvaluationsPerStep) {
  for (const auto& model : {normal_mean_1(), normal_mean_3(), branching(), hmm(), marsaglia(),
                            gauss_mean_easy()}) {
    Chain chain(11);
    Trace t = initialize_trace(model.program, chain);
    for (int i = 0; i < 2000; ++i) {
      auto before = ll_counter(chain);
      t = slice_step(t, model.program, {}, chain);
      EXPECT_GE(ll_counter(chain) - before, 3u) << model.name;
      ASSERT_TRUE(t.possible()) << model.name;
    }
  }
}

TEST(CorrectedLl, SameDimensionIsPlainLikelihood) {
  auto model = normal_mean_1();
  Chain chain(1);
  Trace t = initialize_trace(model.program, chain);
  auto [moved, ll] = corrected_ll(t, 1.25, Address{"m", 0}, model.program, chain);
  EXPECT_EQ(ll, moved.total_ll);
}

TEST(CorrectedLl, NormalMean3BranchFlip) {
  auto model = normal_mean_3();
  Chain chain(1);
  ChoiceMap db;
  db.emplace(Address{"m", 0}, ChoiceRecord{{"m", 0}, Normal(0, 1), -0.5, log_prob(Normal(0, 1), -0.5), false});
  db.emplace(Address{"v", 0},
             ChoiceRecord{{"v", 0}, InverseGamma(3, 1), 0.4, log_prob(InverseGamma(3, 1), 0.4), false});
  Trace old = run_model(model.program, chain, db);
  auto [moved, ll] = corrected_ll(old, 0.5, Address{"m", 0}, model.program, chain);
  EXPECT_NEAR(ll - moved.total_ll, 1.16516292749662, 1e-12);
}

TEST(CorrectedLl, NoOpMoveReproducesCurrent) {
  auto model = marsaglia();
  Chain chain(2);
  Trace t = initialize_trace(model.program, chain);
  const auto& [addr, rec] = *t.choices.begin();
  auto [moved, ll] = corrected_ll(t, rec.value, addr, model.program, chain);
  EXPECT_EQ(ll, t.total_ll);
}

TEST(SliceStep, KernelMoveBookkeeping) {
  auto model = hmm();
  Chain chain(3);
  Trace t = initialize_trace(model.program, chain);
  KernelMove mv;
  t = slice_step(t, model.program, {}, chain, &mv);
  EXPECT_DOUBLE_EQ(mv.selection_prob, 0.1);
  EXPECT_GE(mv.aux_randoms.size(), 4u);  // pick, position, height, window, candidate
  EXPECT_EQ(mv.selected.base, "s");
}

TEST(SliceStep, RejectsImpossibleCurrent) {
  auto model = normal_mean_1();
  Chain chain(1);
  Trace bad;
  bad.total_ll = kNegInf;
  EXPECT_THROW(slice_step(bad, model.program, {}, chain), std::invalid_argument);
}

TEST(NaiveSlice, SameDimensionMatchesCorrected) {
  auto model = gauss_mean_hard();
  auto a = run_inference(model.program, KernelSpec::slice_kernel(), 20000, 5);
  auto b = run_inference(model.program, KernelSpec::naive_slice(), 20000, 5);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].ll_count, b[i].ll_count);
    EXPECT_EQ(a[i].predicts, b[i].predicts);
  }
}

TEST(NaiveSlice, BranchingPosteriorIsWrong) {
  auto model = branching();
  auto tracker = make_tracker(model);
  run_inference(model.program, KernelSpec::naive_slice(), 300000, 1,
                [&](std::uint64_t, const Trace& t) { tracker->add(t.predicts); });
  EXPECT_GT(tracker->value(), 0.01);
}

TEST(SliceStep, TinyDiscreteModelMatchesEnumeration) {
  // b ~ Bernoulli(0.5); c ~ Categorical(0.2, 0.3, 0.5) if b else 3;
  // observe Bernoulli(q[c]) = 1.
  constexpr std::array<double, 4> q = {0.1, 0.5, 0.9, 0.3};
  ModelProgram prog = [&](ModelContext& ctx) {
    double b = ctx.sample("b", Bernoulli(0.5));
    double c = b == 1 ? ctx.sample("c", Categorical({0.2, 0.3, 0.5})) : 3.0;
    ctx.observe(Bernoulli(q[static_cast<std::size_t>(c)]), 1.0);
    ctx.predict("c", c);
  };
  std::array<double, 4> post = {0.5 * 0.2 * q[0], 0.5 * 0.3 * q[1], 0.5 * 0.5 * q[2], 0.5 * q[3]};
  double z = post[0] + post[1] + post[2] + post[3];
  for (std::uint64_t seed : {1, 2, 3}) {
    std::array<double, 4> freq{};
    double n = 0;
    run_inference(prog, KernelSpec::slice_kernel(), 3000000, seed, [&](std::uint64_t, const Trace& t) {
      freq[static_cast<std::size_t>(std::get<double>(t.predicts.at("c")))] += 1;
      n += 1;
    });
    double tv = 0;
    for (int k = 0; k < 4; ++k) tv += std::abs(freq[k] / n - post[k] / z);
    EXPECT_LT(0.5 * tv, 0.02) << "seed " << seed;
  }
}

TEST(SliceConfig, Validation) {
  SliceConfig cfg;
  cfg.initial_width = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.max_shrink_iters = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.max_stepout_doublings = -1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace tracemc
