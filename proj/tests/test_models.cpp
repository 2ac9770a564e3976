#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "test_util.hpp"
#include "tracemc/iris.hpp"
#include "tracemc/model_constants.hpp"
#include "tracemc/models.hpp"

namespace tracemc {
namespace {

using testing::kHalfLog2Pi;

double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

TEST(Models, NormalMean1LikelihoodAtZero) {
  auto model = normal_mean_1();
  Chain chain(1);
  Trace t = run_model(model.program, chain, {}, ForcedChoice{{"m", 0}, 0.0});
  EXPECT_NEAR(t.total_ll, -0.918938533 + (-0.918938533 - 12.5), 1e-9);
}

TEST(Models, NormalMean3Dimensions) {
  auto model = normal_mean_3();
  Chain chain(1);
  EXPECT_EQ(run_model(model.program, chain, {}, ForcedChoice{{"m", 0}, 1.0}).dimension(), 1u);
  EXPECT_EQ(run_model(model.program, chain, {}, ForcedChoice{{"m", 0}, -1.0}).dimension(), 2u);
}

TEST(Models, MarsagliaUsesTwoUniformsPerIteration) {
  auto model = marsaglia();
  Chain chain(2);
  std::set<std::size_t> sizes;
  for (int i = 0; i < 500; ++i) {
    Trace t = run_model(model.program, chain);
    std::size_t xs = 0, ys = 0;
    for (const auto& [a, r] : t.choices) (a.base == "x" ? xs : ys) += 1;
    EXPECT_EQ(xs, ys);
    EXPECT_EQ(t.dimension(), 2 * xs);
    sizes.insert(t.dimension());
  }
  EXPECT_GT(sizes.size(), 1u);
}

TEST(Models, TransDimensionalityWitness) {
  for (const auto& model : {branching(), normal_mean_3()}) {
    Chain chain(3);
    std::set<std::size_t> dims;
    for (int i = 0; i < 200; ++i) dims.insert(run_model(model.program, chain).dimension());
    EXPECT_GE(dims.size(), 2u) << model.name;
  }
}

TEST(Models, BranchingZeroRateIsImpossible) {
  auto model = branching();
  Chain chain(1);
  ChoiceMap db;
  db.emplace(Address{"pois2", 0}, ChoiceRecord{{"pois2", 0}, Poisson(4), 0.0, log_prob(Poisson(4), 0.0), false});
  Trace t = run_model(model.program, chain, db, ForcedChoice{{"pois1", 0}, 0.0});
  EXPECT_FALSE(t.possible());
}

TEST(Models, ProgramsArePure) {
  ModelOptions opts;
  for (const auto& name : model_names()) {
    auto model = make_model(name, opts);
    Chain chain(5);
    for (int i = 0; i < 5; ++i) {
      Trace a = run_model(model.program, chain);
      Trace b = run_model(model.program, chain, a.choices);
      EXPECT_EQ(a.total_ll, b.total_ll) << name;
      EXPECT_EQ(a.predicts, b.predicts) << name;
    }
  }
}

TEST(Models, OracleMatchesMetric) {
  for (const auto& name : model_names()) {
    auto m = make_model(name);
    switch (m.metric) {
      case MetricKind::KS:
        EXPECT_TRUE(std::holds_alternative<CdfOracle>(m.oracle)) << name;
        break;
      case MetricKind::KL:
        EXPECT_TRUE(std::holds_alternative<PmfOracle>(m.oracle)) << name;
        break;
      case MetricKind::MSE:
        EXPECT_TRUE(std::holds_alternative<NoOracle>(m.oracle)) << name;
        EXPECT_EQ(m.labels.size(), 150u) << name;
        break;
    }
  }
  EXPECT_THROW(make_model("nope"), std::invalid_argument);
}

TEST(Models, HardDataHasMeanTwo) {
  const auto& d = constants::kHardData;
  EXPECT_EQ(d.size(), 31u);
  EXPECT_NEAR(std::accumulate(d.begin(), d.end(), 0.0) / 31.0, 2.0, 1e-12);
}

TEST(Oracles, Fibonacci) {
  EXPECT_EQ(fibonacci(0), 0u);
  EXPECT_EQ(fibonacci(1), 1u);
  EXPECT_EQ(fibonacci(9), 34u);
  EXPECT_EQ(fibonacci(12), 144u);
}

TEST(Oracles, UnknownVarianceLikelihoodIsStudentT) {
  // Integrating N(5; m, v) against InverseGamma(3, 1) gives a Student-t with
  // 6 degrees of freedom and scale sqrt(1/3) in 5 - m.
  const double nu = 6.0, s = std::sqrt(1.0 / 3.0);
  for (double m : {-4.0, -1.0, 0.0, 2.5, 5.0, 8.0}) {
    double z = (5.0 - m) / s;
    double expected = std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2) - 0.5 * std::log(nu * M_PI) -
                      std::log(s) - (nu + 1) / 2 * std::log1p(z * z / nu);
    EXPECT_NEAR(log_unknown_variance_likelihood(m), expected, 1e-6) << m;
  }
}

TEST(Oracles, GridMatchesClosedFormNormalMean1) {
  const Distribution prior = Normal(0, 1);
  GridCdf grid = grid_posterior(
      [&](double m) { return log_prob(prior, m) + log_prob(Normal(m, 1), 5.0); }, {-10, 10, 0.001});
  auto closed = std::get<CdfOracle>(normal_mean_1().oracle).cdf;
  double worst = 0;
  for (double x = -10; x <= 10; x += 0.0037) worst = std::max(worst, std::abs(grid(x) - closed(x)));
  EXPECT_LT(worst, 1e-4);
  EXPECT_NEAR(closed(2.5), 0.5, 1e-15);
  EXPECT_NEAR(closed(3.0), normal_cdf(3.0, 2.5, std::sqrt(0.5)), 1e-15);
}

TEST(Oracles, NormalMean3Grid) {
  GridCdf grid = normal_mean_3_posterior();
  EXPECT_NEAR(grid.total(), 1.0, 1e-6);
  // scipy quad over both branches: P(m < 0) = 0.37044727693687457
  EXPECT_NEAR(grid(0.0), 0.37044727693687457, 1e-6);
}

TEST(Oracles, NormalMean2Grid) {
  GridCdf grid = normal_mean_2_posterior();
  // scipy quad of N(m; 0, 1) * t6(5 - m; scale sqrt(1/3))
  EXPECT_NEAR(grid(0.0), 0.060426632537575145, 1e-4);
  EXPECT_NEAR(grid(2.0), 0.5431823324476558, 1e-4);
  EXPECT_NEAR(grid(3.0), 0.8238558049955464, 1e-4);
}

TEST(Oracles, HardGridIsNearlyNormal) {
  GridCdf grid = gauss_mean_hard_posterior();
  // Sample mean 2 and 31 unit-variance observations; the flat prior's edge at
  // 0 is 11 standard deviations away.
  double sd = 1.0 / std::sqrt(31.0);
  for (double x = 1.4; x <= 2.6; x += 0.05) EXPECT_NEAR(grid(x), normal_cdf(x, 2.0, sd), 1e-4);
}

TEST(Oracles, GridCoverageError) {
  EXPECT_THROW(grid_posterior([](double m) { return -0.5 * (m - 9) * (m - 9); }, {-10, 10, 0.01}),
               CoverageError);
}

TEST(Oracles, LogTrapezoidGaussian) {
  EXPECT_NEAR(log_trapezoid([](double x) { return -0.5 * x * x; }, -20, 20, 4000),
              kHalfLog2Pi, 1e-9);
}

TEST(Oracles, BranchingEnumeration) {
  auto pmf = branching_posterior();
  EXPECT_NEAR(std::accumulate(pmf.begin(), pmf.end(), 0.0), 1.0, 1e-9);
  // Independent numpy enumeration.
  EXPECT_NEAR(pmf[0], 0.02085161526193048, 1e-10);
  EXPECT_NEAR(pmf[1], 0.11980537300682524, 1e-10);
  EXPECT_NEAR(pmf[2], 0.06774448147372195, 1e-10);
  EXPECT_NEAR(pmf[5], 0.33333507114328925, 1e-10);
  EXPECT_NEAR(pmf[6], 0.22222338076219258, 1e-10);
  EXPECT_NEAR(pmf[7], 0.1269847890069672, 1e-10);
}

TEST(Oracles, HmmMarginalsMatchForwardBackward) {
  auto g = hmm_posterior_marginals();
  ASSERT_EQ(g.size(), 10u);
  for (const auto& row : g) EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);
  // numpy forward-backward.
  const double row0[] = {0.10344222733780202, 0.5322089033160476, 0.3643488693461503};
  const double row5[] = {0.9299692653104199, 9.112296769561109e-05, 0.06993961172188443};
  const double row9[] = {0.09286512525082549, 0.1553657358825177, 0.7517691388666569};
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(g[0][k], row0[k], 1e-12);
    EXPECT_NEAR(g[5][k], row5[k], 1e-12);
    EXPECT_NEAR(g[9][k], row9[k], 1e-12);
  }
}

TEST(Oracles, MarsagliaConjugate) {
  auto cdf = std::get<CdfOracle>(marsaglia().oracle).cdf;
  EXPECT_NEAR(cdf(7.25), 0.5, 1e-15);
  EXPECT_NEAR(cdf(8.0), normal_cdf(8.0, 7.25, std::sqrt(5.0 / 6.0)), 1e-15);
}

TEST(Iris, BundledFile) {
  IrisDataset ds = load_iris(default_iris_path());
  EXPECT_EQ(ds.rows.size(), 150u);
  for (auto c : {IrisClass::Setosa, IrisClass::Versicolor, IrisClass::Virginica}) {
    EXPECT_EQ(ds.count(c), 50u);
  }
  auto labels = ds.one_vs_rest_labels(IrisClass::Versicolor);
  EXPECT_EQ(std::accumulate(labels.begin(), labels.end(), 0.0), 50.0);
}

TEST(Iris, MalformedRowReportsLine) {
  std::istringstream in("5.1,3.5,1.4,0.2,Iris-setosa\n5.1,abc,1.4,0.2,Iris-setosa\n");
  try {
    parse_iris(in, "bad.data");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("bad.data:2"), std::string::npos);
  }
  std::istringstream unknown("5.1,3.5,1.4,0.2,Iris-rosea\n");
  EXPECT_THROW(parse_iris(unknown, "x"), ParseError);
  std::istringstream short_row("5.1,3.5,1.4\n");
  EXPECT_THROW(parse_iris(short_row, "x"), ParseError);
}

TEST(Iris, WrongRowCount) {
  std::istringstream in("5.1,3.5,1.4,0.2,Iris-setosa\n");
  EXPECT_THROW(parse_iris(in, "one.data"), DatasetError);
}

TEST(Iris, EnvironmentOverride) {
  auto path = std::filesystem::temp_directory_path() / "tracemc_iris_copy.data";
  std::filesystem::copy_file(default_iris_path(), path,
                             std::filesystem::copy_options::overwrite_existing);
  setenv("IRIS_PATH", path.c_str(), 1);
  EXPECT_EQ(default_iris_path(), path);
  EXPECT_EQ(load_iris(default_iris_path()).rows.size(), 150u);
  unsetenv("IRIS_PATH");
  std::filesystem::remove(path);
}

TEST(Iris, MissingFile) {
  EXPECT_THROW(load_iris("/nonexistent/iris.data"), std::runtime_error);
}

}  // namespace
}  // namespace tracemc
