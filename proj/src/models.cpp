#include "tracemc/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "tracemc/distributions.hpp"
#include "tracemc/model_constants.hpp"

namespace tracemc {
namespace {

namespace k = constants;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sigmoid(double z) { return z >= 0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z)); }
double sigmoid(double z) { return std::exp(log_sigmoid(z)); }

CdfOracle normal_cdf_oracle(double mean, double variance) {
  Distribution d = Normal(mean, std::sqrt(variance));
  return CdfOracle{[d](double x) { return cdf(d, x); }};
}

CdfOracle grid_oracle(std::shared_ptr<const GridCdf> grid) {
  return CdfOracle{[grid = std::move(grid)](double x) { return (*grid)(x); }};
}

// Prior N(0, 1) on the mean, shared by the three normal-mean models.
Distribution mean_prior() {
  return Normal(k::kNormalMeanPriorMean, std::sqrt(k::kNormalMeanPriorVariance));
}

Distribution variance_prior() { return InverseGamma(k::kVarianceShape, k::kVarianceScale); }

double marsaglia_normal(ModelContext& ctx, double mean, double variance) {
  const Distribution unit = Uniform(-1.0, 1.0);
  for (;;) {
    double x = ctx.sample("x", unit);
    double y = ctx.sample("y", unit);
    double s = x * x + y * y;
    if (s > 0.0 && s < 1.0) return mean + std::sqrt(variance) * x * std::sqrt(-2.0 * std::log(s) / s);
  }
}

std::string class_suffix(IrisClass c) { return std::string(to_string(c)); }

}  // namespace

std::string_view to_string(MetricKind m) {
  switch (m) {
    case MetricKind::KS:
      return "KS";
    case MetricKind::KL:
      return "KL";
    case MetricKind::MSE:
      return "MSE";
  }
  return "?";
}

std::uint64_t fibonacci(int n) {
  std::uint64_t a = 0, b = 1;
  for (int i = 0; i < n; ++i) {
    std::uint64_t next = a + b;
    a = b;
    b = next;
  }
  return a;
}

BenchmarkModel gauss_mean_easy() {
  // Prior equals posterior: no observations at all.
  ModelProgram prog = [](ModelContext& ctx) {
    double m = ctx.sample("m", mean_prior());
    ctx.predict("m", m);
  };
  return {"gauss_mean_easy", prog, normal_cdf_oracle(0.0, 1.0), "m", MetricKind::KS, {}};
}

BenchmarkModel gauss_mean_hard() {
  ModelProgram prog = [](ModelContext& ctx) {
    double m = ctx.sample("m", Uniform(k::kHardPriorLo, k::kHardPriorHi));
    const Distribution noise = Normal(m, k::kHardNoiseStd);
    for (double x : k::kHardData) ctx.observe(noise, x);
    ctx.predict("m", m);
  };
  static const auto grid = std::make_shared<const GridCdf>(gauss_mean_hard_posterior());
  return {"gauss_mean_hard", prog, grid_oracle(grid), "m", MetricKind::KS, {}};
}

BenchmarkModel normal_mean_1() {
  ModelProgram prog = [](ModelContext& ctx) {
    double m = ctx.sample("m", mean_prior());
    ctx.observe(Normal(m, std::sqrt(k::kNormalMeanNoiseVariance)), k::kNormalMeanObservation);
    ctx.predict("m", m);
  };
  // Conjugate update of N(0, 1) by one observation with unit noise variance.
  double precision = 1.0 / k::kNormalMeanPriorVariance + 1.0 / k::kNormalMeanNoiseVariance;
  double mean = (k::kNormalMeanPriorMean / k::kNormalMeanPriorVariance +
                 k::kNormalMeanObservation / k::kNormalMeanNoiseVariance) /
                precision;
  return {"normal_mean_1", prog, normal_cdf_oracle(mean, 1.0 / precision), "m", MetricKind::KS,
          {}};
}

BenchmarkModel normal_mean_2() {
  ModelProgram prog = [](ModelContext& ctx) {
    double m = ctx.sample("m", mean_prior());
    double v = ctx.sample("v", variance_prior());
    ctx.observe(Normal(m, std::sqrt(v)), k::kNormalMeanObservation);
    ctx.predict("m", m);
  };
  static const auto grid = std::make_shared<const GridCdf>(normal_mean_2_posterior());
  return {"normal_mean_2", prog, grid_oracle(grid), "m", MetricKind::KS, {}};
}

BenchmarkModel normal_mean_3() {
  ModelProgram prog = [](ModelContext& ctx) {
    double m = ctx.sample("m", mean_prior());
    double v = m < 0 ? ctx.sample("v", variance_prior()) : k::kFixedVariance;
    ctx.observe(Normal(m, std::sqrt(v)), k::kNormalMeanObservation);
    ctx.predict("m", m);
  };
  static const auto grid = std::make_shared<const GridCdf>(normal_mean_3_posterior());
  return {"normal_mean_3", prog, grid_oracle(grid), "m", MetricKind::KS, {}};
}

BenchmarkModel branching() {
  ModelProgram prog = [](ModelContext& ctx) {
    const Distribution count_prior = Poisson(k::kBranchingRate);
    double r = ctx.sample("pois1", count_prior);
    double l = k::kBranchingLargeRate;
    if (r <= k::kBranchingThreshold) {
      l = static_cast<double>(fibonacci(3 * static_cast<int>(r))) + ctx.sample("pois2", count_prior);
    }
    if (l > 0) {
      ctx.observe(Poisson(l), k::kBranchingObservation);
    } else {
      ctx.factor(kNegInf);  // a zero rate cannot produce the observed count
    }
    ctx.predict("r", r);
  };
  return {"branching", prog, PmfOracle{{branching_posterior()}}, "r", MetricKind::KL, {}};
}

BenchmarkModel hmm() {
  ModelProgram prog = [](ModelContext& ctx) {
    std::vector<double> states;
    states.reserve(k::kHmmObservations.size());
    int prev = -1;
    for (double y : k::kHmmObservations) {
      const auto& row = prev < 0 ? k::kHmmInitial : k::kHmmTransition[static_cast<std::size_t>(prev)];
      double s = ctx.sample("s", Categorical({row.begin(), row.end()}));
      prev = static_cast<int>(s);
      ctx.observe(Normal(k::kHmmEmissionMean[static_cast<std::size_t>(prev)], k::kHmmEmissionStd), y);
      states.push_back(s);
    }
    ctx.predict("states", std::move(states));
  };
  return {"hmm", prog, PmfOracle{hmm_posterior_marginals()}, "states", MetricKind::KL, {}};
}

BenchmarkModel marsaglia() {
  ModelProgram prog = [](ModelContext& ctx) {
    double mu = marsaglia_normal(ctx, k::kMarsagliaPriorMean, k::kMarsagliaPriorVariance);
    const Distribution noise = Normal(mu, std::sqrt(k::kMarsagliaNoiseVariance));
    for (double y : k::kMarsagliaObservations) ctx.observe(noise, y);
    ctx.predict("mu", mu);
  };
  double precision = 1.0 / k::kMarsagliaPriorVariance +
                     static_cast<double>(k::kMarsagliaObservations.size()) / k::kMarsagliaNoiseVariance;
  double sum = std::accumulate(k::kMarsagliaObservations.begin(), k::kMarsagliaObservations.end(), 0.0);
  double mean = (k::kMarsagliaPriorMean / k::kMarsagliaPriorVariance + sum / k::kMarsagliaNoiseVariance) /
                precision;
  return {"marsaglia", prog, normal_cdf_oracle(mean, 1.0 / precision), "mu", MetricKind::KS, {}};
}

BenchmarkModel logistic_regression(const IrisDataset& data, IrisClass positive) {
  auto rows = std::make_shared<const std::vector<IrisRow>>(data.rows);
  auto labels = data.one_vs_rest_labels(positive);
  ModelProgram prog = [rows, labels](ModelContext& ctx) {
    const Distribution prior = Normal(0.0, k::kWeightPriorStd);
    std::array<double, 4> w{};
    for (double& wi : w) wi = ctx.sample("w", prior);
    double b = ctx.sample("b", prior);
    std::vector<double> p(rows->size());
    double ll = 0.0;
    for (std::size_t i = 0; i < rows->size(); ++i) {
      const auto& x = (*rows)[i].features;
      double z = b + w[0] * x[0] + w[1] * x[1] + w[2] * x[2] + w[3] * x[3];
      // Bernoulli(sigmoid(z)) log mass, computed without rounding sigmoid to 0 or 1.
      ll += labels[i] == 1.0 ? log_sigmoid(z) : log_sigmoid(-z);
      p[i] = sigmoid(z);
    }
    ctx.factor(ll);
    ctx.predict("p", std::move(p));
  };
  return {"logistic_regression_" + class_suffix(positive), prog, NoOracle{}, "p", MetricKind::MSE,
          labels};
}

BenchmarkModel bayes_nn(const IrisDataset& data, IrisClass positive) {
  auto rows = std::make_shared<const std::vector<IrisRow>>(data.rows);
  auto labels = data.one_vs_rest_labels(positive);
  ModelProgram prog = [rows, labels](ModelContext& ctx) {
    const Distribution prior = Normal(0.0, k::kWeightPriorStd);
    std::array<std::array<double, 4>, 4> w1{};
    std::array<double, 4> b1{};
    std::array<std::array<double, 4>, 2> w2{};
    std::array<double, 2> b2{};
    std::array<double, 2> w3{};
    for (auto& row : w1) for (double& v : row) v = ctx.sample("w1", prior);
    for (double& v : b1) v = ctx.sample("b1", prior);
    for (auto& row : w2) for (double& v : row) v = ctx.sample("w2", prior);
    for (double& v : b2) v = ctx.sample("b2", prior);
    for (double& v : w3) v = ctx.sample("w3", prior);
    double b3 = ctx.sample("b3", prior);

    std::vector<double> p(rows->size());
    double ll = 0.0;
    for (std::size_t i = 0; i < rows->size(); ++i) {
      const auto& x = (*rows)[i].features;
      std::array<double, 4> h1{};
      for (std::size_t j = 0; j < 4; ++j) {
        double a = b1[j];
        for (std::size_t d = 0; d < 4; ++d) a += w1[j][d] * x[d];
        h1[j] = std::tanh(a);
      }
      std::array<double, 2> h2{};
      for (std::size_t j = 0; j < 2; ++j) {
        double a = b2[j];
        for (std::size_t d = 0; d < 4; ++d) a += w2[j][d] * h1[d];
        h2[j] = std::tanh(a);
      }
      double z = b3 + w3[0] * h2[0] + w3[1] * h2[1];
      ll += labels[i] == 1.0 ? log_sigmoid(z) : log_sigmoid(-z);
      p[i] = sigmoid(z);
    }
    ctx.factor(ll);
    ctx.predict("p", std::move(p));
  };
  return {"bayes_nn_" + class_suffix(positive), prog, NoOracle{}, "p", MetricKind::MSE, labels};
}

std::vector<std::string> model_names() {
  std::vector<std::string> names = {"gauss_mean_easy", "gauss_mean_hard", "normal_mean_1",
                                    "normal_mean_2",   "normal_mean_3",   "branching",
                                    "hmm",             "marsaglia"};
  for (auto c : {IrisClass::Setosa, IrisClass::Versicolor, IrisClass::Virginica}) {
    names.push_back("logistic_regression_" + class_suffix(c));
  }
  for (auto c : {IrisClass::Setosa, IrisClass::Versicolor, IrisClass::Virginica}) {
    names.push_back("bayes_nn_" + class_suffix(c));
  }
  return names;
}

BenchmarkModel make_model(std::string_view name, const ModelOptions& options) {
  if (name == "gauss_mean_easy") return gauss_mean_easy();
  if (name == "gauss_mean_hard") return gauss_mean_hard();
  if (name == "normal_mean_1") return normal_mean_1();
  if (name == "normal_mean_2") return normal_mean_2();
  if (name == "normal_mean_3") return normal_mean_3();
  if (name == "branching") return branching();
  if (name == "hmm") return hmm();
  if (name == "marsaglia") return marsaglia();
  for (std::string_view prefix : {"logistic_regression_", "bayes_nn_"}) {
    if (name.starts_with(prefix)) {
      IrisClass c = parse_iris_class(name.substr(prefix.size()));
      IrisDataset data = load_iris(options.iris_path);
      return prefix == "bayes_nn_" ? bayes_nn(data, c) : logistic_regression(data, c);
    }
  }
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Oracles

double log_unknown_variance_likelihood(double m) {
  const Distribution prior = variance_prior();
  // Substituting v = e^t: dv = e^t dt.
  auto integrand = [&](double t) {
    double v = std::exp(t);
    return t + log_prob(prior, v) + log_prob(Normal(m, std::sqrt(v)), k::kNormalMeanObservation);
  };
  return log_trapezoid(integrand, -15.0, 15.0, 6000);
}

GridCdf normal_mean_2_posterior(const GridSpec& grid) {
  const Distribution prior = mean_prior();
  return grid_posterior(
      [&](double m) { return log_prob(prior, m) + log_unknown_variance_likelihood(m); }, grid);
}

GridCdf normal_mean_3_posterior(const GridSpec& grid) {
  const Distribution prior = mean_prior();
  auto left = [&](double m) { return log_prob(prior, m) + log_unknown_variance_likelihood(m); };
  auto right = [&](double m) {
    return log_prob(prior, m) +
           log_prob(Normal(m, std::sqrt(k::kFixedVariance)), k::kNormalMeanObservation);
  };
  // The density jumps at m = 0, which must be a grid node; each cell is
  // integrated with the branch it lies in.
  auto nodes = static_cast<std::size_t>(std::llround((grid.hi - grid.lo) / grid.step)) + 1;
  double split = -grid.lo / grid.step;
  if (!(grid.lo < 0 && grid.hi > 0) || std::abs(split - std::round(split)) > 1e-9) {
    throw std::invalid_argument("normal_mean_3_posterior: 0 must be an interior grid node");
  }
  auto zero = static_cast<std::size_t>(std::llround(split));
  std::vector<double> lo_end(nodes), hi_end(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    double m = i == zero ? 0.0 : grid.lo + grid.step * static_cast<double>(i);
    lo_end[i] = i < zero ? left(m) : right(m);
    hi_end[i] = i <= zero ? left(m) : right(m);
  }
  double offset = std::max(*std::max_element(lo_end.begin(), lo_end.end()),
                           *std::max_element(hi_end.begin(), hi_end.end()));
  std::vector<double> cumulative(nodes, 0.0);
  for (std::size_t i = 1; i < nodes; ++i) {
    cumulative[i] = cumulative[i - 1] + 0.5 * grid.step *
                                            (std::exp(lo_end[i - 1] - offset) +
                                             std::exp(hi_end[i] - offset));
  }
  for (double& c : cumulative) c /= cumulative.back();
  return GridCdf(grid.lo, grid.step, std::move(cumulative));
}

GridCdf gauss_mean_hard_posterior(const GridSpec& grid) {
  const Distribution prior = Uniform(k::kHardPriorLo, k::kHardPriorHi);
  return grid_posterior(
      [&](double m) {
        double lp = log_prob(prior, m);
        if (lp == kNegInf) return kNegInf;
        const Distribution noise = Normal(m, k::kHardNoiseStd);
        for (double x : k::kHardData) lp += log_prob(noise, x);
        return lp;
      },
      grid);
}

std::vector<double> branching_posterior() {
  const Distribution prior = Poisson(k::kBranchingRate);
  auto limit = static_cast<int>(quantile(prior, 1.0 - 1e-10));
  std::vector<double> weights(static_cast<std::size_t>(limit) + 1, 0.0);
  for (int r = 0; r <= limit; ++r) {
    double lp_r = log_prob(prior, r);
    if (r > k::kBranchingThreshold) {
      weights[static_cast<std::size_t>(r)] =
          std::exp(lp_r + log_prob(Poisson(k::kBranchingLargeRate), k::kBranchingObservation));
      continue;
    }
    double acc = 0.0;
    for (int p2 = 0; p2 <= limit; ++p2) {
      double l = static_cast<double>(fibonacci(3 * r)) + p2;
      if (l <= 0) continue;
      acc += std::exp(lp_r + log_prob(prior, p2) + log_prob(Poisson(l), k::kBranchingObservation));
    }
    weights[static_cast<std::size_t>(r)] = acc;
  }
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  return weights;
}

std::vector<std::vector<double>> hmm_posterior_marginals() {
  const std::size_t steps = k::kHmmObservations.size();
  const std::size_t n = k::kHmmStates;
  std::vector<std::vector<double>> marginals(steps, std::vector<double>(n, 0.0));
  std::size_t paths = 1;
  for (std::size_t t = 0; t < steps; ++t) paths *= n;

  std::vector<std::size_t> path(steps);
  double total = 0.0;
  for (std::size_t code = 0; code < paths; ++code) {
    std::size_t c = code;
    for (std::size_t t = 0; t < steps; ++t) {
      path[t] = c % n;
      c /= n;
    }
    double lw = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
      double pt = t == 0 ? k::kHmmInitial[path[0]] : k::kHmmTransition[path[t - 1]][path[t]];
      lw += std::log(pt) +
            log_prob(Normal(k::kHmmEmissionMean[path[t]], k::kHmmEmissionStd), k::kHmmObservations[t]);
    }
    double w = std::exp(lw);
    total += w;
    for (std::size_t t = 0; t < steps; ++t) marginals[t][path[t]] += w;
  }
  for (auto& m : marginals) {
    for (double& x : m) x /= total;
  }
  return marginals;
}

}  // namespace tracemc
