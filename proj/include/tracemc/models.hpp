#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tracemc/iris.hpp"
#include "tracemc/oracle.hpp"
#include "tracemc/trace.hpp"

namespace tracemc {

enum class MetricKind { KS, KL, MSE };

std::string_view to_string(MetricKind m);

/// Posterior cdf of the model's scalar prediction.
struct CdfOracle {
  std::function<double(double)> cdf;
};

/// Posterior pmf over {0, ..., n-1} for each component of the prediction
/// (one component for a scalar, one per element for a vector).
struct PmfOracle {
  std::vector<std::vector<double>> marginals;
};

struct NoOracle {};

using Oracle = std::variant<CdfOracle, PmfOracle, NoOracle>;

struct BenchmarkModel {
  std::string name;
  ModelProgram program;
  Oracle oracle;
  /// The prediction the metric is computed on.
  std::string predict_name;
  MetricKind metric = MetricKind::KS;
  /// 0/1 targets for the MSE metric; empty otherwise.
  std::vector<double> labels;
};

struct ModelOptions {
  std::filesystem::path iris_path = default_iris_path();
};

// Gaussian mean models.
BenchmarkModel gauss_mean_easy();
BenchmarkModel gauss_mean_hard();
BenchmarkModel normal_mean_1();
BenchmarkModel normal_mean_2();
BenchmarkModel normal_mean_3();

// Discrete and trans-dimensional benchmarks.
BenchmarkModel branching();
BenchmarkModel hmm();
BenchmarkModel marsaglia();

// Classifiers on one Iris class against the other two.
BenchmarkModel logistic_regression(const IrisDataset& data, IrisClass positive);
BenchmarkModel bayes_nn(const IrisDataset& data, IrisClass positive);

std::vector<std::string> model_names();
/// Throws std::invalid_argument for an unknown name.
BenchmarkModel make_model(std::string_view name, const ModelOptions& options = {});

// Oracle building blocks, exposed for cross-checks.

std::uint64_t fibonacci(int n);

/// log of integral over v of InverseGamma(v; 3, 1) * Normal(5; m, sqrt(v)),
/// by trapezoid integration over log v.
double log_unknown_variance_likelihood(double m);

GridCdf normal_mean_2_posterior(const GridSpec& grid = {-10.0, 10.0, 0.002});
GridCdf normal_mean_3_posterior(const GridSpec& grid = {-10.0, 10.0, 0.002});
GridCdf gauss_mean_hard_posterior(const GridSpec& grid = {0.0, 4.0, 1e-4});

/// Posterior pmf of the first Poisson variable, by enumerating both Poisson
/// variables up to cumulative prior mass 1 - 1e-10.
std::vector<double> branching_posterior();

/// Per-step posterior marginals of the hidden state by enumerating all paths.
std::vector<std::vector<double>> hmm_posterior_marginals();

}  // namespace tracemc
