#include "tracemc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tracemc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const PredictValue& find_predict(const Predicts& predicts, const std::string& name) {
  auto it = predicts.find(name);
  if (it == predicts.end()) throw std::runtime_error("sample has no predict '" + name + "'");
  return it->second;
}

class KsTracker final : public MetricTracker {
 public:
  KsTracker(std::function<double(double)> cdf, std::string name)
      : cdf_(std::move(cdf)), name_(std::move(name)) {}

  void add(const Predicts& predicts) override {
    const auto* v = std::get_if<double>(&find_predict(predicts, name_));
    if (v == nullptr) throw std::runtime_error("KS metric needs a scalar predict '" + name_ + "'");
    samples_.push_back(*v);
  }
  double value() const override { return ks_statistic(samples_, cdf_); }
  std::size_t count() const override { return samples_.size(); }

 private:
  std::function<double(double)> cdf_;
  std::string name_;
  std::vector<double> samples_;
};

// Mean over components of KL(empirical || oracle).
class KlTracker final : public MetricTracker {
 public:
  KlTracker(std::vector<std::vector<double>> marginals, std::string name)
      : marginals_(std::move(marginals)), name_(std::move(name)) {
    counts_.reserve(marginals_.size());
    for (const auto& m : marginals_) counts_.emplace_back(m.size(), 0.0);
  }

  void add(const Predicts& predicts) override {
    const auto& pv = find_predict(predicts, name_);
    if (const auto* s = std::get_if<double>(&pv)) {
      tally(0, *s);
    } else {
      const auto& vec = std::get<std::vector<double>>(pv);
      if (vec.size() != marginals_.size()) {
        throw std::runtime_error("predict '" + name_ + "' has the wrong length");
      }
      for (std::size_t i = 0; i < vec.size(); ++i) tally(i, vec[i]);
    }
    ++n_;
  }

  double value() const override {
    if (n_ == 0) return kInf;
    double sum = 0.0;
    std::vector<double> p;
    for (std::size_t i = 0; i < marginals_.size(); ++i) {
      p = counts_[i];
      for (double& x : p) x /= static_cast<double>(n_);
      // Mass the oracle's support does not cover makes the divergence infinite.
      if (std::accumulate(p.begin(), p.end(), 0.0) < 1.0 - 1e-12) return kInf;
      sum += kl_divergence(p, marginals_[i]);
    }
    return sum / static_cast<double>(marginals_.size());
  }
  std::size_t count() const override { return n_; }

 private:
  void tally(std::size_t component, double x) {
    auto& c = counts_[component];
    if (x >= 0 && x < static_cast<double>(c.size()) && x == std::floor(x)) {
      c[static_cast<std::size_t>(x)] += 1.0;
    }
  }

  std::vector<std::vector<double>> marginals_;
  std::string name_;
  std::vector<std::vector<double>> counts_;
  std::size_t n_ = 0;
};

// MSE of the running-mean predictive probabilities against 0/1 labels.
class MseTracker final : public MetricTracker {
 public:
  MseTracker(std::vector<double> labels, std::string name)
      : labels_(std::move(labels)), name_(std::move(name)), sum_(labels_.size(), 0.0) {}

  void add(const Predicts& predicts) override {
    const auto* v = std::get_if<std::vector<double>>(&find_predict(predicts, name_));
    if (v == nullptr || v->size() != labels_.size()) {
      throw std::runtime_error("MSE metric needs a vector predict '" + name_ +
                               "' matching the labels");
    }
    for (std::size_t i = 0; i < v->size(); ++i) sum_[i] += (*v)[i];
    ++n_;
  }

  double value() const override {
    if (n_ == 0) return 0.25;
    std::vector<double> mean(sum_.size());
    for (std::size_t i = 0; i < sum_.size(); ++i) mean[i] = sum_[i] / static_cast<double>(n_);
    return mse(mean, labels_);
  }
  std::size_t count() const override { return n_; }

 private:
  std::vector<double> labels_;
  std::string name_;
  std::vector<double> sum_;
  std::size_t n_ = 0;
};

}  // namespace

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) return 1.0;
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    double f = cdf(samples[i]);
    double below = static_cast<double>(i) / n;
    double upto = static_cast<double>(j) / n;
    d = std::max({d, std::abs(f - below), std::abs(upto - f)});
    i = j;
  }
  return d;
}

double ks_statistic(std::span<const double> values, std::span<const double> weights,
                    const std::function<double(double)>& cdf) {
  if (values.size() != weights.size()) {
    throw std::invalid_argument("ks_statistic: values and weights differ in length");
  }
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (values.empty() || !(total > 0)) return 1.0;
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });

  double d = 0.0;
  double cum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    double x = values[order[i]];
    double below = cum / total;
    while (i < order.size() && values[order[i]] == x) cum += weights[order[i++]];
    double f = cdf(x);
    d = std::max({d, std::abs(f - below), std::abs(cum / total - f)});
  }
  return d;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0) continue;
    double qi = i < q.size() ? q[i] : 0.0;
    if (qi <= 0) return kInf;
    kl += p[i] * std::log(p[i] / qi);
  }
  return std::max(kl, 0.0);
}

std::vector<double> empirical_pmf(std::span<const double> samples, std::size_t n) {
  std::vector<double> pmf(n, 0.0);
  if (samples.empty()) return pmf;
  for (double x : samples) {
    if (x >= 0 && x < static_cast<double>(n) && x == std::floor(x)) {
      pmf[static_cast<std::size_t>(x)] += 1.0;
    }
  }
  for (double& v : pmf) v /= static_cast<double>(samples.size());
  return pmf;
}

double mse(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.size() != targets.size()) {
    throw std::invalid_argument("mse: lengths differ (" + std::to_string(predictions.size()) +
                                " vs " + std::to_string(targets.size()) + ")");
  }
  if (predictions.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    double e = predictions[i] - targets[i];
    s += e * e;
  }
  return s / static_cast<double>(predictions.size());
}

std::unique_ptr<MetricTracker> make_tracker(const BenchmarkModel& model) {
  switch (model.metric) {
    case MetricKind::KS:
      if (const auto* o = std::get_if<CdfOracle>(&model.oracle)) {
        return std::make_unique<KsTracker>(o->cdf, model.predict_name);
      }
      break;
    case MetricKind::KL:
      if (const auto* o = std::get_if<PmfOracle>(&model.oracle)) {
        return std::make_unique<KlTracker>(o->marginals, model.predict_name);
      }
      break;
    case MetricKind::MSE:
      if (!model.labels.empty()) {
        return std::make_unique<MseTracker>(model.labels, model.predict_name);
      }
      break;
  }
  throw std::invalid_argument("model '" + model.name + "' has no oracle for its " +
                              std::string(to_string(model.metric)) + " metric");
}

}  // namespace tracemc
