#pragma once

#include <string>
#include <variant>
#include <vector>

#include "tracemc/random.hpp"

namespace tracemc {

// Every value a distribution produces is carried as a double; integer-valued
// primitives (Poisson counts, Bernoulli outcomes, Categorical indices) use
// exactly representable whole numbers.

class Normal {
 public:
  Normal(double mean, double stddev);
  double mean() const { return mean_; }
  double stddev() const { return stddev_; }

 private:
  double mean_;
  double stddev_;
};

class Uniform {
 public:
  Uniform(double lo, double hi);
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

class Poisson {
 public:
  explicit Poisson(double rate);
  double rate() const { return rate_; }

 private:
  double rate_;
};

/// Density scale^shape / Gamma(shape) * x^(-shape-1) * exp(-scale/x).
class InverseGamma {
 public:
  InverseGamma(double shape, double scale);
  double shape() const { return shape_; }
  double scale() const { return scale_; }

 private:
  double shape_;
  double scale_;
};

class Bernoulli {
 public:
  explicit Bernoulli(double p);
  double p() const { return p_; }

 private:
  double p_;
};

class Categorical {
 public:
  explicit Categorical(std::vector<double> probs);
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }

 private:
  std::vector<double> probs_;
};

using Distribution =
    std::variant<Normal, Uniform, Poisson, InverseGamma, Bernoulli, Categorical>;

/// Log density (continuous) or log mass (discrete). Values outside the
/// support, including non-integers for discrete variants and NaN, give -inf.
double log_prob(const Distribution& d, double x);

/// Draws by inversion: quantile(d, u) for one open-interval uniform u.
double draw(const Distribution& d, Rng& rng);

double cdf(const Distribution& d, double x);

/// Generalized inverse of cdf. For discrete variants this is the smallest
/// support point whose cdf reaches p. Throws std::invalid_argument when p is
/// outside [0, 1].
double quantile(const Distribution& d, double p);

bool is_discrete(const Distribution& d);
bool same_variant(const Distribution& a, const Distribution& b);
std::string variant_name(const Distribution& d);

/// Lower end of the support; the value below which the cdf is zero.
double support_min(const Distribution& d);

/// Upper end of the support (+inf for unbounded variants).
double support_max(const Distribution& d);

}  // namespace tracemc
