#include "tracemc/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace tracemc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool is_whole(double x) { return std::isfinite(x) && x == std::floor(x); }

double poisson_cdf(double rate, double k) {
  if (k < 0) return 0.0;
  return boost::math::gamma_q(std::floor(k) + 1.0, rate);
}

double poisson_quantile(double rate, double p) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return kInf;
  // Start near the normal approximation, then walk to the exact answer.
  double z = -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
  double k = std::max(0.0, std::floor(rate + std::sqrt(rate) * z));
  while (k > 0 && poisson_cdf(rate, k - 1) >= p) k -= 1;
  while (poisson_cdf(rate, k) < p) k += 1;
  return k;
}

}  // namespace

Normal::Normal(double mean, double stddev) : mean_(mean), stddev_(stddev) {
  require(std::isfinite(mean), "Normal: mean must be finite");
  require(std::isfinite(stddev) && stddev > 0, "Normal: stddev must be positive");
}

Uniform::Uniform(double lo, double hi) : lo_(lo), hi_(hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
          "Uniform: requires finite lo < hi");
}

Poisson::Poisson(double rate) : rate_(rate) {
  require(std::isfinite(rate) && rate > 0, "Poisson: rate must be positive");
}

InverseGamma::InverseGamma(double shape, double scale) : shape_(shape), scale_(scale) {
  require(std::isfinite(shape) && shape > 0, "InverseGamma: shape must be positive");
  require(std::isfinite(scale) && scale > 0, "InverseGamma: scale must be positive");
}

Bernoulli::Bernoulli(double p) : p_(p) {
  require(p >= 0.0 && p <= 1.0, "Bernoulli: p must lie in [0, 1]");
}

Categorical::Categorical(std::vector<double> probs) : probs_(std::move(probs)) {
  require(!probs_.empty(), "Categorical: needs at least one outcome");
  double total = 0.0;
  for (double p : probs_) {
    require(std::isfinite(p) && p >= 0.0, "Categorical: probabilities must be non-negative");
    total += p;
  }
  require(std::abs(total - 1.0) <= 1e-9 * static_cast<double>(probs_.size()),
          "Categorical: probabilities must sum to 1");
}

double log_prob(const Distribution& d, double x) {
  if (std::isnan(x)) return kNegInf;
  return std::visit(
      Overloaded{
          [x](const Normal& n) {
            double z = (x - n.mean()) / n.stddev();
            return -0.5 * z * z - std::log(n.stddev()) - 0.5 * std::log(2.0 * std::numbers::pi);
          },
          [x](const Uniform& u) {
            return (x >= u.lo() && x <= u.hi()) ? -std::log(u.hi() - u.lo()) : kNegInf;
          },
          [x](const Poisson& p) {
            if (!is_whole(x) || x < 0) return kNegInf;
            return x * std::log(p.rate()) - p.rate() - std::lgamma(x + 1.0);
          },
          [x](const InverseGamma& g) {
            if (!(x > 0) || !std::isfinite(x)) return kNegInf;
            return g.shape() * std::log(g.scale()) - std::lgamma(g.shape()) -
                   (g.shape() + 1.0) * std::log(x) - g.scale() / x;
          },
          [x](const Bernoulli& b) {
            if (x == 1.0) return std::log(b.p());
            if (x == 0.0) return std::log1p(-b.p());
            return kNegInf;
          },
          [x](const Categorical& c) {
            if (!is_whole(x) || x < 0 || x >= static_cast<double>(c.size())) return kNegInf;
            return std::log(c.probs()[static_cast<std::size_t>(x)]);
          },
      },
      d);
}

double draw(const Distribution& d, Rng& rng) { return quantile(d, rng.uniform_open()); }

double cdf(const Distribution& d, double x) {
  if (std::isnan(x)) throw std::invalid_argument("cdf: x is NaN");
  return std::visit(
      Overloaded{
          [x](const Normal& n) {
            return 0.5 * std::erfc(-(x - n.mean()) / (n.stddev() * std::numbers::sqrt2));
          },
          [x](const Uniform& u) { return std::clamp((x - u.lo()) / (u.hi() - u.lo()), 0.0, 1.0); },
          [x](const Poisson& p) { return poisson_cdf(p.rate(), x); },
          [x](const InverseGamma& g) {
            if (!(x > 0)) return 0.0;
            if (std::isinf(x)) return 1.0;
            return boost::math::gamma_q(g.shape(), g.scale() / x);
          },
          [x](const Bernoulli& b) {
            if (x < 0) return 0.0;
            return x < 1 ? 1.0 - b.p() : 1.0;
          },
          [x](const Categorical& c) {
            if (x < 0) return 0.0;
            double acc = 0.0;
            auto last = std::min(static_cast<double>(c.size() - 1), std::floor(x));
            for (std::size_t i = 0; i <= static_cast<std::size_t>(last); ++i) acc += c.probs()[i];
            return std::min(acc, 1.0);
          },
      },
      d);
}

double quantile(const Distribution& d, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p must lie in [0, 1]");
  return std::visit(
      Overloaded{
          [p](const Normal& n) {
            if (p == 0.0) return kNegInf;
            if (p == 1.0) return kInf;
            return n.mean() - n.stddev() * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
          },
          [p](const Uniform& u) { return u.lo() + p * (u.hi() - u.lo()); },
          [p](const Poisson& q) { return poisson_quantile(q.rate(), p); },
          [p](const InverseGamma& g) {
            if (p == 0.0) return 0.0;
            if (p == 1.0) return kInf;
            return g.scale() / boost::math::gamma_q_inv(g.shape(), p);
          },
          [p](const Bernoulli& b) { return p <= 1.0 - b.p() ? 0.0 : 1.0; },
          [p](const Categorical& c) {
            double acc = 0.0;
            std::size_t last_positive = 0;
            for (std::size_t i = 0; i < c.size(); ++i) {
              acc += c.probs()[i];
              if (c.probs()[i] > 0) last_positive = i;
              if (acc >= p) return static_cast<double>(i);
            }
            // Accumulated rounding left the total just below p.
            return static_cast<double>(last_positive);
          },
      },
      d);
}

bool is_discrete(const Distribution& d) {
  return std::holds_alternative<Poisson>(d) || std::holds_alternative<Bernoulli>(d) ||
         std::holds_alternative<Categorical>(d);
}

bool same_variant(const Distribution& a, const Distribution& b) { return a.index() == b.index(); }

std::string variant_name(const Distribution& d) {
  static constexpr const char* kNames[] = {"Normal",       "Uniform",   "Poisson",
                                           "InverseGamma", "Bernoulli", "Categorical"};
  return kNames[d.index()];
}

double support_min(const Distribution& d) {
  return std::visit(Overloaded{
                        [](const Normal&) { return kNegInf; },
                        [](const Uniform& u) { return u.lo(); },
                        [](const InverseGamma&) { return 0.0; },
                        [](const auto&) { return 0.0; },
                    },
                    d);
}

double support_max(const Distribution& d) {
  return std::visit(Overloaded{
                        [](const Uniform& u) { return u.hi(); },
                        [](const Bernoulli&) { return 1.0; },
                        [](const Categorical& c) { return static_cast<double>(c.size() - 1); },
                        [](const auto&) { return kInf; },
                    },
                    d);
}

}  // namespace tracemc
