#include "tracemc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tracemc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kCoverageTolerance = 1e-4;
constexpr double kReferenceWidening = 10.0;

std::vector<double> evaluate(const std::function<double(double)>& log_density, double lo,
                             double step, std::size_t nodes) {
  std::vector<double> out(nodes);
  for (std::size_t i = 0; i < nodes; ++i) out[i] = log_density(lo + step * static_cast<double>(i));
  return out;
}

double max_finite(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) {
    if (x > m) m = x;
  }
  return m;
}

// Trapezoid mass relative to exp(offset).
double scaled_mass(const std::vector<double>& logs, double step, double offset) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < logs.size(); ++i) {
    sum += 0.5 * step * (std::exp(logs[i] - offset) + std::exp(logs[i + 1] - offset));
  }
  return sum;
}

}  // namespace

GridCdf::GridCdf(double lo, double step, std::vector<double> cumulative)
    : lo_(lo), step_(step), cumulative_(std::move(cumulative)) {
  if (cumulative_.size() < 2 || !(step_ > 0)) {
    throw std::invalid_argument("GridCdf: need at least two nodes and a positive step");
  }
}

double GridCdf::operator()(double x) const {
  if (x <= lo_) return 0.0;
  double pos = (x - lo_) / step_;
  auto last = static_cast<double>(cumulative_.size() - 1);
  if (pos >= last) return 1.0;
  auto i = static_cast<std::size_t>(pos);
  double frac = pos - static_cast<double>(i);
  return std::clamp(cumulative_[i] + frac * (cumulative_[i + 1] - cumulative_[i]), 0.0, 1.0);
}

GridCdf grid_posterior(const std::function<double(double)>& log_density, const GridSpec& spec) {
  if (!(spec.hi > spec.lo) || !(spec.step > 0)) {
    throw std::invalid_argument("grid_posterior: bad grid specification");
  }
  auto intervals = static_cast<std::size_t>(std::llround((spec.hi - spec.lo) / spec.step));
  std::size_t nodes = intervals + 1;
  std::vector<double> logs = evaluate(log_density, spec.lo, spec.step, nodes);

  double centre = 0.5 * (spec.lo + spec.hi);
  double wide_lo = centre - kReferenceWidening * 0.5 * (spec.hi - spec.lo);
  double wide_step = spec.step * kReferenceWidening;
  std::vector<double> wide_logs = evaluate(log_density, wide_lo, wide_step, nodes);

  double offset = std::max(max_finite(logs), max_finite(wide_logs));
  if (offset == kNegInf) throw CoverageError("grid_posterior: density is zero on the grid");
  double mass = scaled_mass(logs, spec.step, offset);
  double wide_mass = scaled_mass(wide_logs, wide_step, offset);
  if (mass < (1.0 - kCoverageTolerance) * wide_mass) {
    throw CoverageError("grid_posterior: grid covers only " + std::to_string(mass / wide_mass) +
                        " of the reference mass");
  }

  std::vector<double> cumulative(nodes, 0.0);
  for (std::size_t i = 1; i < nodes; ++i) {
    cumulative[i] = cumulative[i - 1] + 0.5 * spec.step *
                                            (std::exp(logs[i - 1] - offset) +
                                             std::exp(logs[i] - offset)) /
                                            mass;
  }
  return GridCdf(spec.lo, spec.step, std::move(cumulative));
}

double log_trapezoid(const std::function<double(double)>& log_f, double lo, double hi,
                     std::size_t n) {
  double step = (hi - lo) / static_cast<double>(n);
  std::vector<double> logs = evaluate(log_f, lo, step, n + 1);
  double offset = max_finite(logs);
  if (offset == kNegInf) return kNegInf;
  return offset + std::log(scaled_mass(logs, step, offset));
}

}  // namespace tracemc
