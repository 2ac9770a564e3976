#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace tracemc {

struct GridSpec {
  double lo = -10.0;
  double hi = 10.0;
  double step = 0.001;
};

/// The grid did not capture enough posterior mass.
class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Normalized posterior on a uniform grid; cdf queries interpolate linearly
/// between the cumulative trapezoid masses at the nodes.
class GridCdf {
 public:
  GridCdf(double lo, double step, std::vector<double> cumulative);

  double operator()(double x) const;
  double lo() const { return lo_; }
  double hi() const { return lo_ + step_ * static_cast<double>(cumulative_.size() - 1); }
  double step() const { return step_; }
  /// Normalized mass at the last node; 1 up to rounding.
  double total() const { return cumulative_.back(); }

 private:
  double lo_;
  double step_;
  std::vector<double> cumulative_;
};

/// Normalizes exp(log_density) over the grid by the trapezoid rule.
///
/// Throws CoverageError when the grid holds less than 1 - 1e-4 of the mass
/// found on a reference grid ten times wider (same centre, same node count).
GridCdf grid_posterior(const std::function<double(double)>& log_density, const GridSpec& spec);

/// log of the integral of exp(log_f(t)) dt over [lo, hi] by the trapezoid rule
/// with `n` intervals, evaluated stably in log space.
double log_trapezoid(const std::function<double(double)>& log_f, double lo, double hi,
                     std::size_t n);

}  // namespace tracemc
