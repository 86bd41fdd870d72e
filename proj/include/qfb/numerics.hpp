#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace qfb::num {

using Fn = std::function<double(double)>;

// Root of a continuous function with a sign change on [lo, hi].
double bisect_root(const Fn& f, double lo, double hi, double xtol, int max_iter = 200);

// Boundary of a monotone predicate on [lo, hi] (false at lo, true at hi).
// Returns the midpoint of the final bracket.
double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi,
                        double xtol, int max_iter = 400);

// Golden-section maximisation on [lo, hi] (unimodal assumed).
double golden_max(const Fn& f, double lo, double hi, double xtol = 1e-12);

// Extrema over [lo, hi]: n-point grid scan, then golden-section refinement in
// the bracket around the best grid cell. Returns the extremal value.
double grid_max(const Fn& f, double lo, double hi, int n = 4001, double xtol = 1e-12);
double grid_min(const Fn& f, double lo, double hi, int n = 4001, double xtol = 1e-12);
// Location variants.
double grid_argmax(const Fn& f, double lo, double hi, int n = 4001, double xtol = 1e-12);

// Adaptive Simpson quadrature to absolute tolerance.
double integrate(const Fn& f, double a, double b, double tol = 1e-10);

// Shape-preserving piecewise-cubic interpolant (Fritsch-Carlson slopes).
// Nodes must be strictly increasing.
class Pchip {
public:
  Pchip() = default;
  Pchip(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;

  bool empty() const { return x_.empty(); }
  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

private:
  std::size_t cell(double x) const;
  std::vector<double> x_, y_, m_;
};

}  // namespace qfb::num
