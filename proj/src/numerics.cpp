#include "qfb/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qfb::num {

double bisect_root(const Fn& f, double lo, double hi, double xtol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw std::invalid_argument("bisect_root: no sign change on bracket");
  for (int i = 0; i < max_iter && (hi - lo) > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi,
                        double xtol, int max_iter) {
  for (int i = 0; i < max_iter && (hi - lo) > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double golden_max(const Fn& f, double lo, double hi, double xtol) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  return std::max(f(xm), std::max(f1, f2));
}

namespace {

double grid_extremum(const Fn& f, double lo, double hi, int n, double xtol, bool maximize,
                     double* arg) {
  if (n < 3) n = 3;
  const double h = (hi - lo) / (n - 1);
  int best = 0;
  double best_val = maximize ? f(lo) : -f(lo);
  const Fn g = maximize ? f : Fn([&f](double x) { return -f(x); });
  for (int i = 1; i < n; ++i) {
    const double v = g(lo + i * h);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double a = std::max(lo, lo + (best - 1) * h);
  const double b = std::min(hi, lo + (best + 1) * h);
  const double refined = golden_max(g, a, b, xtol);
  if (arg) {
    // relocate the argmax inside [a, b] with a fine scan (cheap, only on demand)
    double ax = a, av = g(a);
    for (int i = 1; i <= 64; ++i) {
      const double x = a + (b - a) * i / 64.0;
      const double v = g(x);
      if (v > av) {
        av = v;
        ax = x;
      }
    }
    *arg = ax;
  }
  const double val = std::max(best_val, refined);
  return maximize ? val : -val;
}

double simpson(const Fn& f, double a, double fa, double m, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const Fn& f, double a, double fa, double m, double fm, double b, double fb,
                     double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, lm, flm, m, fm);
  const double right = simpson(f, m, fm, rm, frm, b, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_step(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double grid_max(const Fn& f, double lo, double hi, int n, double xtol) {
  return grid_extremum(f, lo, hi, n, xtol, true, nullptr);
}

double grid_min(const Fn& f, double lo, double hi, int n, double xtol) {
  return grid_extremum(f, lo, hi, n, xtol, false, nullptr);
}

double grid_argmax(const Fn& f, double lo, double hi, int n, double xtol) {
  double arg = lo;
  grid_extremum(f, lo, hi, n, xtol, true, &arg);
  return arg;
}

double integrate(const Fn& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = simpson(f, a, fa, m, fm, b, fb);
  return adaptive_step(f, a, fa, m, fm, b, fb, whole, tol, 48);
}

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n != y_.size() || n < 2) throw std::invalid_argument("Pchip: need two or more nodes");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("Pchip: nodes must increase");
  }
  m_.assign(n, 0.0);
  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    d[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (n == 2) {
    m_[0] = m_[1] = d[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      m_[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  auto endpoint = [](double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0) {
      m = 0.0;
    } else if (d0 * d1 <= 0.0 && std::abs(m) > 3.0 * std::abs(d0)) {
      m = 3.0 * d0;
    }
    return m;
  };
  m_[0] = endpoint(h[0], h[1], d[0], d[1]);
  m_[n - 1] = endpoint(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
}

std::size_t Pchip::cell(double x) const {
  if (x <= x_.front()) return 0;
  if (x >= x_.back()) return x_.size() - 2;
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double Pchip::operator()(double x) const {
  const std::size_t i = cell(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
}

double Pchip::derivative(double x) const {
  const std::size_t i = cell(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  const double dh00 = (6 * t2 - 6 * t) / h;
  const double dh10 = 3 * t2 - 4 * t + 1;
  const double dh01 = (-6 * t2 + 6 * t) / h;
  const double dh11 = 3 * t2 - 2 * t;
  return dh00 * y_[i] + dh10 * m_[i] + dh01 * y_[i + 1] + dh11 * m_[i + 1];
}

}  // namespace qfb::num
