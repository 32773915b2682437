#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <vector>

// Globally adaptive Gauss-Kronrod (G7, K15) quadrature and a natural cubic
// spline. The quadrature is templated on the integrand value type so the
// same driver serves real Melnikov integrals and complex pairing integrals.

namespace cnls::quad {

// K15 abscissae (positive half) and weights; rows 0..3 carry the G7 weights.
inline constexpr double kNodes[8] = {
    0.000000000000000, 0.405845151377397, 0.741531185599394,
    0.949107912342759, 0.207784955007898, 0.586087235467691,
    0.864864423359769, 0.991455371120813};
inline constexpr double kGauss[4] = {0.417959183673469, 0.381830050505119,
                                     0.279705391489277, 0.129484966168870};
inline constexpr double kKronrod[8] = {
    0.209482141084728, 0.190350578064785, 0.140653259715525,
    0.063092092629979, 0.204432940075298, 0.169004726639267,
    0.104790010322250, 0.022935322010529};

template <class V>
struct QuadResult {
  V value{};
  double error = 0.0;
  bool converged = false;
};

template <class V, class F>
void g7k15(const F& f, double a, double b, V& k15, double& err) {
  const double mid = 0.5 * (a + b);
  const double hal = 0.5 * (b - a);
  V y0 = f(mid);
  V g7 = kGauss[0] * y0;
  k15 = kKronrod[0] * y0;
  for (int i = 1; i < 8; ++i) {
    V yi = f(mid + hal * kNodes[i]) + f(mid - hal * kNodes[i]);
    k15 += kKronrod[i] * yi;
    if (i < 4) g7 += kGauss[i] * yi;
  }
  g7 *= hal;
  k15 *= hal;
  err = std::abs(k15 - g7);
}

// Globally adaptive: repeatedly bisect the interval with the largest error
// estimate until sum of errors <= max(abs_tol, rel_tol*|I|).
template <class V, class F>
QuadResult<V> integrate(const F& f, double a, double b, double abs_tol = 1e-11,
                        double rel_tol = 1e-12, int max_intervals = 20000) {
  struct Piece {
    double a, b, err;
    V val;
    bool operator<(const Piece& o) const { return err < o.err; }
  };
  std::priority_queue<Piece> heap;
  V total{};
  double toterr = 0.0;
  auto push = [&](double lo, double hi) {
    Piece p{lo, hi, 0.0, V{}};
    g7k15<V>(f, lo, hi, p.val, p.err);
    total += p.val;
    toterr += p.err;
    heap.push(p);
  };
  // seed with a few pieces so sharply peaked integrands are not missed
  const int seed = 8;
  for (int i = 0; i < seed; ++i)
    push(a + (b - a) * i / seed, a + (b - a) * (i + 1) / seed);
  int n = seed;
  while (toterr > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (n >= max_intervals) return {total, toterr, false};
    Piece worst = heap.top();
    heap.pop();
    total -= worst.val;
    toterr -= worst.err;
    double mid = 0.5 * (worst.a + worst.b);
    push(worst.a, mid);
    push(mid, worst.b);
    ++n;
  }
  return {total, toterr, true};
}

// Natural cubic spline on strictly increasing abscissae.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n)
      throw std::invalid_argument("CubicSpline: need >= 3 matching points");
    std::vector<double> h(n - 1), alpha(n, 0.0), l(n), mu(n), z(n);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];
    for (std::size_t i = 1; i + 1 < n; ++i)
      alpha[i] = 3.0 * ((y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1]);
    l[0] = 1.0;
    mu[0] = z[0] = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      l[i] = 2.0 * (x_[i + 1] - x_[i - 1]) - h[i - 1] * mu[i - 1];
      mu[i] = h[i] / l[i];
      z[i] = (alpha[i] - h[i - 1] * z[i - 1]) / l[i];
    }
    c_.assign(n, 0.0);
    b_.assign(n - 1, 0.0);
    d_.assign(n - 1, 0.0);
    for (std::size_t j = n - 1; j-- > 0;) {
      c_[j] = z[j] - mu[j] * c_[j + 1];
      b_[j] = (y_[j + 1] - y_[j]) / h[j] - h[j] * (c_[j + 1] + 2.0 * c_[j]) / 3.0;
      d_[j] = (c_[j + 1] - c_[j]) / (3.0 * h[j]);
    }
  }

  double operator()(double x) const {
    std::size_t j = locate(x);
    double dx = x - x_[j];
    return y_[j] + dx * (b_[j] + dx * (c_[j] + dx * d_[j]));
  }

  double deriv(double x) const {
    std::size_t j = locate(x);
    double dx = x - x_[j];
    return b_[j] + dx * (2.0 * c_[j] + 3.0 * dx * d_[j]);
  }

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::size_t locate(double x) const {
    if (x <= x_.front()) return 0;
    if (x >= x_.back()) return x_.size() - 2;
    std::size_t lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      (x_[mid] <= x ? lo : hi) = mid;
    }
    return lo;
  }

  std::vector<double> x_, y_, b_, c_, d_;
};

}  // namespace cnls::quad
