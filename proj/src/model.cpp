#include "cnls/model.hpp"

#include <algorithm>

namespace cnls::model {

NonlinearityDerivs cubic_derivs(double z1, double z2, const ModelParams& p) {
  NonlinearityDerivs d;
  d.F = 0.5 * z1 * z1 + p.beta1 * z1 * z2 + 0.5 * p.beta2 * z2 * z2;
  d.d1 = z1 + p.beta1 * z2;
  d.d2 = p.beta1 * z1 + p.beta2 * z2;
  d.d11 = 1.0;
  d.d22 = p.beta2;
  d.d12 = p.beta1;
  d.d111 = 0.0;
  d.d112 = 0.0;
  d.dmu2 = z1;  // mu == beta1 for the cubic
  return d;
}

Grid Grid::symmetric(double L, int n) {
  if (n < 5 || n % 2 == 0)
    throw std::invalid_argument("Grid: n must be odd and >= 5");
  Grid g;
  g.L = L;
  g.n = n;
  g.x.resize(n);
  double h = 2.0 * L / (n - 1);
  int mid = (n - 1) / 2;
  // exactly mirror-symmetric coordinates: x[n-1-i] == -x[i]
  for (int i = 0; i < n; ++i) g.x[i] = (i - mid) * h;
  return g;
}

double default_half_length(const ModelParams& p) {
  double rate = std::min(std::sqrt(p.omega), std::sqrt(p.s));
  return std::max(20.0, 17.0 / rate);
}

double beta1_critical(double s, int ell) {
  if (!(s > 0.0)) throw std::invalid_argument("beta1_critical: s must be positive");
  if (ell < 0) throw std::invalid_argument("beta1_critical: ell must be >= 0");
  double t = 2.0 * std::sqrt(s) + 2.0 * ell + 1.0;
  return (t * t - 1.0) / 8.0;
}

WaveProfile fundamental_profile(const ModelParams& p, const Grid& g) {
  p.validate();
  WaveProfile w;
  w.grid = g;
  w.U.resize(g.n);
  w.V.assign(g.n, 0.0);
  double rw = std::sqrt(p.omega);
  for (int i = 0; i < g.n; ++i) w.U[i] = std::sqrt(2.0 * p.omega) / std::cosh(rw * g.x[i]);
  w.decay_u = rw;
  w.decay_v = std::sqrt(p.s);
  w.v_parity = Parity::even;
  return w;
}

ResidualReport steady_residual(const WaveProfile& w, const ModelParams& p,
                               const NonlinearityFn& nl, double requested_tol) {
  const Grid& g = w.grid;
  const double h2 = g.dx() * g.dx();
  ResidualReport rep;
  rep.rU.assign(g.n, 0.0);
  rep.rV.assign(g.n, 0.0);
  // nested differences keep the cancellation exact, so the stencil roundoff
  // stays far below the truncation error
  auto d2 = [&](const std::vector<double>& f, int i) {
    double dd1 = (f[i + 1] - f[i]) - (f[i] - f[i - 1]);
    double dd2 = (f[i + 2] - f[i]) - (f[i] - f[i - 2]);
    return (16.0 * dd1 - dd2) / (12.0 * h2);
  };
  auto d2lo = [&](const std::vector<double>& f, int i) {
    return ((f[i + 1] - f[i]) - (f[i] - f[i - 1])) / h2;
  };
  double est = 0.0;
  for (int i = 2; i + 2 < g.n; ++i) {
    auto d = nl(w.U[i] * w.U[i], w.V[i] * w.V[i], p);
    rep.rU[i] = -d2(w.U, i) + p.omega * w.U[i] - d.d1 * w.U[i];
    rep.rV[i] = -d2(w.V, i) + p.s * w.V[i] - d.d2 * w.V[i];
    rep.sup_norm = std::max(rep.sup_norm, std::max(std::abs(rep.rU[i]), std::abs(rep.rV[i])));
    // discretization-error estimate: 2nd- vs 4th-order stencil difference
    est = std::max(est, std::abs(d2(w.U, i) - d2lo(w.U, i)) / 16.0 +
                            std::abs(d2(w.V, i) - d2lo(w.V, i)) / 16.0);
  }
  rep.coarse_grid_warning = est > requested_tol * 1e2 && rep.sup_norm < est;
  return rep;
}

double l2_norm(const std::vector<double>& f, const Grid& g) {
  return std::sqrt(inner_product(f, f, g));
}

double inner_product(const std::vector<double>& f, const std::vector<double>& g,
                     const Grid& grid) {
  double acc = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    double wgt = (i == 0 || i == grid.n - 1) ? 0.5 : 1.0;
    acc += wgt * f[i] * g[i];
  }
  return acc * grid.dx();
}

}  // namespace cnls::model
