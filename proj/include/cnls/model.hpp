#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// The CNLS model: parameters, the cubic nonlinearity and its partial
// derivatives, the steady system, the fundamental sech wave, and the
// critical coupling values where the normal variational equation acquires
// a bounded solution.

namespace cnls::model {

struct ModelParams {
  double omega = 1.0;   // first-component frequency, > 0
  double s = 4.0;       // second-component frequency, > 0
  double beta1 = 0.0;   // cross-coupling (the control parameter)
  double beta2 = 0.0;   // self-coupling of v
  double mu = 0.0;      // deviation beta1 - beta1_critical along a branch
  double epsilon = 0.0; // branch parameter, >= 0

  void validate() const {
    if (!(omega > 0.0) || !(s > 0.0))
      throw std::invalid_argument("ModelParams: omega and s must be positive");
    if (epsilon < 0.0)
      throw std::invalid_argument("ModelParams: epsilon must be nonnegative");
  }
};

// Partial derivatives of the nonlinearity F(z1, z2; mu) used anywhere in the
// linearizations. d1 = dF/dz1, d12 = d^2F/dz1 dz2, dmu2 = d/dmu dF/dz2, etc.
struct NonlinearityDerivs {
  double F = 0, d1 = 0, d2 = 0, d11 = 0, d22 = 0, d12 = 0;
  double d111 = 0, d112 = 0, dmu2 = 0;
};

using NonlinearityFn =
    std::function<NonlinearityDerivs(double, double, const ModelParams&)>;

// Cubic F = z1^2/2 + beta1 z1 z2 + beta2 z2^2/2 with mu == beta1.
NonlinearityDerivs cubic_derivs(double z1, double z2, const ModelParams& p);

struct Grid {
  double L = 20.0;
  int n = 4001;  // number of points, odd so x = 0 is a node
  std::vector<double> x;

  static Grid symmetric(double L, int n);
  double dx() const { return 2.0 * L / (n - 1); }
  int mid() const { return (n - 1) / 2; }
};

enum class Parity { even = 1, odd = -1, none = 0 };

struct WaveProfile {
  Grid grid;
  std::vector<double> U, V;
  double decay_u = 1.0, decay_v = 1.0;  // sqrt(omega), sqrt(s)
  Parity v_parity = Parity::none;
};

// Half-length such that exp(-2 min(sqrt(omega), sqrt(s)) L) < 1e-14,
// floored at 20.
double default_half_length(const ModelParams& p);

// beta1 at which the NVE (with omega = 1) has a bounded solution with ell
// zeros: ((2 sqrt(s) + 2 ell + 1)^2 - 1) / 8.
double beta1_critical(double s, int ell);

// (U0, 0) with U0 = sqrt(2 omega) sech(sqrt(omega) x).
WaveProfile fundamental_profile(const ModelParams& p, const Grid& g);

struct ResidualReport {
  std::vector<double> rU, rV;  // zero on the two boundary layers of the stencil
  double sup_norm = 0.0;
  bool coarse_grid_warning = false;
};

// Residual of the steady system with 4th-order central differences on the
// interior; rows within two points of the boundary are left at zero.
ResidualReport steady_residual(const WaveProfile& w, const ModelParams& p,
                               const NonlinearityFn& nl = cubic_derivs,
                               double requested_tol = 1e-10);

// L2 norm of a grid function (trapezoid).
double l2_norm(const std::vector<double>& f, const Grid& g);
double inner_product(const std::vector<double>& f, const std::vector<double>& g,
                     const Grid& grid);

}  // namespace cnls::model
