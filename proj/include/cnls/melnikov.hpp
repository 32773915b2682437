#pragma once

#include <string>
#include <vector>

#include "cnls/model.hpp"
#include "cnls/quadrature.hpp"

// Bifurcation data for the cubic at omega = 1: the bounded NVE solution
// V1, the fundamental solutions phi11/phi12 of the homogeneous U-equation,
// the correction U2, the Melnikov coefficients a2 and b2 (each by several
// independent evaluators), and the approximate bifurcated wave.

namespace cnls::melnikov {

using model::Grid;
using model::ModelParams;
using model::WaveProfile;

// Bounded solution of the NVE at beta1 = beta1_critical(s, ell); has
// parity (-1)^ell and exactly ell interior zeros.
double v1_value(double s, int ell, double x);
std::vector<double> v1_profile(double s, int ell, const Grid& g);

// Fundamental solutions of the homogeneous part of the U2 equation for the
// cubic, normalized to Phi(0) = I. Closed form for any omega > 0.
double phi11_value(double omega, double x);
double phi12_value(double omega, double x);
std::pair<std::vector<double>, std::vector<double>> phi_fundamental(
    const ModelParams& p, const Grid& g);

// Independent evaluator of phi11: reduction-of-order quadrature away from
// the origin, 6th-order Taylor expansion for |x| < 1e-2. Used as an oracle
// against the closed form. Throws if U0''(0) >= 0.
double phi11_by_quadrature(const ModelParams& p, double x);

// Unique bounded even solution of the U2 equation at beta1 = beta1_critical.
std::vector<double> u2_profile(double s, int ell, const Grid& g);

// a2: quadrature of -2 Int V1^2 sech^2 and the closed Gamma-ratio form.
double melnikov_a2_quadrature(double s, int ell);
double melnikov_a2_closed(double s, int ell);

// b2: quadrature (outer adaptive Gauss-Kronrod over a splined cumulative
// inner integral), the double-sum closed form, and the tabulated polynomial
// form (ell <= 4 only).
double melnikov_b2_quadrature(double s, int ell, double beta2);
double melnikov_b2_double_sum(double s, int ell, double beta2);
double melnikov_b2_polynomial(double s, int ell, double beta2);

// beta2 threshold Q1(sqrt s)/Q2(sqrt s) separating supercritical from
// subcritical at fixed (s, ell <= 4).
double beta2_threshold_polynomial(double s, int ell);

enum class BifurcationKind { supercritical, subcritical, degenerate };

struct BifurcationVerdict {
  BifurcationKind kind;
  double beta1_star;
  int ell;
  double a2, b2;
};

BifurcationVerdict classify_bifurcation(double s, int ell, double beta2);

struct BranchPoint {
  double mu;
  double beta1;
  WaveProfile profile;
};

// mu = -(b2/a2) eps^2 and the O(eps^2)-accurate profile
// (U0 + eps^2 U2, eps V1); steady residual is O(eps^3).
BranchPoint approximate_branch(double s, int ell, double beta2, double eps,
                               const Grid& g);

struct MelnikovData {
  std::vector<double> V1, phi11, phi12, U2;
  double a2 = 0.0, b2 = 0.0, mu_bar = 0.0;
  double v1_norm2 = 0.0;     // ||V1||_{L2}^2
  double u0_dot_u2 = 0.0;    // <U0, U2>_{L2}
};

MelnikovData melnikov_data(double s, int ell, double beta2, const Grid& g);

const char* to_string(BifurcationKind k);

}  // namespace cnls::melnikov
