#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "cnls/model.hpp"
#include "cnls/quadrature.hpp"

// Evans-function machinery: coefficient matrices of the linearized
// eigenvalue problem as a first-order 8x8 system, Jost solutions by rescaled
// complex ODE integration with subspace re-orthonormalization, the 8x8 Evans
// determinant, the closed cubic factors for the fundamental wave, extended
// Evans functions at branch points, and argument-principle root location.

namespace cnls::evans {

using cplx = std::complex<double>;
using model::ModelParams;
using model::WaveProfile;

// nu_1..nu_4 on the branches with arg nu_1, arg nu_3 in (-3pi/4, pi/4] and
// arg nu_2, arg nu_4 in (-pi/4, 3pi/4]; nu_{j+4} = -nu_j.
struct NuSet {
  std::array<cplx, 4> nu;
};
NuSet nu_branch(cplx lambda, double omega, double s);

struct SpectralPoint {
  cplx lambda;
  std::array<cplx, 4> nu;
  bool in_omega = false;       // right half plane or the spectral-gap strip
  bool in_omega_e = false;     // min_j Re nu_j > -kappa/2
  bool in_essential = false;
  double branch_distance = 0.0;  // to the nearest of +-i omega, +-i s
};
SpectralPoint spectral_point(cplx lambda, const ModelParams& p);

// Evaluator of the 8x8 coefficient matrix A(x, lambda). Built either from a
// wave profile (exact route) or from the eps-expansion A0 + eps A1 + eps^2 A2
// around the fundamental wave.
class CoefficientMatrix {
 public:
  using Mat8 = std::array<std::array<cplx, 8>, 8>;

  static CoefficientMatrix fundamental(const ModelParams& p, double half_length = 0.0);
  static CoefficientMatrix from_profile(const WaveProfile& w, const ModelParams& p);
  // eps-expansion route: requires omega = 1 and beta1 = beta1_critical + mu.
  static CoefficientMatrix eps_expansion(double s, int ell, double beta2,
                                         double eps, double half_length = 0.0);

  void assemble(double x, cplx lambda, Mat8& A) const;
  // the x-dependent symmetric 4x4 potential block B(x) of the linearization
  void potentials(double x, double out[4][4]) const;
  double half_length() const { return L_; }
  const ModelParams& params() const { return params_; }
  bool is_fundamental() const { return mode_ == Mode::fundamental; }

 private:
  enum class Mode { fundamental, profile, expansion };
  Mode mode_ = Mode::fundamental;
  ModelParams params_;
  double L_ = 20.0;
  // profile route
  std::shared_ptr<quad::CubicSpline> uspline_, vspline_;
  // expansion route
  int ell_ = 0;
  double eps_ = 0.0, mu_bar_ = 0.0, beta1_star_ = 0.0;
  std::shared_ptr<quad::CubicSpline> u2spline_;
};

struct EvansOptions {
  double rtol = 1e-11;
  double atol = 1e-13;
  double renorm_interval = 2.0;
  bool x_independence = false;  // also evaluate at x = -L/4, +L/4
};

struct EvansValue {
  cplx value;             // exp(log_value); may over/underflow for extreme lambda
  cplx log_value;         // log E with unwound magnitude, phase mod 2pi
  std::optional<std::array<cplx, 3>> factors;  // E_A, E_B, E_C when closed forms apply
  bool extended = false;
  cplx gamma;
  double x_independence_rel = 0.0;  // populated when requested
};

// Numerical Evans function by bundle integration of the Jost subspaces.
EvansValue evans_eval(const CoefficientMatrix& ctx, cplx lambda,
                      const EvansOptions& opt = {});

// Closed factors for the cubic fundamental wave at omega = 1.
cplx evans_factor_A(cplx lambda, const ModelParams& p);
cplx evans_factor_B(cplx lambda, const ModelParams& p);
cplx evans_factor_C(cplx lambda, const ModelParams& p);
EvansValue evans_closed_fundamental(cplx lambda, const ModelParams& p);

// chi = (-1 + sqrt(1 + 8 beta1)) / 2
cplx chi_exponent(double beta1);

// Extended Evans function near a branch point: gamma^2 = +-i(lambda - br)
// with the sign fixed by the half plane of the branch point. The radius of
// validity is 0.5 min(sqrt omega, sqrt s).
EvansValue extended_evans(const CoefficientMatrix& ctx, cplx gamma,
                          cplx branch_point, const EvansOptions& opt = {});

// Closed-form Jost solutions of the fundamental cubic wave (omega = 1).
struct JostClosed {
  cplx p1, q1, dp1, dq1;  // growing A-block pair at nu1
  cplx p2, q2, dp2, dq2;  // at nu2
  cplx p4, dp4;           // B-block
};
JostClosed jost_closed_fundamental(double x, cplx lambda, const ModelParams& p);

// B-block Jost solution (p4, p4') at x = 0 by direct rescaled integration of
// the 2x2 block from -L; an oracle for the closed form.
std::array<cplx, 2> jost_p4_numeric(const ModelParams& p, cplx lambda,
                                    double half_length = 0.0, double rtol = 1e-12);

struct ZeroLocation {
  cplx lambda;
  int multiplicity;
};
struct LocateOptions {
  EvansOptions evans;
  double newton_tol = 1e-9;
  double min_box = 0.02;   // quadtree side below which Newton takes over
  int max_jitter = 5;
  int max_depth = 9;
};

// All zeros of E inside the rectangle [re0, re1] x [im0, im1] by winding
// number subdivision plus Newton polish. The boundary must avoid zeros; it
// is jittered on demand.
std::vector<ZeroLocation> locate_zeros(const CoefficientMatrix& ctx, double re0,
                                       double re1, double im0, double im1,
                                       const LocateOptions& opt = {});

// Winding number of E around the rectangle boundary.
int winding_number(const CoefficientMatrix& ctx, double re0, double re1,
                   double im0, double im1, const EvansOptions& opt = {});

// Variants over an arbitrary analytic log E (used with the closed factors).
int winding_number_fn(const std::function<cplx(cplx)>& logE, double re0,
                      double re1, double im0, double im1,
                      int samples_per_edge = 12);
std::vector<ZeroLocation> locate_zeros_fn(const std::function<cplx(cplx)>& logE,
                                          double re0, double re1, double im0,
                                          double im1,
                                          const LocateOptions& opt = {});

enum class PointKind { eigenvalue, resonance_pole, regular, boundary_case };
PointKind classify_point(const CoefficientMatrix& ctx, cplx lambda0);
const char* to_string(PointKind k);

}  // namespace cnls::evans
