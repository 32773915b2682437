#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cnls/model.hpp"

// Numerical continuation of homoclinic orbits of the steady system in
// beta1: a Lobatto IIIA (4-stage, order 6) collocation discretization on a
// half-line mesh graded toward x = 0, Newton solves, pseudo-arclength
// stepping with branch switching, and pitchfork detection through the NVE
// operator's inertia.

namespace cnls::continuation {

using model::Grid;
using model::ModelParams;
using model::Parity;
using model::WaveProfile;

struct NewtonFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StepUnderflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CollocationOptions {
  int n_intervals = 160;
  double grading = 2.5;        // mesh density boost toward x = 0
  double half_length = 0.0;    // 0 means model::default_half_length
  double newton_tol = 1e-11;   // sup-norm of the collocation residual
  int max_newton = 25;
};

// Collocation solution on [0, L]; node values are (U, V, U', V').
struct CollocationSolution {
  std::vector<double> nodes;                  // mesh, size N+1
  std::vector<std::array<double, 4>> z;       // node values, size N+1
  std::vector<std::array<double, 8>> stages;  // two interior stages per interval
  Parity v_parity = Parity::even;
  double beta1 = 0.0;
  double residual_sup = 0.0;

  // dense output via the collocation polynomial; x in [0, L]
  std::array<double, 4> eval(double x, const ModelParams& p) const;
  // sampled full-line profile (U even, V per parity)
  WaveProfile to_profile(const Grid& g, const ModelParams& p) const;
  double v_l2_norm(const ModelParams& p) const;  // full-line L2 of V
};

// Newton-converge the collocation system at fixed beta1 (taken from params)
// starting from an initial profile guess.
CollocationSolution solve_homoclinic(const ModelParams& params,
                                     const WaveProfile& guess, Parity v_parity,
                                     const CollocationOptions& opt = {});

struct BranchPointRec {
  double beta1;
  double v_norm;  // ||V||_{L2} over the line
  int ell;
  CollocationSolution sol;
};

struct Branch {
  std::vector<BranchPointRec> points;
  Parity parity = Parity::even;
  int ell = 0;
  std::string origin;  // "fundamental" or "pitchfork at beta1=..."
};

struct StepControls {
  double initial = 0.02;
  double min_step = 1e-6;
  double max_step = 0.25;
  int fast_newton = 5;  // double the step when Newton converges this fast
};

// Pseudo-arclength continuation in beta1 from a converged start.
Branch continue_branch(const ModelParams& start_params,
                       const CollocationSolution& start,
                       std::pair<double, double> beta1_range,
                       const StepControls& ctl = {},
                       const CollocationOptions& opt = {});

// beta1 values in the window where the NVE operator
// -d^2/dx^2 + s - beta1 U0^2 acquires a new negative direction, bisected to
// |dbeta1| <= 1e-8. Empty when none found.
std::vector<double> detect_pitchfork(const ModelParams& params,
                                     std::pair<double, double> beta1_window,
                                     const Grid& g);

// Sign changes of V ignoring sub-threshold oscillations; flags the
// identically-zero profile.
struct ZeroCount {
  int zeros = 0;
  bool trivial = false;
};
ZeroCount count_zeros(std::span<const double> V, double rel_threshold = 1e-9);

// Newton polish of a profile on the uniform grid with 4th-order finite
// differences and parity boundary conditions at x = 0. The returned profile
// satisfies the discrete steady equations to ~1e-12, which makes it suitable
// for inertia-based Sturm counts on the same grid.
WaveProfile refine_on_grid(const WaveProfile& guess, const ModelParams& params,
                           Parity v_parity, double tol = 1e-12);

// Hamiltonian H = (-(omega U^2) - s V^2 + F + U'^2 + V'^2)/2 evaluated on a
// collocation solution at its mesh nodes (derivatives from the solution).
std::vector<double> hamiltonian_samples(const CollocationSolution& sol,
                                        const ModelParams& p);

}  // namespace cnls::continuation
