#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cnls/evans.hpp"
#include "cnls/melnikov.hpp"
#include "cnls/model.hpp"

// Stability verdicts: Sturm negative-eigenvalue counts of the L-+/- blocks,
// the D matrices and the Hamiltonian-Krein index, the I^ell integrals with
// their closed forms, pairing constants, the case classifier for zeros of
// the unperturbed Evans function, and eigenvalue-perturbation predictions.

namespace cnls::spectral {

using cplx = std::complex<double>;
using model::Grid;
using model::ModelParams;
using model::WaveProfile;

// Negative-eigenvalue count of -d^2/dx^2 + q(x) (scalar) or the coupled
// 2x2 system with symmetric potential Q(x), 4th-order finite differences and
// banded LDL^T inertia. Eigenvalues within |lambda| < boundary_tol of zero
// raise the boundary flag and are not counted.
struct SturmCount {
  int negative = 0;
  bool boundary_flag = false;
  bool stable_under_refinement = true;
};
SturmCount sturm_negative_count(const std::function<double(double)>& q,
                                const Grid& g, double boundary_tol = 1e-7);
SturmCount sturm_negative_count_coupled(
    const std::function<std::array<double, 3>(double)>& q_uu_uv_vv,
    const Grid& g, double boundary_tol = 1e-7);

// D matrices. The fundamental wave gives diag(2 sqrt(omega), -2/sqrt(omega));
// the bifurcated wave uses the leading-order entries of the 3x3 matrix in
// terms of Melnikov data.
std::array<double, 2> d_matrix_fundamental(double omega);
struct DMatrix {
  // symmetric 3x3, stored fully
  double m[3][3];
  int n_negative;
  bool singular;
};
DMatrix d_matrix_bifurcated(const melnikov::MelnikovData& md, double omega = 1.0);

enum class Verdict {
  orbitally_stable,
  orbitally_unstable,
  spectrally_unstable,
  undetermined_by_index
};
const char* to_string(Verdict v);

struct KreinReport {
  int n_L_minus = 0;
  int n_L_plus = 0;
  int n_D = 0;
  int K_ham = 0;
  int k_r = 0;
  bool boundary_flag = false;
  Verdict verdict = Verdict::undetermined_by_index;
};

// Krein index of the fundamental wave (any omega) or of a bifurcated wave
// profile (omega = 1); the profile must satisfy the discrete steady
// equations on its own grid (see continuation::refine_on_grid).
KreinReport krein_index_fundamental(const ModelParams& p, const Grid& g);
KreinReport krein_index_bifurcated(const ModelParams& p, const WaveProfile& w,
                                   const melnikov::MelnikovData& md, int ell);

// I^ell(mu_arg, nu_arg): adaptive quadrature of the oscillatory-decaying
// integrand; cubic at beta1 = beta1_critical(s, ell), omega = 1.
cplx i_ell_integral(double s, int ell, cplx mu_arg, cplx nu_arg);

// Closed forms (quadrature-verified signs):
//  - ell = 0, lambda0 = -i k (2 sqrt s + k), k in {-floor(sqrt s)..-1}
cplx i_ell_closed_neg_k(double s, int k);
//  - lambda0 = -i ell (2 sqrt s + ell), the k = ell instability direction
cplx i_ell_closed_pos_ell(double s, int ell);
//  - endpoint lambda0 = i omega = i for s in (0, 1)
cplx i_ell_closed_branch(double s);
//  - ell = 2, k = -2 expression that vanishes at sqrt s = 3
cplx i2_closed_km2(double s);

struct PairingConstants {
  cplx C1, C2, C3, C4, C5;
  int tau = 1;
  bool a4_1 = false, a4_2 = false;
};
// Pairings of the closed-form Jost solutions at x = 0 for the fundamental
// cubic wave at beta1 = beta1_critical(s, ell), omega = 1. C5 is evaluated
// at i*omega and is meaningful when s < omega.
PairingConstants pairing_constants(cplx lambda0, double s, int ell);

enum class SpectralCase { I, II, III, IV, V, VI };
const char* to_string(SpectralCase c);

struct CaseRecord {
  SpectralCase spectral_case;
  cplx lambda0;
  int k = 0;  // lambda0 = -i k (2 sqrt s + k) for E_B zeros; 0 otherwise
  double s = 4.0;
  int ell = 0;
  bool simple = true;
  std::vector<std::pair<int, int>> collisions;  // (k, k') per the simplicity lemma
  bool a4 = true, a5 = true, a6 = true;
  cplx I_value;       // the controlling I^ell value
  double p4_norm2 = 0.0;
  int tau = 1;
};

// Classify a zero of E(., 0) (or a branch point) for the cubic at omega = 1,
// beta1 = beta1_critical(s, ell).
CaseRecord classify_case(cplx lambda0, double s, int ell);

struct Prediction {
  enum class Outcome { vanishes, becomes_unstable_pair, stays_imaginary, endpoint_detach, undetermined };
  Outcome outcome;
  double re_coef = 0.0;  // Re lambda(eps) = re_coef * eps^2 + O(eps^3)
  cplx lambda0;
  double re_lambda = 0.0;  // evaluated at the given eps
};
const char* to_string(Prediction::Outcome o);

Prediction perturbed_eigenvalue(const CaseRecord& rec, double eps);

struct EigenvalueEntry {
  cplx lambda0;
  std::string origin;  // "E_B", "E_C", "E_A"
  SpectralCase spectral_case;
  Prediction prediction;
  std::optional<cplx> located;  // root-found zero of E(. , eps) when requested
};

struct StabilityReport {
  ModelParams params;
  int ell = 0;
  bool fundamental = true;
  KreinReport krein;
  std::vector<EigenvalueEntry> inventory;
  Verdict verdict = Verdict::undetermined_by_index;
  std::vector<std::string> notes;
};

struct StabilityOptions {
  bool locate_unstable = false;  // root-find E(., eps) near predicted pairs
  double locate_halfwidth = 0.35;
  Grid grid = Grid::symmetric(20.0, 4001);
};

// Aggregate report for the fundamental wave (eps = 0) or the bifurcated
// branch at eps > 0; omega = 1 for the bifurcated analysis.
StabilityReport stability_report(const ModelParams& p, int ell, double eps,
                                 const StabilityOptions& opt = {});

}  // namespace cnls::spectral
