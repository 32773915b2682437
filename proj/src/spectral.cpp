#include "cnls/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "cnls/banded.hpp"
#include "cnls/continuation.hpp"
#include "cnls/specfun.hpp"

namespace cnls::spectral {

namespace sf = cnls::specfun;

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
const cplx kI(0.0, 1.0);

double sech(double x) { return 1.0 / std::cosh(x); }

SturmCount count_scalar_once(const std::function<double(double)>& q, const Grid& g,
                             double boundary_tol) {
  const double h2 = g.dx() * g.dx();
  banded::SymBanded A(g.n, 2);
  for (int i = 0; i < g.n; ++i) {
    A.at(i, i) = 30.0 / (12.0 * h2) + q(g.x[i]);
    if (i >= 1) A.at(i, i - 1) = -16.0 / (12.0 * h2);
    if (i >= 2) A.at(i, i - 2) = 1.0 / (12.0 * h2);
  }
  SturmCount out;
  int below = banded::inertia(A, -boundary_tol).negative;
  int above = banded::inertia(A, boundary_tol).negative;
  out.negative = below;
  out.boundary_flag = (above != below);
  return out;
}

SturmCount count_coupled_once(
    const std::function<std::array<double, 3>(double)>& Q, const Grid& g,
    double boundary_tol) {
  const double h2 = g.dx() * g.dx();
  banded::SymBanded A(2 * g.n, 4);
  const double st0 = 30.0 / (12.0 * h2), st1 = -16.0 / (12.0 * h2),
               st2 = 1.0 / (12.0 * h2);
  for (int i = 0; i < g.n; ++i) {
    auto q = Q(g.x[i]);
    for (int c = 0; c < 2; ++c) {
      int r = 2 * i + c;
      A.at(r, r) = st0 + (c == 0 ? q[0] : q[2]);
      if (i >= 1) A.at(r, r - 2) = st1;
      if (i >= 2) A.at(r, r - 4) = st2;
    }
    A.at(2 * i + 1, 2 * i) = q[1];
  }
  SturmCount out;
  int below = banded::inertia(A, -boundary_tol).negative;
  int above = banded::inertia(A, boundary_tol).negative;
  out.negative = below;
  out.boundary_flag = (above != below);
  return out;
}

}  // namespace

SturmCount sturm_negative_count(const std::function<double(double)>& q,
                                const Grid& g, double boundary_tol) {
  SturmCount c = count_scalar_once(q, g, boundary_tol);
  Grid g2 = Grid::symmetric(g.L, 2 * (g.n - 1) + 1);
  SturmCount c2 = count_scalar_once(q, g2, boundary_tol);
  c.stable_under_refinement = (c.negative == c2.negative);
  c.boundary_flag = c.boundary_flag || c2.boundary_flag;
  return c;
}

SturmCount sturm_negative_count_coupled(
    const std::function<std::array<double, 3>(double)>& Q, const Grid& g,
    double boundary_tol) {
  SturmCount c = count_coupled_once(Q, g, boundary_tol);
  Grid g2 = Grid::symmetric(g.L, 2 * (g.n - 1) + 1);
  SturmCount c2 = count_coupled_once(Q, g2, boundary_tol);
  c.stable_under_refinement = (c.negative == c2.negative);
  c.boundary_flag = c.boundary_flag || c2.boundary_flag;
  return c;
}

std::array<double, 2> d_matrix_fundamental(double omega) {
  // ||U0||^2 = 4 sqrt(omega): diag(||U0||^2/2, -d/domega ||U0||^2)
  return {2.0 * std::sqrt(omega), -2.0 / std::sqrt(omega)};
}

DMatrix d_matrix_bifurcated(const melnikov::MelnikovData& md, double omega) {
  DMatrix D{};
  double normU0sq = 4.0 * std::sqrt(omega);
  D.m[0][0] = normU0sq / 2.0;
  D.m[0][1] = D.m[1][0] = D.m[0][2] = D.m[2][0] = 0.0;
  double dwn = 2.0 / std::sqrt(omega);  // d/domega ||U0||^2
  D.m[1][1] = -dwn + 4.0 * md.u0_dot_u2 * md.u0_dot_u2 / md.b2;
  D.m[1][2] = D.m[2][1] = 2.0 * md.u0_dot_u2 * md.v1_norm2 / md.b2;
  D.m[2][2] = md.v1_norm2 * md.v1_norm2 / md.b2;
  // inertia: D11 > 0 decouples; classify the lower-right 2x2 block
  double tr = D.m[1][1] + D.m[2][2];
  double det = D.m[1][1] * D.m[2][2] - D.m[1][2] * D.m[1][2];
  double scale = std::abs(D.m[1][1]) + std::abs(D.m[2][2]) + std::abs(D.m[1][2]);
  D.singular = std::abs(det) < 1e-10 * scale * scale;
  if (det > 0.0)
    D.n_negative = tr < 0.0 ? 2 : 0;
  else
    D.n_negative = 1;
  return D;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::orbitally_stable: return "orbitally_stable";
    case Verdict::orbitally_unstable: return "orbitally_unstable";
    case Verdict::spectrally_unstable: return "spectrally_unstable";
    case Verdict::undetermined_by_index: return "undetermined_by_index";
  }
  return "?";
}

namespace {

Verdict verdict_from_index(int K) {
  if (K == 0) return Verdict::orbitally_stable;
  if (K % 2 == 1) return Verdict::orbitally_unstable;
  return Verdict::undetermined_by_index;
}

}  // namespace

KreinReport krein_index_fundamental(const ModelParams& p, const Grid& g) {
  p.validate();
  const double rw = std::sqrt(p.omega);
  auto u0sq = [&](double x) {
    double c = sech(rw * x);
    return 2.0 * p.omega * c * c;
  };
  // L-: diag(-dxx + omega - d1F, -dxx + s - d2F) at (U0^2, 0)
  auto lm_u = sturm_negative_count(
      [&](double x) { return p.omega - u0sq(x); }, g);
  auto lm_v = sturm_negative_count(
      [&](double x) { return p.s - p.beta1 * u0sq(x); }, g);
  // L+: diag(-dxx + omega - d1F - 2 U0^2 d11F, -dxx + s - d2F)
  auto lp_u = sturm_negative_count(
      [&](double x) { return p.omega - 3.0 * u0sq(x); }, g);
  KreinReport rep;
  rep.n_L_minus = lm_u.negative + lm_v.negative;
  rep.n_L_plus = lp_u.negative + lm_v.negative;
  auto d = d_matrix_fundamental(p.omega);
  rep.n_D = (d[0] < 0) + (d[1] < 0);
  rep.K_ham = rep.n_L_minus + rep.n_L_plus - rep.n_D;
  rep.k_r = 0;  // d/domega ||U0||^2 = 2/sqrt(omega) > 0 for the cubic
  rep.boundary_flag = lm_u.boundary_flag || lm_v.boundary_flag || lp_u.boundary_flag;
  rep.verdict = verdict_from_index(rep.K_ham);
  return rep;
}

KreinReport krein_index_bifurcated(const ModelParams& p, const WaveProfile& w,
                                   const melnikov::MelnikovData& md, int ell) {
  p.validate();
  quad::CubicSpline su(w.grid.x, w.U), sv(w.grid.x, w.V);
  auto clampx = [&](double x) { return std::clamp(x, w.grid.x.front(), w.grid.x.back()); };
  auto lminus = [&](double x) {
    x = clampx(x);
    double U = su(x), V = sv(x);
    auto d = model::cubic_derivs(U * U, V * V, p);
    return std::array<double, 3>{p.omega - d.d1, 0.0, p.s - d.d2};
  };
  auto lplus = [&](double x) {
    x = clampx(x);
    double U = su(x), V = sv(x);
    auto d = model::cubic_derivs(U * U, V * V, p);
    return std::array<double, 3>{p.omega - d.d1 - 2.0 * U * U * d.d11,
                                 -2.0 * U * V * d.d12,
                                 p.s - d.d2 - 2.0 * V * V * d.d22};
  };
  auto nm = sturm_negative_count_coupled(lminus, w.grid);
  auto np = sturm_negative_count_coupled(lplus, w.grid);
  auto D = d_matrix_bifurcated(md, p.omega);
  KreinReport rep;
  rep.n_L_minus = nm.negative;
  rep.n_L_plus = np.negative;
  rep.n_D = D.n_negative;
  rep.K_ham = rep.n_L_minus + rep.n_L_plus - rep.n_D;
  rep.k_r = 0;
  rep.boundary_flag = nm.boundary_flag || np.boundary_flag;
  (void)ell;
  rep.verdict = verdict_from_index(rep.K_ham);
  return rep;
}

cplx i_ell_integral(double s, int ell, cplx mu_arg, cplx nu_arg) {
  const double rs = std::sqrt(s);
  const double L = std::max(20.0, 17.0 / std::min(1.0, rs));
  cplx a = mu_arg - rs - double(ell);
  cplx b = mu_arg + rs + double(ell) + 1.0;
  cplx c = mu_arg + 1.0;
  auto f = [&](double x) -> cplx {
    double t = std::tanh(x), S = sech(x);
    double u = 0.5 * (1.0 + t);
    cplx F = sf::hyp2f1(a, b, c, u);
    cplx env = std::exp(nu_arg * x + (mu_arg + 1.0) * std::log(S));
    double v1 = melnikov::v1_value(s, ell, x);
    cplx osc = (nu_arg - t) * (nu_arg - t) - S * S;
    return env * v1 * osc * F;
  };
  auto q = quad::integrate<cplx>(f, -L, L, 1e-10, 1e-11, 40000);
  if (!q.converged) throw std::runtime_error("i_ell_integral: quadrature failed");
  return q.value;
}

cplx i_ell_closed_neg_k(double s, int k) {
  if (k >= 0) throw std::invalid_argument("i_ell_closed_neg_k: k must be negative");
  double rs = std::sqrt(s);
  double h = 2.0 * rs + k;
  double nu2sq = -double(k) * h - 1.0;
  if (nu2sq < 0.0)
    throw std::domain_error("i_ell_closed_neg_k: lambda0 below the omega branch point");
  double nu = std::sqrt(nu2sq);
  double kr = sf::sech_fourier(h + 1.0, nu);
  double poch = sf::pochhammer(cplx(rs + k + 1.0), unsigned(-k)).real();
  if (k % 2 == 0) {
    double sign = (std::abs(k / 2) % 2 == 0) ? 1.0 : -1.0;
    double prod = 1.0;
    for (int j = 0; j <= -k / 2 - 1; ++j)
      prod *= (j + 0.5) * (j + 0.5) + nu * nu / 4.0;
    return sign * k * h / poch * prod * kr;
  }
  double sign = (std::abs((k - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
  double prod = 1.0;
  for (int j = 1; j <= -(k + 1) / 2; ++j) prod *= j * j + nu * nu / 4.0;
  return kI * nu / 2.0 * sign * double(k) * h / poch * prod * kr;
}

cplx i_ell_closed_pos_ell(double s, int ell) {
  if (ell < 1) throw std::invalid_argument("i_ell_closed_pos_ell: ell must be >= 1");
  double rs = std::sqrt(s);
  double h = 2.0 * rs + ell;
  double nu = std::sqrt(double(ell) * h - 1.0);
  double kr = sf::sech_fourier(h + 1.0, nu);
  double poch = sf::pochhammer(cplx(rs + 1.0), unsigned(ell)).real();
  if (ell % 2 == 0) {
    double sign = ((ell / 2 + 1) % 2 == 0) ? 1.0 : -1.0;
    double prod = 1.0;
    for (int j = 0; j <= ell / 2 - 1; ++j) prod *= (j + 0.5) * (j + 0.5) + nu * nu / 4.0;
    return sign * ell * h / poch * prod * kr;
  }
  // odd ell: the sign verified against the defining quadrature is
  // (-1)^{(ell-1)/2}
  double sign = (((ell - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
  double prod = 1.0;
  for (int j = 1; j <= (ell - 1) / 2; ++j) prod *= j * j + nu * nu / 4.0;
  return kI * nu / 2.0 * sign * double(ell) * h / poch * prod * kr;
}

cplx i_ell_closed_branch(double s) {
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("i_ell_closed_branch: requires 0 < s < 1");
  double rs = std::sqrt(s), nu = std::sqrt(1.0 - s);
  cplx inu = kI * nu;
  cplx num = sf::gamma(1.0 + inu) * sf::gamma((rs + 1.0 + inu) / 2.0) *
             sf::gamma((rs + 1.0 - inu) / 2.0);
  cplx den = sf::gamma(cplx(rs + 1.0)) * sf::gamma((rs + 2.0 + inu) / 2.0) *
             sf::gamma((-rs + 1.0 + inu) / 2.0);
  return -kSqrtPi * num / den;
}

cplx i2_closed_km2(double s) {
  double rs = std::sqrt(s);
  if (!(4.0 * rs - 5.0 > 0.0))
    throw std::domain_error("i2_closed_km2: requires 4 sqrt(s) > 5");
  double kr = sf::sech_fourier(2.0 * rs - 1.0, std::sqrt(4.0 * rs - 5.0));
  return -4.0 * (rs - 1.0) * (rs - 3.0) /
         (s * (rs + 2.0) * (rs + 3.0) * (2.0 * rs - 1.0)) * kr;
}

PairingConstants pairing_constants(cplx lambda0, double s, int ell) {
  ModelParams p;
  p.omega = 1.0;
  p.s = s;
  p.beta1 = model::beta1_critical(s, ell);
  auto j0 = evans::jost_closed_fundamental(0.0, lambda0, p);
  PairingConstants pc;
  pc.C1 = 2.0 * (j0.p1 * j0.dp1 + j0.q1 * j0.dq1);
  pc.C2 = 2.0 * (j0.p2 * j0.dp2 + j0.q2 * j0.dq2);
  pc.C3 = 2.0 * (j0.p2 * std::conj(j0.dp2) + j0.q2 * std::conj(j0.dq2)).real();
  pc.C4 = 2.0 * (j0.p1 * std::conj(j0.dp1) + j0.q1 * std::conj(j0.dq1)).real();
  auto jw = evans::jost_closed_fundamental(0.0, kI * p.omega, p);
  pc.C5 = 2.0 * (jw.p4 * std::conj(jw.dp4)).real();
  pc.tau = (std::abs(j0.dp4) <= std::abs(j0.p4)) ? 1 : -1;
  pc.a4_1 = std::abs(pc.C1) > 1e-12;
  pc.a4_2 = std::abs(pc.C2) > 1e-12;
  return pc;
}

const char* to_string(SpectralCase c) {
  switch (c) {
    case SpectralCase::I: return "I";
    case SpectralCase::II: return "II";
    case SpectralCase::III: return "III";
    case SpectralCase::IV: return "IV";
    case SpectralCase::V: return "V";
    case SpectralCase::VI: return "VI";
  }
  return "?";
}

CaseRecord classify_case(cplx lambda0, double s, int ell) {
  const double omega = 1.0;
  const double rs = std::sqrt(s);
  const double minfreq = std::min(omega, s);
  CaseRecord rec;
  rec.lambda0 = lambda0;
  rec.s = s;
  rec.ell = ell;

  // identify the E_B-zero index k when lambda0 = -i k (2 rs + k)
  int kfound = 1000;
  for (int k = -int(std::floor(rs)); k <= ell; ++k) {
    cplx lam = -kI * double(k) * (2.0 * rs + k);
    if (std::abs(lam - lambda0) < 1e-8) {
      kfound = k;
      break;
    }
  }
  rec.k = (kfound == 1000) ? 0 : kfound;

  double im = lambda0.imag();
  bool on_axis = std::abs(lambda0.real()) < 1e-10;
  auto near = [&](double v) { return std::abs(im - v) < 1e-9; };
  if (!on_axis) throw std::invalid_argument("classify_case: lambda0 must be imaginary");

  if (near(minfreq) || near(-minfreq)) {
    rec.spectral_case = SpectralCase::II;
  } else if (omega < s && near(s) ) {
    rec.spectral_case = SpectralCase::V;
  } else if (s < omega && (near(omega) || near(-omega))) {
    rec.spectral_case = SpectralCase::VI;
  } else if (std::abs(im) < minfreq) {
    rec.spectral_case = SpectralCase::I;
  } else if (omega < s && im > omega && im < s) {
    rec.spectral_case = SpectralCase::III;
  } else if (im < -minfreq) {
    rec.spectral_case = SpectralCase::IV;
  } else {
    // zero of E_C mirrored into the upper essential spectrum: analyze the
    // mirror -lambda0 (Case IV there) and report through the symmetry
    rec.spectral_case = SpectralCase::IV;
  }

  // simplicity per the collision arithmetic (exact rational k, k')
  if (kfound != 1000 && kfound != 0) {
    int k = kfound;
    auto collides = [&](int k1, int k2) {
      if (k1 + k2 >= 0) return false;
      double target = -double(k1 * k1 + k2 * k2) / (2.0 * (k1 + k2));
      return std::abs(rs - target) < 1e-9;
    };
    if (k <= -1) {
      int hi = std::min(-k - 1, ell);
      int lo = int(-std::floor((std::sqrt(2.0) - 1.0) * k));
      for (int k2 = lo; k2 <= hi; ++k2)
        if (collides(k, k2)) rec.collisions.push_back({k, k2});
      // collision with the E_A resonance structure at lambda0 = i
      if (std::abs(s - 1.0) < 1e-9 && k == -1) rec.collisions.push_back({k, 0});
    } else if (k >= 1) {
      int lo = int(-std::floor((std::sqrt(2.0) + 1.0) * k));
      for (int k2 = lo; k2 <= -k - 1; ++k2)
        if (collides(k, k2)) rec.collisions.push_back({k, k2});
    }
    rec.simple = rec.collisions.empty();
  }

  // nondegeneracy data
  if (kfound != 1000 && kfound != 0) {
    auto nus = evans::nu_branch(lambda0, omega, s).nu;
    auto pc = pairing_constants(lambda0, s, ell);
    if (rec.spectral_case == SpectralCase::III || rec.spectral_case == SpectralCase::V) {
      rec.a4 = pc.a4_1;
      rec.I_value = i_ell_integral(s, ell, nus[3], nus[1]);
    } else {
      rec.a4 = pc.a4_2;
      rec.I_value = i_ell_integral(s, ell, nus[3], nus[0]);
    }
    rec.a5 = std::abs(rec.I_value) > 1e-9;
    rec.tau = ((ell - kfound) % 2 == 0) ? 1 : -1;
    if (rec.spectral_case == SpectralCase::III ||
        rec.spectral_case == SpectralCase::IV) {
      // ||p4(. , lambda0)||^2 via the closed Jost form (decaying there)
      ModelParams p;
      p.omega = omega;
      p.s = s;
      p.beta1 = model::beta1_critical(s, ell);
      double Lq = std::max(20.0, 17.0 / std::min(1.0, rs));
      auto q = quad::integrate<double>(
          [&](double x) {
            auto j = evans::jost_closed_fundamental(x, lambda0, p);
            return std::norm(j.p4);
          },
          -Lq, Lq, 1e-12, 1e-12);
      rec.p4_norm2 = q.value;
    }
  } else if (rec.spectral_case == SpectralCase::VI) {
    auto nus = evans::nu_branch(kI * omega, omega, s).nu;
    rec.I_value = i_ell_integral(s, ell, nus[3], nus[1]);
    rec.a5 = std::abs(rec.I_value) > 1e-9;
    rec.a6 = true;  // holds with (p2, q2)(., i omega) for the cubic
  }
  return rec;
}

const char* to_string(Prediction::Outcome o) {
  using O = Prediction::Outcome;
  switch (o) {
    case O::vanishes: return "vanishes";
    case O::becomes_unstable_pair: return "becomes_unstable_pair";
    case O::stays_imaginary: return "stays_imaginary";
    case O::endpoint_detach: return "endpoint_detach";
    case O::undetermined: return "undetermined";
  }
  return "?";
}

Prediction perturbed_eigenvalue(const CaseRecord& rec, double eps) {
  Prediction pr;
  pr.lambda0 = rec.lambda0;
  const double rs = std::sqrt(rec.s);
  const double b1 = model::beta1_critical(rec.s, rec.ell);
  auto nus = evans::nu_branch(rec.lambda0, 1.0, rec.s).nu;
  auto pc = pairing_constants(rec.lambda0, rec.s, rec.ell);
  auto i_pm = [&](cplx nu_j, cplx I) {
    return std::pow(cplx(2.0), -nus[3] + 0.5) * b1 / ((nu_j + 1.0) * (nu_j + 1.0)) * I;
  };
  switch (rec.spectral_case) {
    case SpectralCase::I:
      pr.outcome = Prediction::Outcome::stays_imaginary;
      break;
    case SpectralCase::II:
      pr.outcome = Prediction::Outcome::endpoint_detach;
      break;
    case SpectralCase::III:
    case SpectralCase::V: {
      if (!(rec.simple && rec.a4 && rec.a5)) {
        pr.outcome = Prediction::Outcome::undetermined;
        break;
      }
      cplx Ip = i_pm(nus[1], rec.I_value);
      double num = std::norm(Ip) - (pc.C3 / pc.C2 * Ip * Ip).real();
      pr.re_coef = -num / (2.0 * rec.p4_norm2 * nus[1].imag());
      pr.outcome = Prediction::Outcome::vanishes;
      break;
    }
    case SpectralCase::IV: {
      if (!(rec.simple && rec.a4 && rec.a5)) {
        pr.outcome = Prediction::Outcome::undetermined;
        break;
      }
      cplx Im_ = i_pm(nus[0], rec.I_value);
      double num = std::norm(Im_) - (pc.C4 / pc.C1 * Im_ * Im_).real();
      pr.re_coef = -num / (2.0 * rec.p4_norm2 * nus[0].imag());
      pr.outcome = pr.re_coef > 0.0 ? Prediction::Outcome::becomes_unstable_pair
                                    : Prediction::Outcome::vanishes;
      break;
    }
    case SpectralCase::VI:
      pr.outcome = (rec.a5 && rec.a6) ? Prediction::Outcome::vanishes
                                      : Prediction::Outcome::undetermined;
      break;
  }
  pr.re_lambda = pr.re_coef * eps * eps;
  return pr;
}

StabilityReport stability_report(const ModelParams& p, int ell, double eps,
                                 const StabilityOptions& opt) {
  StabilityReport rep;
  rep.params = p;
  rep.ell = ell;
  rep.fundamental = (eps == 0.0);
  const double rs = std::sqrt(p.s);

  if (rep.fundamental) {
    rep.krein = krein_index_fundamental(p, opt.grid);
    rep.verdict = Verdict::orbitally_stable;
    rep.notes.push_back(
        "fundamental cubic wave: d/domega ||U0||^2 = 2/sqrt(omega) > 0; "
        "all closed Evans factors have purely imaginary zeros");
    if (rep.krein.K_ham != 0)
      rep.notes.push_back(
          "index inconclusive (embedded pairs with negative signature); "
          "stability by the variational theorem for the fundamental wave");
    return rep;
  }

  // bifurcated branch at beta1 = beta1_critical + mu_bar eps^2
  ModelParams pb = p;
  pb.omega = 1.0;
  pb.beta1 = model::beta1_critical(p.s, ell);
  auto md = melnikov::melnikov_data(p.s, ell, p.beta2, opt.grid);
  pb.mu = md.mu_bar * eps * eps;
  pb.beta1 += pb.mu;
  pb.epsilon = eps;
  rep.params = pb;

  auto seed = melnikov::approximate_branch(p.s, ell, p.beta2, eps, opt.grid);
  auto exact = continuation::refine_on_grid(
      seed.profile, pb, (ell % 2 == 0) ? model::Parity::even : model::Parity::odd);
  rep.krein = krein_index_bifurcated(pb, exact, md, ell);

  // inventory of unperturbed Evans zeros and their predictions
  for (int k = -int(std::floor(rs)); k <= ell; ++k) {
    if (k == 0) continue;  // zero eigenvalue
    cplx lam0 = -kI * double(k) * (2.0 * rs + k);
    EigenvalueEntry e;
    e.lambda0 = lam0;
    e.origin = "E_B";
    auto rec = classify_case(lam0, p.s, ell);
    e.spectral_case = rec.spectral_case;
    e.prediction = perturbed_eigenvalue(rec, eps);
    if (opt.locate_unstable &&
        e.prediction.outcome == Prediction::Outcome::becomes_unstable_pair) {
      auto ctx = evans::CoefficientMatrix::eps_expansion(p.s, ell, p.beta2, eps);
      double w = opt.locate_halfwidth;
      auto zs = evans::locate_zeros(ctx, 1e-5, std::max(4.0 * e.prediction.re_lambda, 0.05),
                                    lam0.imag() - w, lam0.imag() + w);
      if (!zs.empty()) e.located = zs.front().lambda;
    }
    rep.inventory.push_back(std::move(e));
  }
  // endpoint resonance poles of E_A at +-i omega
  for (double sgn : {1.0, -1.0}) {
    EigenvalueEntry e;
    e.lambda0 = kI * sgn;
    e.origin = "E_A";
    CaseRecord rec;
    rec.lambda0 = e.lambda0;
    rec.s = p.s;
    rec.ell = ell;
    rec.spectral_case =
        (std::min(1.0, p.s) == 1.0) ? SpectralCase::II : SpectralCase::VI;
    e.spectral_case = rec.spectral_case;
    e.prediction = perturbed_eigenvalue(rec, eps);
    rep.inventory.push_back(std::move(e));
  }

  bool unstable = false;
  for (auto& e : rep.inventory)
    if (e.prediction.outcome == Prediction::Outcome::becomes_unstable_pair)
      unstable = true;
  if (unstable)
    rep.verdict = Verdict::spectrally_unstable;
  else if (rep.krein.K_ham == 0)
    rep.verdict = Verdict::orbitally_stable;
  else if (rep.krein.K_ham % 2 == 1)
    rep.verdict = Verdict::orbitally_unstable;
  else
    rep.verdict = Verdict::undetermined_by_index;
  return rep;
}

}  // namespace cnls::spectral
