#include "cnls/melnikov.hpp"

#include <array>
#include <cmath>

#include "cnls/specfun.hpp"

namespace cnls::melnikov {

namespace sf = cnls::specfun;
using cplx = std::complex<double>;

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

double sech(double x) { return 1.0 / std::cosh(x); }

// integration half-length adequate for sech^{2 sqrt(s)}-type decay
double quad_half_length(double s) {
  return std::max(20.0, 17.0 / std::min(1.0, std::sqrt(s)));
}

// coefficients C_j of V1^2 = sech^{2 sqrt s} sum_j C_j sech^{2j}
std::vector<double> v1sq_coeffs(double s, int ell) {
  double rs = std::sqrt(s);
  std::vector<double> c(ell + 1);
  for (int j = 0; j <= ell; ++j) {
    double binom = 1.0;
    for (int m = 0; m < j; ++m) binom = binom * double(ell - m) / double(m + 1);
    double num = sf::pochhammer(cplx(2 * rs + ell + 1), j).real() *
                 sf::pochhammer(cplx(rs + 0.5), j).real();
    double den = sf::pochhammer(cplx(2 * rs + 1), j).real() *
                 sf::pochhammer(cplx(rs + 1), j).real();
    c[j] = ((j % 2) ? -1.0 : 1.0) * binom * num / den;
  }
  return c;
}

}  // namespace

double v1_value(double s, int ell, double x) {
  if (!(s > 0.0)) throw std::invalid_argument("v1_value: s must be positive");
  if (ell < 0) throw std::invalid_argument("v1_value: ell must be >= 0");
  double rs = std::sqrt(s);
  double S = sech(x);
  double z = S * S;
  if (ell % 2 == 0) {
    int lp = ell / 2;
    cplx f = sf::hyp2f1(cplx(-lp), cplx(rs + lp + 0.5), cplx(rs + 1.0), z);
    return std::pow(S, rs) * f.real();
  }
  int lp = (ell - 1) / 2;
  cplx f = sf::hyp2f1(cplx(-lp), cplx(rs + lp + 1.5), cplx(rs + 1.0), z);
  return std::pow(S, rs) * std::tanh(x) * f.real();
}

std::vector<double> v1_profile(double s, int ell, const Grid& g) {
  std::vector<double> v(g.n);
  for (int i = 0; i < g.n; ++i) v[i] = v1_value(s, ell, g.x[i]);
  return v;
}

double phi11_value(double omega, double x) {
  double y = std::sqrt(omega) * x;
  return 0.5 * sech(y) * (3.0 - std::cosh(y) * std::cosh(y) - 3.0 * y * std::tanh(y));
}

double phi12_value(double omega, double x) {
  double y = std::sqrt(omega) * x;
  return sech(y) * std::tanh(y) / std::sqrt(omega);
}

std::pair<std::vector<double>, std::vector<double>> phi_fundamental(
    const ModelParams& p, const Grid& g) {
  std::vector<double> a(g.n), b(g.n);
  for (int i = 0; i < g.n; ++i) {
    a[i] = phi11_value(p.omega, g.x[i]);
    b[i] = phi12_value(p.omega, g.x[i]);
  }
  return {std::move(a), std::move(b)};
}

double phi11_by_quadrature(const ModelParams& p, double x) {
  const double om = p.omega;
  const double zeta0 = std::sqrt(2.0 * om);
  const double u0pp0 = (om - 2.0 * om) * zeta0;  // (omega - d1F(zeta0^2,0)) zeta0
  if (u0pp0 >= 0.0)
    throw std::domain_error("phi11_by_quadrature: U0''(0) must be negative");
  double ax = std::abs(x);
  if (ax < 1e-2) {
    // Taylor from phi'' = (omega - 3 U0^2) phi, phi(0)=1, phi'(0)=0
    double c2 = -2.5 * om;
    double c4 = 37.0 * om * om / 24.0;
    double c6 = -641.0 * om * om * om / 720.0;
    double x2 = x * x;
    return 1.0 + x2 * (c2 + x2 * (c4 + x2 * c6));
  }
  auto u0p = [&](double y) {
    double ry = std::sqrt(om) * y;
    return -zeta0 * std::sqrt(om) * sech(ry) * std::tanh(ry);
  };
  auto u0pp = [&](double y) {
    double ry = std::sqrt(om) * y;
    double S = sech(ry);
    return zeta0 * om * (S - 2.0 * S * S * S);
  };
  const double x0 = 1.0;
  auto inv_sq = [&](double y) { return 1.0 / (u0p(y) * u0p(y)); };
  auto reg = [&](double y) {
    if (std::abs(y) < 1e-6) {
      // limit (U0''(y) - U0''(0)) / U0'(y)^2 as y -> 0
      double u4 = zeta0 * om * om * 5.0;  // U0''''(0) = 5 omega^2 zeta0
      return 0.5 * u4 / (u0pp0 * u0pp0);
    }
    return (u0pp(y) - u0pp0) / (u0p(y) * u0p(y));
  };
  auto q1 = quad::integrate<double>(inv_sq, x0, ax, 1e-13, 1e-13);
  auto q2 = quad::integrate<double>(reg, 0.0, x0, 1e-13, 1e-13);
  double value = u0p(ax) * (-u0pp0 * q1.value + 1.0 / u0p(x0) + q2.value);
  return value;  // even extension: value depends on |x| only
}

std::vector<double> u2_profile(double s, int ell, const Grid& g) {
  const double b1 = model::beta1_critical(s, ell);
  const double rs = std::sqrt(s);
  const double sqrt2 = std::sqrt(2.0);
  auto coeffs = v1sq_coeffs(s, ell);
  // inner tail integral in closed form:
  //   Int_x^inf phi12 V1^2 sech dy = sum_j C_j sech^{2(rs+j+1)}x / (2(rs+j+1))
  auto tail = [&](double x) {
    double S = sech(x), acc = 0.0;
    double base = std::pow(S, 2.0 * rs + 2.0);
    double S2 = S * S;
    double pw = base;
    for (int j = 0; j <= ell; ++j) {
      acc += coeffs[j] * pw / (2.0 * (rs + j + 1.0));
      pw *= S2;
    }
    return acc;
  };
  auto gsrc = [&](double y) {
    double v1 = v1_value(s, ell, y);
    return b1 * sqrt2 * sech(y) * v1 * v1;
  };
  // cumulative Int_0^x phi11 g dy on the grid (odd in x)
  std::vector<double> cum(g.n, 0.0);
  const int mid = g.mid();
  for (int i = mid; i + 1 < g.n; ++i) {
    auto q = quad::integrate<double>(
        [&](double y) { return phi11_value(1.0, y) * gsrc(y); }, g.x[i], g.x[i + 1],
        1e-13, 1e-13);
    cum[i + 1] = cum[i] + q.value;
  }
  for (int i = 0; i < mid; ++i) cum[i] = -cum[2 * mid - i];
  std::vector<double> u2(g.n);
  for (int i = 0; i < g.n; ++i) {
    double x = g.x[i];
    u2[i] = -phi11_value(1.0, x) * b1 * sqrt2 * tail(x) -
            phi12_value(1.0, x) * cum[i];
  }
  return u2;
}

double melnikov_a2_quadrature(double s, int ell) {
  double L = quad_half_length(s);
  auto f = [&](double x) {
    double v1 = v1_value(s, ell, x);
    double S = sech(x);
    return v1 * v1 * S * S;
  };
  auto q = quad::integrate<double>(f, -L, L, 1e-11, 1e-12);
  if (!q.converged) throw std::runtime_error("melnikov_a2_quadrature: quadrature failed");
  return -2.0 * q.value;
}

double melnikov_a2_closed(double s, int ell) {
  double rs = std::sqrt(s);
  double fact = 1.0;
  for (int m = 2; m <= ell; ++m) fact *= m;
  double pref = kSqrtPi * sf::gamma(cplx(rs)).real() / sf::gamma(cplx(rs + 0.5)).real();
  double poch = sf::pochhammer(cplx(2.0 * rs + 1.0), ell).real();
  return -pref * 2.0 * fact * rs / ((rs + ell + 0.5) * poch);
}

double melnikov_b2_quadrature(double s, int ell, double beta2) {
  const double b1 = model::beta1_critical(s, ell);
  const double L = quad_half_length(s);
  // cumulative profile of the inner integral on a fine grid, then splined
  const int n = 8001;
  Grid g = Grid::symmetric(L, n);
  std::vector<double> R(n, 0.0);
  auto inner = [&](double y) {
    double v1 = v1_value(s, ell, y);
    return phi12_value(1.0, y) * v1 * v1 * sech(y);
  };
  for (int i = n - 1; i-- > 0;) {
    auto q = quad::integrate<double>(inner, g.x[i], g.x[i + 1], 1e-14, 1e-14);
    R[i] = R[i + 1] + q.value;
  }
  quad::CubicSpline Rs(g.x, R);
  auto outer = [&](double x) {
    double v1 = v1_value(s, ell, x);
    return phi11_value(1.0, x) * v1 * v1 * sech(x) * Rs(x);
  };
  auto q1 = quad::integrate<double>(outer, -L, L, 1e-11, 1e-12);
  auto q2 = quad::integrate<double>(
      [&](double x) {
        double v1 = v1_value(s, ell, x);
        return v1 * v1 * v1 * v1;
      },
      -L, L, 1e-11, 1e-12);
  if (!q1.converged || !q2.converged)
    throw std::runtime_error("melnikov_b2_quadrature: quadrature failed");
  return 8.0 * b1 * b1 * q1.value - beta2 * q2.value;
}

double melnikov_b2_double_sum(double s, int ell, double beta2) {
  // the alternating C_{j1} C_{j2} products cancel heavily for larger ell;
  // accumulate in extended precision
  long double rs = std::sqrt((long double)s);
  std::vector<long double> c(ell + 1);
  for (int j = 0; j <= ell; ++j) {
    long double binom = 1.0L, num = 1.0L, den = 1.0L;
    for (int m = 0; m < j; ++m) {
      binom = binom * (ell - m) / (m + 1);
      num *= (2 * rs + ell + 1 + m) * (rs + 0.5L + m);
      den *= (2 * rs + 1 + m) * (rs + 1 + m);
    }
    c[j] = ((j % 2) ? -1.0L : 1.0L) * binom * num / den;
  }
  double pref = kSqrtPi * sf::gamma(cplx(2.0 * double(rs))).real() /
                sf::gamma(cplx(2.0 * double(rs) + 0.5)).real();
  long double tot = 0.0L;
  long double sl = (rs + ell) * (rs + ell) * (rs + ell + 1) * (rs + ell + 1);
  for (int j1 = 0; j1 <= ell; ++j1) {
    for (int j2 = 0; j2 <= ell; ++j2) {
      long double ratio = 1.0L;
      for (int m = 0; m < j1 + j2; ++m)
        ratio *= (2 * rs + m) / (2 * rs + 0.5L + m);
      long double kernel =
          sl * (2 * rs + j1 + j2) / ((rs + j1 + 1) * (2 * rs + j1 + j2 + 2)) -
          (long double)beta2;
      tot += c[j1] * c[j2] * ratio * kernel;
    }
  }
  return pref * double(tot);
}

namespace {

double poly_eval(const std::vector<double>& coef, double x) {
  // coef in decreasing degree
  double acc = 0.0;
  for (double c : coef) acc = acc * x + c;
  return acc;
}

// Q1, Q2 tables for ell = 0..4 (coefficients in decreasing degree)
const std::vector<double> kQ1[5] = {
    {1.0, 0.0, 0.0, 0.0},                                     // x^3
    {7.0, 0.0, -4.0, 0.0},                                    // x(7x^2-4)
    {145.0, 571.0, 487.0, -663.0, -1260.0, -540.0, 0.0},      // x(...)
    {27.0 * 229, 27.0 * 1343, 27.0 * 1655, -27.0 * 3271, -27.0 * 8336,
     -27.0 * 4560, 0.0},
    {27.0 * 16627, 27.0 * 245867, 27.0 * 1380611, 27.0 * 3183693,
     -27.0 * 660138, -27.0 * 19430100, -27.0 * 41883400, -27.0 * 38216000,
     -27.0 * 13040000, 0.0}};
const std::vector<double> kQ2[5] = {
    {1.0},
    {3.0},
    {41.0, 167.0, 227.0, 105.0},
    {27.0 * 49, 27.0 * 303, 27.0 * 603, 27.0 * 385},
    {81.0 * 961, 81.0 * 14721, 81.0 * 92393, 81.0 * 303879, 81.0 * 551546,
     81.0 * 522180, 81.0 * 200200}};

double q3_poly(double x, int ell) {
  double acc = 1.0;
  for (int j = 1; j <= ell / 2; ++j) acc *= (x + j) * (x + j) * (x + j);
  for (int k = 1; k <= 2 * ell; ++k) acc *= 4.0 * x + 2.0 * k - 1.0;
  return acc;
}

}  // namespace

double melnikov_b2_polynomial(double s, int ell, double beta2) {
  if (ell < 0 || ell > 4)
    throw std::invalid_argument("melnikov_b2_polynomial: tabulated only for ell <= 4");
  double x = std::sqrt(s);
  double pref = kSqrtPi * sf::gamma(cplx(2.0 * x)).real() /
                sf::gamma(cplx(2.0 * x + 0.5)).real();
  return pref * (poly_eval(kQ1[ell], x) - poly_eval(kQ2[ell], x) * beta2) /
         q3_poly(x, ell);
}

double beta2_threshold_polynomial(double s, int ell) {
  if (ell < 0 || ell > 4)
    throw std::invalid_argument("beta2_threshold_polynomial: tabulated only for ell <= 4");
  double x = std::sqrt(s);
  return poly_eval(kQ1[ell], x) / poly_eval(kQ2[ell], x);
}

BifurcationVerdict classify_bifurcation(double s, int ell, double beta2) {
  BifurcationVerdict v;
  v.beta1_star = model::beta1_critical(s, ell);
  v.ell = ell;
  v.a2 = melnikov_a2_closed(s, ell);
  v.b2 = melnikov_b2_double_sum(s, ell, beta2);
  // degeneracy scale: magnitude of the evaluator's term sum
  double rs = std::sqrt(s);
  auto c = v1sq_coeffs(s, ell);
  double scale = 0.0;
  double sl = (rs + ell) * (rs + ell) * (rs + ell + 1.0) * (rs + ell + 1.0);
  for (int j1 = 0; j1 <= ell; ++j1)
    for (int j2 = 0; j2 <= ell; ++j2)
      scale += std::abs(c[j1] * c[j2]) * (sl + std::abs(beta2));
  scale *= kSqrtPi * sf::gamma(cplx(2.0 * rs)).real() /
           sf::gamma(cplx(2.0 * rs + 0.5)).real();
  if (std::abs(v.b2) < 1e-10 * scale) {
    v.kind = BifurcationKind::degenerate;
  } else {
    v.kind = (v.a2 * v.b2 < 0.0) ? BifurcationKind::supercritical
                                 : BifurcationKind::subcritical;
  }
  return v;
}

BranchPoint approximate_branch(double s, int ell, double beta2, double eps,
                               const Grid& g) {
  double a2 = melnikov_a2_closed(s, ell);
  double b2 = melnikov_b2_double_sum(s, ell, beta2);
  BranchPoint bp;
  bp.mu = -(b2 / a2) * eps * eps;
  bp.beta1 = model::beta1_critical(s, ell) + bp.mu;
  WaveProfile w;
  w.grid = g;
  w.U.resize(g.n);
  w.V.resize(g.n);
  auto u2 = u2_profile(s, ell, g);
  for (int i = 0; i < g.n; ++i) {
    w.U[i] = std::sqrt(2.0) * sech(g.x[i]) + eps * eps * u2[i];
    w.V[i] = eps * v1_value(s, ell, g.x[i]);
  }
  w.decay_u = 1.0;
  w.decay_v = std::sqrt(s);
  w.v_parity = (ell % 2 == 0) ? model::Parity::even : model::Parity::odd;
  bp.profile = std::move(w);
  return bp;
}

MelnikovData melnikov_data(double s, int ell, double beta2, const Grid& g) {
  MelnikovData d;
  d.V1 = v1_profile(s, ell, g);
  auto phis = phi_fundamental(ModelParams{1.0, s, 0, 0, 0, 0}, g);
  d.phi11 = std::move(phis.first);
  d.phi12 = std::move(phis.second);
  d.U2 = u2_profile(s, ell, g);
  d.a2 = melnikov_a2_closed(s, ell);
  d.b2 = melnikov_b2_double_sum(s, ell, beta2);
  d.mu_bar = -d.b2 / d.a2;
  d.v1_norm2 = model::inner_product(d.V1, d.V1, g);
  std::vector<double> u0(g.n);
  for (int i = 0; i < g.n; ++i) u0[i] = std::sqrt(2.0) * sech(g.x[i]);
  d.u0_dot_u2 = model::inner_product(u0, d.U2, g);
  return d;
}

const char* to_string(BifurcationKind k) {
  switch (k) {
    case BifurcationKind::supercritical: return "supercritical";
    case BifurcationKind::subcritical: return "subcritical";
    case BifurcationKind::degenerate: return "degenerate";
  }
  return "?";
}

}  // namespace cnls::melnikov
