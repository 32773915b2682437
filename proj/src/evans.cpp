#include "cnls/evans.hpp"

#include <algorithm>
#include <cmath>

#include "cnls/melnikov.hpp"
#include "cnls/specfun.hpp"

namespace cnls::evans {

namespace sf = cnls::specfun;

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kEipQuarter = std::polar(1.0, kPi / 4.0);  // e^{i pi/4}

double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace

NuSet nu_branch(cplx lambda, double omega, double s) {
  NuSet n;
  const cplx i(0.0, 1.0);
  n.nu[0] = std::conj(kEipQuarter) * std::sqrt(lambda + i * omega);
  n.nu[1] = kEipQuarter * std::sqrt(lambda - i * omega);
  n.nu[2] = std::conj(kEipQuarter) * std::sqrt(lambda + i * s);
  n.nu[3] = kEipQuarter * std::sqrt(lambda - i * s);
  return n;
}

SpectralPoint spectral_point(cplx lambda, const ModelParams& p) {
  SpectralPoint sp;
  sp.lambda = lambda;
  sp.nu = nu_branch(lambda, p.omega, p.s).nu;
  double minfreq = std::min(p.omega, p.s);
  sp.in_omega = lambda.real() > 0.0 || std::abs(lambda.imag()) < minfreq;
  double kappa = std::min(std::sqrt(p.omega), std::sqrt(p.s));
  double minre = 1e300;
  for (auto& nu : sp.nu) minre = std::min(minre, nu.real());
  sp.in_omega_e = minre > -0.5 * kappa;
  sp.in_essential =
      std::abs(lambda.real()) < 1e-12 && std::abs(lambda.imag()) >= minfreq - 1e-12;
  double bd = 1e300;
  for (double b : {p.omega, -p.omega, p.s, -p.s})
    bd = std::min(bd, std::abs(lambda - cplx(0.0, b)));
  sp.branch_distance = bd;
  return sp;
}

// ---------------------------------------------------------------------------
// coefficient matrices

CoefficientMatrix CoefficientMatrix::fundamental(const ModelParams& p,
                                                 double half_length) {
  p.validate();
  CoefficientMatrix m;
  m.mode_ = Mode::fundamental;
  m.params_ = p;
  m.L_ = half_length > 0.0 ? half_length : model::default_half_length(p);
  return m;
}

CoefficientMatrix CoefficientMatrix::from_profile(const WaveProfile& w,
                                                  const ModelParams& p) {
  p.validate();
  CoefficientMatrix m;
  m.mode_ = Mode::profile;
  m.params_ = p;
  m.L_ = w.grid.L;
  m.uspline_ = std::make_shared<quad::CubicSpline>(w.grid.x, w.U);
  m.vspline_ = std::make_shared<quad::CubicSpline>(w.grid.x, w.V);
  return m;
}

CoefficientMatrix CoefficientMatrix::eps_expansion(double s, int ell, double beta2,
                                                   double eps, double half_length) {
  CoefficientMatrix m;
  m.mode_ = Mode::expansion;
  m.ell_ = ell;
  m.eps_ = eps;
  m.beta1_star_ = model::beta1_critical(s, ell);
  double a2 = melnikov::melnikov_a2_closed(s, ell);
  double b2 = melnikov::melnikov_b2_double_sum(s, ell, beta2);
  m.mu_bar_ = -b2 / a2;
  ModelParams p;
  p.omega = 1.0;
  p.s = s;
  p.beta1 = m.beta1_star_ + m.mu_bar_ * eps * eps;
  p.beta2 = beta2;
  p.mu = m.mu_bar_ * eps * eps;
  p.epsilon = eps;
  m.params_ = p;
  m.L_ = half_length > 0.0 ? half_length : model::default_half_length(p);
  model::Grid g = model::Grid::symmetric(m.L_, 4001);
  auto u2 = melnikov::u2_profile(s, ell, g);
  m.u2spline_ = std::make_shared<quad::CubicSpline>(g.x, u2);
  return m;
}

void CoefficientMatrix::potentials(double x, double B[4][4]) const {
  const ModelParams& p = params_;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) B[i][j] = 0.0;
  auto fill_exact = [&](double U, double V, double beta1) {
    ModelParams q = p;
    q.beta1 = beta1;
    auto d = model::cubic_derivs(U * U, V * V, q);
    double b11s = d.d11 * U * U;   // goes with I + sigma1
    double b12s = d.d12 * U * V;
    double b22s = d.d22 * V * V;
    B[0][0] = b11s + d.d1;
    B[0][1] = b11s;
    B[1][0] = b11s;
    B[1][1] = b11s + d.d1;
    B[2][2] = b22s + d.d2;
    B[2][3] = b22s;
    B[3][2] = b22s;
    B[3][3] = b22s + d.d2;
    for (int r = 0; r < 2; ++r)
      for (int c = 2; c < 4; ++c) {
        B[r][c] = b12s;
        B[c][r] = b12s;
      }
  };
  switch (mode_) {
    case Mode::fundamental: {
      double U = std::sqrt(2.0 * p.omega) * sech(std::sqrt(p.omega) * x);
      fill_exact(U, 0.0, p.beta1);
      break;
    }
    case Mode::profile: {
      double xc = std::clamp(x, uspline_->x_min(), uspline_->x_max());
      fill_exact((*uspline_)(xc), (*vspline_)(xc), p.beta1);
      break;
    }
    case Mode::expansion: {
      double U0 = std::sqrt(2.0) * sech(x);
      fill_exact(U0, 0.0, beta1_star_);
      double v1 = melnikov::v1_value(p.s, ell_, x);
      double u2 = (*u2spline_)(std::clamp(x, u2spline_->x_min(), u2spline_->x_max()));
      double a = beta1_star_ * U0 * v1;  // d12 F * U0 * V1
      double e = eps_, e2 = eps_ * eps_;
      // order eps: off-diagonal a(x) (I + sigma1)
      for (int r = 0; r < 2; ++r)
        for (int c = 2; c < 4; ++c) {
          B[r][c] += e * a;
          B[c][r] += e * a;
        }
      // order eps^2: A21 on the (u, ubar) block, A22 on the (v, vbar) block
      double a21_s = 2.0 * U0 * u2;                    // with 2I + sigma1
      double a21_i = beta1_star_ * v1 * v1;            // with I
      double a22_s = p.beta2 * v1 * v1;                // with 2I + sigma1
      double a22_i = 2.0 * beta1_star_ * U0 * u2 + mu_bar_ * U0 * U0;
      B[0][0] += e2 * (2.0 * a21_s + a21_i);
      B[1][1] += e2 * (2.0 * a21_s + a21_i);
      B[0][1] += e2 * a21_s;
      B[1][0] += e2 * a21_s;
      B[2][2] += e2 * (2.0 * a22_s + a22_i);
      B[3][3] += e2 * (2.0 * a22_s + a22_i);
      B[2][3] += e2 * a22_s;
      B[3][2] += e2 * a22_s;
      break;
    }
  }
}

void CoefficientMatrix::assemble(double x, cplx lambda, Mat8& A) const {
  double B[4][4];
  potentials(x, B);
  const ModelParams& p = params_;
  const cplx i(0.0, 1.0);
  const double freq[4] = {p.omega, p.omega, p.s, p.s};
  const double sig3[4] = {1.0, -1.0, 1.0, -1.0};
  for (auto& row : A) row.fill(cplx(0.0));
  for (int r = 0; r < 4; ++r) {
    A[r][r + 4] = 1.0;
    for (int c = 0; c < 4; ++c) A[r + 4][c] = -B[r][c];
    A[r + 4][r] += freq[r] - i * lambda * sig3[r];
  }
}

// ---------------------------------------------------------------------------
// bundle integration

namespace {

struct Bundle {
  // 8x4 column bundle, column-major
  std::array<cplx, 32> y;
  cplx& at(int r, int c) { return y[c * 8 + r]; }
  cplx at(int r, int c) const { return y[c * 8 + r]; }
};

// dY = A(x) Y exploiting A = [[0, I], [M, 0]]
struct Rhs {
  const CoefficientMatrix* ctx;
  cplx lambda;
  void operator()(double x, const Bundle& y, Bundle& dy) const {
    double B[4][4];
    ctx->potentials(x, B);
    const ModelParams& p = ctx->params();
    const cplx i(0.0, 1.0);
    const double freq[4] = {p.omega, p.omega, p.s, p.s};
    const double sig3[4] = {1.0, -1.0, 1.0, -1.0};
    cplx diag[4];
    for (int r = 0; r < 4; ++r) diag[r] = freq[r] - i * lambda * sig3[r];
    for (int c = 0; c < 4; ++c) {
      for (int r = 0; r < 4; ++r) dy.at(r, c) = y.at(r + 4, c);
      for (int r = 0; r < 4; ++r) {
        cplx acc = diag[r] * y.at(r, c);
        for (int m = 0; m < 4; ++m)
          if (B[r][m] != 0.0) acc -= B[r][m] * y.at(m, c);
        dy.at(r + 4, c) = acc;
      }
    }
  }
};

// Dormand-Prince 5(4) on the bundle; h may be negative.
class Dopri5 {
 public:
  Dopri5(Rhs f, double rtol, double atol) : f_(f), rtol_(rtol), atol_(atol) {}

  // advance from x to xend (monotone), renormalizing is caller's business
  void integrate(Bundle& y, double& x, double xend) {
    double dir = xend > x ? 1.0 : -1.0;
    double h = dir * std::min(0.05, std::abs(xend - x));
    Bundle k1, k2, k3, k4, k5, k6, k7, yt, y5, y4;
    f_(x, y, k1);
    while (dir * (xend - x) > 1e-14) {
      if (dir * (x + h - xend) > 0.0) h = xend - x;
      auto stage = [&](Bundle& out, std::initializer_list<std::pair<const Bundle*, double>> terms) {
        out = y;
        for (auto& [k, w] : terms)
          for (int ii = 0; ii < 32; ++ii) out.y[ii] += h * w * k->y[ii];
      };
      stage(yt, {{&k1, 1.0 / 5}});
      f_(x + h / 5, yt, k2);
      stage(yt, {{&k1, 3.0 / 40}, {&k2, 9.0 / 40}});
      f_(x + 3 * h / 10, yt, k3);
      stage(yt, {{&k1, 44.0 / 45}, {&k2, -56.0 / 15}, {&k3, 32.0 / 9}});
      f_(x + 4 * h / 5, yt, k4);
      stage(yt, {{&k1, 19372.0 / 6561}, {&k2, -25360.0 / 2187}, {&k3, 64448.0 / 6561}, {&k4, -212.0 / 729}});
      f_(x + 8 * h / 9, yt, k5);
      stage(yt, {{&k1, 9017.0 / 3168}, {&k2, -355.0 / 33}, {&k3, 46732.0 / 5247}, {&k4, 49.0 / 176}, {&k5, -5103.0 / 18656}});
      f_(x + h, yt, k6);
      stage(y5, {{&k1, 35.0 / 384}, {&k3, 500.0 / 1113}, {&k4, 125.0 / 192}, {&k5, -2187.0 / 6784}, {&k6, 11.0 / 84}});
      f_(x + h, y5, k7);
      // embedded 4th order
      stage(y4, {{&k1, 5179.0 / 57600}, {&k3, 7571.0 / 16695}, {&k4, 393.0 / 640}, {&k5, -92097.0 / 339200}, {&k6, 187.0 / 2100}, {&k7, 1.0 / 40}});
      double err = 0.0;
      for (int ii = 0; ii < 32; ++ii) {
        double sc = atol_ + rtol_ * std::max(std::abs(y.y[ii]), std::abs(y5.y[ii]));
        err = std::max(err, std::abs(y5.y[ii] - y4.y[ii]) / sc);
      }
      if (err <= 1.0) {
        x += h;
        y = y5;
        k1 = k7;  // FSAL
      } else {
        f_(x, y, k1);
      }
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      fac = std::clamp(fac, 0.2, 5.0);
      h *= fac;
      if (std::abs(h) < 1e-12)
        throw std::runtime_error("evans: step underflow in Jost integration");
    }
  }

 private:
  Rhs f_;
  double rtol_, atol_;
};

// Modified Gram-Schmidt; returns log prod r_jj (real, r_jj > 0).
double qr_renormalize(Bundle& b) {
  double logdet = 0.0;
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < j; ++k) {
      cplx r = 0.0;
      for (int i = 0; i < 8; ++i) r += std::conj(b.at(i, k)) * b.at(i, j);
      for (int i = 0; i < 8; ++i) b.at(i, j) -= r * b.at(i, k);
    }
    double nrm = 0.0;
    for (int i = 0; i < 8; ++i) nrm += std::norm(b.at(i, j));
    nrm = std::sqrt(nrm);
    if (nrm < 1e-300) throw std::runtime_error("evans: degenerate Jost bundle");
    for (int i = 0; i < 8; ++i) b.at(i, j) /= nrm;
    logdet += std::log(nrm);
  }
  return logdet;
}

struct Checkpoint {
  double x;
  Bundle q;
  double log_scale;
};

// integrate a bundle with renormalization, snapshotting at the requested
// abscissae (must be monotone along the direction of travel)
std::vector<Checkpoint> run_bundle(const CoefficientMatrix& ctx, cplx lambda,
                                   const std::array<cplx, 4>& exponents,
                                   bool from_left,
                                   const std::vector<double>& stops,
                                   const EvansOptions& opt) {
  const double L = ctx.half_length();
  double x = from_left ? -L : L;
  Bundle b;
  b.y.fill(cplx(0.0));
  double sgn = from_left ? 1.0 : -1.0;
  for (int j = 0; j < 4; ++j) {
    b.at(j, j) = 1.0;
    b.at(j + 4, j) = sgn * exponents[j];
  }
  Dopri5 solver(Rhs{&ctx, lambda}, opt.rtol, opt.atol);
  double acc = qr_renormalize(b);
  std::vector<Checkpoint> out;
  double renorm = opt.renorm_interval;
  for (double stop : stops) {
    double target = stop;
    while (std::abs(target - x) > 1e-13) {
      double hop = std::min(renorm, std::abs(target - x));
      double next = x + (target > x ? hop : -hop);
      solver.integrate(b, x, next);
      acc += qr_renormalize(b);
    }
    out.push_back({x, b, acc});
  }
  return out;
}

// log of det of the assembled 8x8 [minus | plus] by complex LU
cplx logdet8(const Bundle& minus, const Bundle& plus) {
  std::array<std::array<cplx, 8>, 8> m;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 4; ++c) {
      m[r][c] = minus.at(r, c);
      m[r][c + 4] = plus.at(r, c);
    }
  cplx logdet = 0.0;
  double signflip = 1.0;
  for (int k = 0; k < 8; ++k) {
    int piv = k;
    for (int r = k + 1; r < 8; ++r)
      if (std::abs(m[r][k]) > std::abs(m[piv][k])) piv = r;
    if (piv != k) {
      std::swap(m[piv], m[k]);
      signflip = -signflip;
    }
    cplx pivot = m[k][k];
    if (std::abs(pivot) < 1e-300) return cplx(-690.0, 0.0);  // numerically zero
    logdet += std::log(pivot);
    for (int r = k + 1; r < 8; ++r) {
      cplx f = m[r][k] / pivot;
      for (int c = k; c < 8; ++c) m[r][c] -= f * m[k][c];
    }
  }
  if (signflip < 0) logdet += cplx(0.0, kPi);
  return logdet;
}

EvansValue evans_eval_nu(const CoefficientMatrix& ctx, cplx lambda,
                         const std::array<cplx, 4>& nu, const EvansOptions& opt) {
  const double L = ctx.half_length();
  std::vector<double> stops_minus, stops_plus;
  if (opt.x_independence) {
    stops_minus = {-L / 4.0, 0.0, L / 4.0};
    stops_plus = {L / 4.0, 0.0, -L / 4.0};
  } else {
    stops_minus = {0.0};
    stops_plus = {0.0};
  }
  auto minus = run_bundle(ctx, lambda, nu, true, stops_minus, opt);
  auto plus = run_bundle(ctx, lambda, nu, false, stops_plus, opt);
  cplx numass = 0.0;
  for (const auto& n : nu) numass += n;
  cplx norm = -2.0 * L * numass;

  auto log_at = [&](const Checkpoint& cm, const Checkpoint& cp) {
    return logdet8(cm.q, cp.q) + cm.log_scale + cp.log_scale + norm;
  };
  EvansValue ev;
  // the x = 0 pair is the last minus/plus pair with matching abscissa
  int i0 = opt.x_independence ? 1 : 0;
  ev.log_value = log_at(minus[i0], plus[i0]);
  ev.value = std::exp(ev.log_value);
  if (opt.x_independence) {
    double rel = 0.0;
    for (int k : {0, 2}) {
      const Checkpoint& cm = minus[k];
      // plus stops run in reverse spatial order
      const Checkpoint& cp = plus[2 - k];
      cplx diff = std::exp(log_at(cm, cp) - ev.log_value) - 1.0;
      rel = std::max(rel, std::abs(diff));
    }
    ev.x_independence_rel = rel;
  }
  return ev;
}

}  // namespace

EvansValue evans_eval(const CoefficientMatrix& ctx, cplx lambda,
                      const EvansOptions& opt) {
  auto nu = nu_branch(lambda, ctx.params().omega, ctx.params().s);
  EvansValue ev = evans_eval_nu(ctx, lambda, nu.nu, opt);
  if (opt.x_independence && ev.x_independence_rel > 1e-6)
    throw std::runtime_error("evans_eval: x-independence check failed");
  return ev;
}

cplx chi_exponent(double beta1) {
  return (-1.0 + std::sqrt(cplx(1.0 + 8.0 * beta1))) / 2.0;
}

namespace {
cplx b_factor(cplx nu, cplx chi) {
  cplx g1 = sf::gamma(nu + 1.0);
  return -2.0 * g1 * g1 * sf::recip_gamma(nu - chi) * sf::recip_gamma(nu + chi + 1.0);
}
}  // namespace

cplx evans_factor_A(cplx lambda, const ModelParams& p) {
  if (std::abs(p.omega - 1.0) > 1e-12)
    throw std::domain_error("evans_factor_A: closed form requires omega = 1");
  auto nu = nu_branch(lambda, p.omega, p.s).nu;
  cplx n1 = nu[0], n2 = nu[1];
  cplx num = 4.0 * n1 * n2 * (n1 - 1.0) * (n1 - 1.0) * (n2 - 1.0) * (n2 - 1.0);
  cplx den = (n1 + 1.0) * (n1 + 1.0) * (n2 + 1.0) * (n2 + 1.0);
  return num / den;
}

cplx evans_factor_B(cplx lambda, const ModelParams& p) {
  auto nu = nu_branch(lambda, p.omega, p.s).nu;
  return b_factor(nu[3], chi_exponent(p.beta1));
}

cplx evans_factor_C(cplx lambda, const ModelParams& p) {
  auto nu = nu_branch(lambda, p.omega, p.s).nu;
  return b_factor(nu[2], chi_exponent(p.beta1));
}

EvansValue evans_closed_fundamental(cplx lambda, const ModelParams& p) {
  EvansValue ev;
  cplx ea = evans_factor_A(lambda, p);
  cplx eb = evans_factor_B(lambda, p);
  cplx ec = evans_factor_C(lambda, p);
  ev.factors = {ea, eb, ec};
  ev.value = ea * eb * ec;
  ev.log_value = std::log(ev.value);
  return ev;
}

EvansValue extended_evans(const CoefficientMatrix& ctx, cplx gamma,
                          cplx branch_point, const EvansOptions& opt) {
  const ModelParams& p = ctx.params();
  double radius = 0.5 * std::min(std::sqrt(p.omega), std::sqrt(p.s));
  if (std::abs(gamma) > radius)
    throw std::domain_error("extended_evans: |gamma| outside validity radius");
  const cplx i(0.0, 1.0);
  int slot = -1;
  cplx lambda;
  if (std::abs(branch_point - i * p.s) < 1e-9) {
    slot = 3;
    lambda = branch_point - i * gamma * gamma;
  } else if (std::abs(branch_point - i * p.omega) < 1e-9) {
    slot = 1;
    lambda = branch_point - i * gamma * gamma;
  } else if (std::abs(branch_point + i * p.s) < 1e-9) {
    slot = 2;
    lambda = branch_point + i * gamma * gamma;
  } else if (std::abs(branch_point + i * p.omega) < 1e-9) {
    slot = 0;
    lambda = branch_point + i * gamma * gamma;
  } else {
    throw std::domain_error("extended_evans: not a branch point");
  }
  auto nu = nu_branch(lambda, p.omega, p.s).nu;
  nu[slot] = gamma;  // analytic-in-gamma exponent on the two-sheeted cover
  EvansValue ev = evans_eval_nu(ctx, lambda, nu, opt);
  ev.extended = true;
  ev.gamma = gamma;
  return ev;
}

JostClosed jost_closed_fundamental(double x, cplx lambda, const ModelParams& p) {
  if (std::abs(p.omega - 1.0) > 1e-12)
    throw std::domain_error("jost_closed_fundamental: requires omega = 1");
  auto nu = nu_branch(lambda, p.omega, p.s).nu;
  cplx n1 = nu[0], n2 = nu[1], n4 = nu[3];
  double t = std::tanh(x), S = sech(x);
  double S2 = S * S;
  JostClosed j;
  cplx e1 = std::exp(n1 * x) / ((n1 + 1.0) * (n1 + 1.0));
  j.p1 = e1 * (n1 - t) * (n1 - t);
  j.q1 = -e1 * S2;
  j.dp1 = e1 * (n1 * (n1 - t) * (n1 - t) - 2.0 * (n1 - t) * S2);
  j.dq1 = e1 * (-n1 * S2 + 2.0 * S2 * t);
  cplx e2 = std::exp(n2 * x) / ((n2 + 1.0) * (n2 + 1.0));
  j.p2 = -e2 * S2;
  j.q2 = e2 * (n2 - t) * (n2 - t);
  j.dp2 = e2 * (-n2 * S2 + 2.0 * S2 * t);
  j.dq2 = e2 * (n2 * (n2 - t) * (n2 - t) - 2.0 * (n2 - t) * S2);
  cplx chi = chi_exponent(p.beta1);
  cplx a = n4 - chi, b = n4 + chi + 1.0, c = n4 + 1.0;
  double u = 0.5 * (1.0 + t);
  cplx F = sf::hyp2f1(a, b, c, u);
  cplx Fp = a * b / c * sf::hyp2f1(a + 1.0, b + 1.0, c + 1.0, u);
  cplx base = std::pow(cplx(S / 2.0), n4);
  j.p4 = base * F;
  j.dp4 = base * (-n4 * t * F + Fp * S2 / 2.0);
  return j;
}

std::array<cplx, 2> jost_p4_numeric(const ModelParams& p, cplx lambda,
                                    double half_length, double rtol) {
  double L = half_length > 0.0 ? half_length : model::default_half_length(p);
  cplx n4 = nu_branch(lambda, p.omega, p.s).nu[3];
  const cplx i(0.0, 1.0);
  // u = e^{-nu4 x} p: u'' = (V - nu4^2) u - 2 nu4 u' with
  // V = s + i lambda - d2F(U0^2, 0); track w = (u, u') from (1, 0)
  auto deriv = [&](double x, const std::array<cplx, 2>& w) {
    double u0sq = 2.0 * p.omega * sech(std::sqrt(p.omega) * x) *
                  sech(std::sqrt(p.omega) * x);
    cplx V = p.s + i * lambda - p.beta1 * u0sq;
    return std::array<cplx, 2>{w[1], (V - n4 * n4) * w[0] - 2.0 * n4 * w[1]};
  };
  std::array<cplx, 2> w = {1.0, 0.0};
  double x = -L;
  double h = 0.01;
  while (x < 0.0) {
    if (x + h > 0.0) h = -x;
    // classic RK4 with step doubling for error control
    auto rk4 = [&](std::array<cplx, 2> y, double x0, double hh) {
      auto k1 = deriv(x0, y);
      std::array<cplx, 2> t1{y[0] + 0.5 * hh * k1[0], y[1] + 0.5 * hh * k1[1]};
      auto k2 = deriv(x0 + hh / 2, t1);
      std::array<cplx, 2> t2{y[0] + 0.5 * hh * k2[0], y[1] + 0.5 * hh * k2[1]};
      auto k3 = deriv(x0 + hh / 2, t2);
      std::array<cplx, 2> t3{y[0] + hh * k3[0], y[1] + hh * k3[1]};
      auto k4 = deriv(x0 + hh, t3);
      return std::array<cplx, 2>{
          y[0] + hh / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
          y[1] + hh / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
    };
    auto big = rk4(w, x, h);
    auto half1 = rk4(w, x, h / 2);
    auto half2 = rk4(half1, x + h / 2, h / 2);
    double err = std::max(std::abs(big[0] - half2[0]), std::abs(big[1] - half2[1]));
    double scale = std::max({std::abs(w[0]), std::abs(w[1]), 1e-6});
    if (err <= rtol * scale) {
      x += h;
      w = half2;
      if (err < 0.1 * rtol * scale) h *= 1.6;
    } else {
      h *= 0.5;
      if (h < 1e-12) throw std::runtime_error("jost_p4_numeric: step underflow");
    }
  }
  // undo the rescaling at x = 0 (factor e^{nu4*0} = 1)
  return {w[0], w[1] + n4 * w[0]};
}

// ---------------------------------------------------------------------------
// winding numbers and zero location

namespace {

struct BoundaryWalker {
  std::function<cplx(cplx)> logE;
  int evals = 0;

  // total phase change along the segment [a, b], refining until each jump
  // is below pi/2
  double phase_change(cplx a, cplx za, cplx b, cplx zb, int depth) {
    double d = std::remainder((zb - za).imag(), 2.0 * kPi);
    if (std::abs(d) < kPi / 2.0 || depth >= 14) return d;
    cplx m = 0.5 * (a + b);
    cplx zm = logE(m);
    ++evals;
    return phase_change(a, za, m, zm, depth + 1) +
           phase_change(m, zm, b, zb, depth + 1);
  }
};

}  // namespace

int winding_number_fn(const std::function<cplx(cplx)>& logE, double re0, double re1,
                      double im0, double im1, int samples_per_edge) {
  BoundaryWalker w{logE};
  std::vector<cplx> pts;
  auto edge = [&](cplx a, cplx b) {
    for (int k = 0; k < samples_per_edge; ++k)
      pts.push_back(a + (b - a) * (double(k) / samples_per_edge));
  };
  cplx c00(re0, im0), c10(re1, im0), c11(re1, im1), c01(re0, im1);
  edge(c00, c10);
  edge(c10, c11);
  edge(c11, c01);
  edge(c01, c00);
  pts.push_back(c00);
  std::vector<cplx> vals(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) vals[k] = logE(pts[k]);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k)
    total += w.phase_change(pts[k], vals[k], pts[k + 1], vals[k + 1], 0);
  double wn = total / (2.0 * kPi);
  double rounded = std::round(wn);
  if (std::abs(wn - rounded) > 0.25)
    throw std::runtime_error("winding_number: phase accumulation did not close");
  return int(rounded);
}

int winding_number(const CoefficientMatrix& ctx, double re0, double re1,
                   double im0, double im1, const EvansOptions& opt) {
  auto logE = [&](cplx lam) { return evans_eval(ctx, lam, opt).log_value; };
  return winding_number_fn(logE, re0, re1, im0, im1, 12);
}

std::vector<ZeroLocation> locate_zeros_fn(const std::function<cplx(cplx)>& logE,
                                          double re0, double re1, double im0,
                                          double im1, const LocateOptions& opt) {
  std::vector<ZeroLocation> found;
  struct Box {
    double re0, re1, im0, im1;
    int depth;
  };
  std::vector<Box> work{{re0, re1, im0, im1, 0}};
  auto winding_robust = [&](Box b) {
    for (int jit = 0;; ++jit) {
      try {
        return winding_number_fn(logE, b.re0, b.re1, b.im0, b.im1, 12);
      } catch (const std::runtime_error&) {
        if (jit >= opt.max_jitter) throw;
        double jr = 0.013 * (jit + 1) * (b.re1 - b.re0);
        double ji = 0.017 * (jit + 1) * (b.im1 - b.im0);
        b.re0 -= jr;
        b.re1 += jr;
        b.im0 -= ji;
        b.im1 += ji;
      }
    }
  };
  while (!work.empty()) {
    Box b = work.back();
    work.pop_back();
    int w = winding_robust(b);
    if (w == 0) continue;
    double dr = b.re1 - b.re0, di = b.im1 - b.im0;
    if (std::max(dr, di) > opt.min_box && b.depth < opt.max_depth) {
      double rm = 0.5 * (b.re0 + b.re1), im = 0.5 * (b.im0 + b.im1);
      work.push_back({b.re0, rm, b.im0, im, b.depth + 1});
      work.push_back({rm, b.re1, b.im0, im, b.depth + 1});
      work.push_back({b.re0, rm, im, b.im1, b.depth + 1});
      work.push_back({rm, b.re1, im, b.im1, b.depth + 1});
      continue;
    }
    // Newton polish from the box center with multiplicity-adjusted steps
    cplx lam(0.5 * (b.re0 + b.re1), 0.5 * (b.im0 + b.im1));
    double h = 1e-5 * (1.0 + std::abs(lam));
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
      cplx lp = logE(lam + h), lm = logE(lam - h);
      cplx dlog = (lp - lm);
      dlog = cplx(dlog.real(), std::remainder(dlog.imag(), 2.0 * kPi));
      dlog /= 2.0 * h;
      if (std::abs(dlog) < 1e-14) break;
      cplx step = -double(w) / dlog;
      lam += step;
      if (std::abs(step) < opt.newton_tol) {
        converged = true;
        break;
      }
      h = std::max(1e-9, std::min(h, std::abs(step) * 0.1));
    }
    if (!converged)
      throw std::runtime_error("locate_zeros: Newton polish did not converge");
    found.push_back({lam, w});
  }
  // merge duplicates found through adjacent boxes
  std::vector<ZeroLocation> merged;
  for (auto& z : found) {
    bool dup = false;
    for (auto& m : merged)
      if (std::abs(m.lambda - z.lambda) < 10.0 * opt.newton_tol) {
        dup = true;
        break;
      }
    if (!dup) merged.push_back(z);
  }
  return merged;
}

std::vector<ZeroLocation> locate_zeros(const CoefficientMatrix& ctx, double re0,
                                       double re1, double im0, double im1,
                                       const LocateOptions& opt) {
  auto logE = [&](cplx lam) { return evans_eval(ctx, lam, opt.evans).log_value; };
  return locate_zeros_fn(logE, re0, re1, im0, im1, opt);
}

PointKind classify_point(const CoefficientMatrix& ctx, cplx lambda0) {
  const ModelParams& p = ctx.params();
  SpectralPoint sp = spectral_point(lambda0, p);
  bool at_branch = sp.branch_distance < 1e-9;
  // zero test against the local Evans scale
  double probe = 0.05 * (1.0 + std::abs(lambda0));
  auto eval_abs = [&](cplx lam) {
    if (ctx.is_fundamental() && std::abs(p.omega - 1.0) < 1e-12)
      return std::abs(evans_closed_fundamental(lam, p).value);
    return std::abs(evans_eval(ctx, lam).value);
  };
  double here;
  if (at_branch) {
    here = std::abs(extended_evans(ctx, 0.0, lambda0).value);
  } else {
    here = eval_abs(lambda0);
  }
  double scale = std::max(eval_abs(lambda0 + probe), eval_abs(lambda0 + probe * cplx(0, 1)));
  if (here > 1e-6 * scale) return PointKind::regular;
  if (at_branch) return PointKind::resonance_pole;
  if (sp.in_omega) return PointKind::eigenvalue;
  if (sp.in_essential) {
    if (ctx.is_fundamental() && std::abs(p.omega - 1.0) < 1e-12) {
      // decide by which closed factor vanishes and whether its Jost pair decays
      cplx ea = evans_factor_A(lambda0, p);
      cplx eb = evans_factor_B(lambda0, p);
      cplx ec = evans_factor_C(lambda0, p);
      double m = std::min({std::abs(ea), std::abs(eb), std::abs(ec)});
      cplx nu_rel;
      if (m == std::abs(eb))
        nu_rel = sp.nu[3];
      else if (m == std::abs(ec))
        nu_rel = sp.nu[2];
      else
        nu_rel = std::abs(sp.nu[0]) < std::abs(sp.nu[1]) ? sp.nu[0] : sp.nu[1];
      if (nu_rel.real() > 1e-9) return PointKind::eigenvalue;
      return PointKind::resonance_pole;
    }
    return PointKind::boundary_case;
  }
  // zero of E outside Omega and off the essential spectrum
  return PointKind::resonance_pole;
}

const char* to_string(PointKind k) {
  switch (k) {
    case PointKind::eigenvalue: return "eigenvalue";
    case PointKind::resonance_pole: return "resonance_pole";
    case PointKind::regular: return "regular";
    case PointKind::boundary_case: return "boundary_case";
  }
  return "?";
}

}  // namespace cnls::evans
