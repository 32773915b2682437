#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cnls/continuation.hpp"
#include "cnls/melnikov.hpp"
#include "cnls/quadrature.hpp"
#include "cnls/specfun.hpp"

using namespace cnls;
using model::Grid;
using model::ModelParams;

namespace {
double sech(double x) { return 1.0 / std::cosh(x); }

// residual of the NVE -V'' + s V - 2 beta1 sech^2 x V = 0 by 4th-order FD
double nve_residual_sup(double s, int ell) {
  double b1 = model::beta1_critical(s, ell);
  Grid g = Grid::symmetric(20.0, 16001);
  auto v = melnikov::v1_profile(s, ell, g);
  double h2 = g.dx() * g.dx(), sup = 0.0;
  for (int i = 2; i + 2 < g.n; ++i) {
    double lap =
        (-v[i - 2] + 16 * v[i - 1] - 30 * v[i] + 16 * v[i + 1] - v[i + 2]) / (12 * h2);
    double r = -lap + (s - 2.0 * b1 * sech(g.x[i]) * sech(g.x[i])) * v[i];
    sup = std::max(sup, std::abs(r));
  }
  return sup;
}
}  // namespace

TEST_CASE("V1 closed forms and zero counts") {
  Grid g = Grid::symmetric(20.0, 2001);
  for (double s : {0.25, 1.0, 4.0}) {
    double rs = std::sqrt(s);
    for (double x : {-1.4, 0.0, 0.7, 2.3}) {
      CHECK(melnikov::v1_value(s, 0, x) ==
            doctest::Approx(std::pow(sech(x), rs)).epsilon(1e-13));
      CHECK(melnikov::v1_value(s, 1, x) ==
            doctest::Approx(std::pow(sech(x), rs) * std::tanh(x)).epsilon(1e-13));
    }
  }
  CHECK(melnikov::v1_value(4.0, 2, 0.0) == doctest::Approx(-1.0 / 6.0).epsilon(1e-13));
  for (int ell = 0; ell <= 6; ++ell) {
    auto v = melnikov::v1_profile(4.0, ell, g);
    auto zc = continuation::count_zeros(v);
    CHECK(zc.zeros == ell);
  }
  // parity: V1^2 even
  for (int ell : {0, 1, 2, 3}) {
    auto v = melnikov::v1_profile(2.7, ell, g);
    for (int i = 0; i < g.n; ++i)
      CHECK(std::abs(v[i] * v[i] - v[g.n - 1 - i] * v[g.n - 1 - i]) < 1e-10);
  }
}

TEST_CASE("NVE residual of V1 at the critical coupling") {
  CHECK(nve_residual_sup(4.0, 0) < 1e-9);
  CHECK(nve_residual_sup(4.0, 2) < 1e-9);
  CHECK(nve_residual_sup(0.25, 1) < 1e-9);
  CHECK(nve_residual_sup(9.0, 3) < 4e-9);  // steeper profile, same 4th-order grid
}

TEST_CASE("phi fundamental solutions") {
  CHECK(melnikov::phi11_value(1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(melnikov::phi12_value(1.0, 0.0) == 0.0);
  CHECK(melnikov::phi12_value(1.0, 1.0) ==
        doctest::Approx(sech(1.0) * std::tanh(1.0)).epsilon(1e-14));
  // parity
  Grid g = Grid::symmetric(20.0, 801);
  auto [p11, p12] = melnikov::phi_fundamental(ModelParams{}, g);
  for (int i = 0; i < g.n; ++i) {
    CHECK(std::abs(p11[i] - p11[g.n - 1 - i]) < 1e-10);
    CHECK(std::abs(p12[i] + p12[g.n - 1 - i]) < 1e-10);
  }
  // constant-Wronskian oracle via RK4 integration of the homogeneous ODE
  // phi'' = (1 - 6 sech^2 x) phi from Phi(0) = I
  double y11 = 1.0, d11 = 0.0, y12 = 0.0, d12 = 1.0;
  double x = 0.0, h = 1e-4;
  auto pot = [](double xx) { return 1.0 - 6.0 * sech(xx) * sech(xx); };
  while (x < 0.7 - 1e-12) {
    auto push = [&](double& y, double& dy) {
      double k1y = dy, k1d = pot(x) * y;
      double k2y = dy + h / 2 * k1d, k2d = pot(x + h / 2) * (y + h / 2 * k1y);
      double k3y = dy + h / 2 * k2d, k3d = pot(x + h / 2) * (y + h / 2 * k2y);
      double k4y = dy + h * k3d, k4d = pot(x + h) * (y + h * k3y);
      y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
      dy += h / 6 * (k1d + 2 * k2d + 2 * k3d + k4d);
    };
    push(y11, d11);
    push(y12, d12);
    x += h;
  }
  CHECK(melnikov::phi11_value(1.0, 0.7) == doctest::Approx(y11).epsilon(1e-9));
  CHECK(melnikov::phi12_value(1.0, 0.7) == doctest::Approx(y12).epsilon(1e-9));
  CHECK(y11 * d12 - d11 * y12 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("phi11 quadrature oracle matches the closed form") {
  for (double omega : {1.0, 2.5}) {
    ModelParams p;
    p.omega = omega;
    for (double x : {0.003, 0.02, 0.4, 1.3, 2.5}) {
      double want = melnikov::phi11_value(omega, x);
      double got = melnikov::phi11_by_quadrature(p, x);
      CHECK(got == doctest::Approx(want).epsilon(5e-8));
    }
  }
}

TEST_CASE("integral of phi11 sech^{r+1} matches the closed expression") {
  namespace sf = cnls::specfun;
  for (double r : {2.0, 3.5, 6.0}) {
    auto q = quad::integrate<double>(
        [&](double x) {
          return melnikov::phi11_value(1.0, x) * std::pow(sech(x), r + 1.0);
        },
        -40.0, 40.0, 1e-12, 1e-12);
    double want = (r - 1.0) / (r + 2.0) * sf::sech_moment(r);
    CHECK(q.value == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("U2 profile: parity, decay, defining equation") {
  double s = 4.0;
  int ell = 2;
  Grid g = Grid::symmetric(24.0, 9601);
  auto u2 = melnikov::u2_profile(s, ell, g);
  double mx = 0.0;
  for (double v : u2) mx = std::max(mx, std::abs(v));
  for (int i = 0; i < g.n; ++i) CHECK(std::abs(u2[i] - u2[g.n - 1 - i]) <= 1e-10 * mx);
  CHECK(std::abs(u2.front()) <= 1e-8 * mx);
  // residual of -U2'' + U2 - 6 sech^2 U2 = beta1 sqrt(2) sech x V1^2
  double b1 = model::beta1_critical(s, ell);
  double h2 = g.dx() * g.dx(), sup = 0.0;
  for (int i = 2; i + 2 < g.n; ++i) {
    double lap = (-u2[i - 2] + 16 * u2[i - 1] - 30 * u2[i] + 16 * u2[i + 1] -
                  u2[i + 2]) /
                 (12 * h2);
    double v1 = melnikov::v1_value(s, ell, g.x[i]);
    double r = -lap + u2[i] - 6.0 * sech(g.x[i]) * sech(g.x[i]) * u2[i] -
               b1 * std::sqrt(2.0) * sech(g.x[i]) * v1 * v1;
    sup = std::max(sup, std::abs(r));
  }
  CHECK(sup < 1e-8);
}

TEST_CASE("a2 evaluators") {
  CHECK(melnikov::melnikov_a2_quadrature(1.0, 0) ==
        doctest::Approx(-8.0 / 3.0).epsilon(1e-10));
  CHECK(melnikov::melnikov_a2_closed(1.0, 0) ==
        doctest::Approx(-8.0 / 3.0).epsilon(1e-14));
  for (double s : {0.25, 1.0, 4.0, 9.0}) {
    for (int ell = 0; ell <= 4; ++ell) {
      double closed = melnikov::melnikov_a2_closed(s, ell);
      double quadr = melnikov::melnikov_a2_quadrature(s, ell);
      CHECK(closed < 0.0);
      CHECK(std::abs(closed - quadr) <= 1e-8 * std::abs(closed));
    }
  }
}

TEST_CASE("b2 evaluators at tabulated closed forms") {
  namespace sf = cnls::specfun;
  auto pref = [&](double s) {
    double rs = std::sqrt(s);
    return std::sqrt(M_PI) * sf::gamma(sf::cplx(2 * rs)).real() /
           sf::gamma(sf::cplx(2 * rs + 0.5)).real();
  };
  for (double s : {0.7, 4.0}) {
    for (double b2v : {-1.0, 2.0}) {
      double want0 = pref(s) * (std::pow(s, 1.5) - b2v);
      CHECK(melnikov::melnikov_b2_double_sum(s, 0, b2v) ==
            doctest::Approx(want0).epsilon(1e-12));
      double rs = std::sqrt(s);
      double want1 = pref(s) * (rs * (7.0 * s - 4.0) - 3.0 * b2v) /
                     ((4.0 * rs + 1.0) * (4.0 * rs + 3.0));
      CHECK(melnikov::melnikov_b2_double_sum(s, 1, b2v) ==
            doctest::Approx(want1).epsilon(1e-12));
    }
  }
  // (s=4, beta2=2, ell=2): threshold Q1(2)/Q2(2) = 23920/1555 and b2 > 0
  CHECK(melnikov::beta2_threshold_polynomial(4.0, 2) ==
        doctest::Approx(23920.0 / 1555.0).epsilon(1e-14));
  CHECK(melnikov::melnikov_b2_polynomial(4.0, 2, 2.0) > 0.0);
  CHECK(melnikov::melnikov_b2_polynomial(4.0, 2, 2.0) ==
        doctest::Approx(0.0365023179837995).epsilon(1e-12));
  CHECK_THROWS(melnikov::melnikov_b2_polynomial(4.0, 5, 0.0));
}

TEST_CASE("b2 double sum vs polynomial on the lattice") {
  for (double s : {0.25, 1.0, 4.0, 9.0})
    for (int ell = 0; ell <= 4; ++ell)
      for (double b2v : {-1.0, 0.0, 2.0, 20.0}) {
        double ds = melnikov::melnikov_b2_double_sum(s, ell, b2v);
        double poly = melnikov::melnikov_b2_polynomial(s, ell, b2v);
        double scale = std::max({std::abs(ds), std::abs(poly), 1e-30});
        CHECK(std::abs(ds - poly) <= 1e-10 * scale);
      }
}

TEST_CASE("b2 quadrature evaluator spot checks") {
  for (auto [s, ell, b2v] : {std::tuple{4.0, 2, 2.0}, {1.0, 0, -1.0}, {4.0, 1, 5.0}}) {
    double q = melnikov::melnikov_b2_quadrature(s, ell, b2v);
    double ds = melnikov::melnikov_b2_double_sum(s, ell, b2v);
    CHECK(std::abs(q - ds) <= 1e-6 * std::max(std::abs(ds), 1e-12));
  }
}

TEST_CASE("bifurcation classification") {
  auto v = melnikov::classify_bifurcation(4.0, 2, 2.0);
  CHECK(v.kind == melnikov::BifurcationKind::supercritical);
  CHECK(v.beta1_star == doctest::Approx(10.0));
  auto sub = melnikov::classify_bifurcation(4.0, 0, 9.0);  // beta2 > s^{3/2} = 8
  CHECK(sub.kind == melnikov::BifurcationKind::subcritical);
  auto deg = melnikov::classify_bifurcation(4.0, 0, 8.0);  // boundary b2 = 0
  CHECK(deg.kind == melnikov::BifurcationKind::degenerate);
}

TEST_CASE("approximate branch: root, scaling, residual order") {
  double s = 4.0, beta2 = 2.0;
  int ell = 2;
  Grid g = Grid::symmetric(20.0, 16001);
  auto b0 = melnikov::approximate_branch(s, ell, beta2, 0.0, g);
  CHECK(b0.mu == 0.0);
  auto fun = model::fundamental_profile(ModelParams{1.0, s, 0, 0, 0, 0}, g);
  for (int i = 0; i < g.n; i += 500) {
    CHECK(b0.profile.U[i] == doctest::Approx(fun.U[i]).epsilon(1e-12));
    CHECK(b0.profile.V[i] == 0.0);
  }
  // branch relation a2 mu + b2 eps^2 = 0
  double a2 = melnikov::melnikov_a2_closed(s, ell);
  double b2 = melnikov::melnikov_b2_double_sum(s, ell, beta2);
  auto bp = melnikov::approximate_branch(s, ell, beta2, 0.1, g);
  CHECK(std::abs(a2 * bp.mu + b2 * 0.01) < 1e-14);
  // order-3 residual scaling under eps halving
  auto res_at = [&](double eps) {
    auto b = melnikov::approximate_branch(s, ell, beta2, eps, g);
    ModelParams p;
    p.omega = 1.0;
    p.s = s;
    p.beta1 = b.beta1;
    p.beta2 = beta2;
    return model::steady_residual(b.profile, p).sup_norm;
  };
  double r1 = res_at(0.2), r2 = res_at(0.1);
  CHECK(r1 / r2 >= 7.0);
  CHECK(r1 / r2 <= 9.5);
}
