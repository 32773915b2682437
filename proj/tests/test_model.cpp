#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cnls/io.hpp"
#include "cnls/model.hpp"

using namespace cnls;
using model::Grid;
using model::ModelParams;

TEST_CASE("cubic nonlinearity derivatives") {
  ModelParams p;
  p.beta1 = 3.0;
  p.beta2 = -1.5;
  auto d = model::cubic_derivs(1.0, 0.0, p);
  CHECK(d.d1 == 1.0);
  CHECK(d.d2 == 3.0);
  auto d0 = model::cubic_derivs(0.0, 0.0, p);
  CHECK(d0.F == 0.0);
  CHECK(d0.d1 == 0.0);
  CHECK(d0.d2 == 0.0);
  // (A1): F(z, 0) does not depend on the control parameter
  ModelParams p2 = p;
  p2.beta1 = -7.0;
  for (double z : {0.3, 1.7, 9.0})
    CHECK(model::cubic_derivs(z, 0.0, p).F == model::cubic_derivs(z, 0.0, p2).F);
  CHECK(d.d12 == 3.0);
  CHECK(d.d22 == -1.5);
  CHECK(d.d111 == 0.0);
  CHECK(model::cubic_derivs(2.5, 0.7, p).dmu2 == 2.5);
}

TEST_CASE("critical coupling values") {
  CHECK(model::beta1_critical(4.0, 0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(model::beta1_critical(4.0, 2) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(model::beta1_critical(4.0, 4) == doctest::Approx(21.0).epsilon(1e-15));
  CHECK(model::beta1_critical(1.0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  // strictly increasing in ell and in s
  for (int ell = 0; ell < 6; ++ell)
    CHECK(model::beta1_critical(4.0, ell + 1) > model::beta1_critical(4.0, ell));
  for (double s = 0.5; s < 9.0; s += 0.7)
    CHECK(model::beta1_critical(s + 0.5, 2) > model::beta1_critical(s, 2));
}

TEST_CASE("fundamental profile values and residual") {
  ModelParams p;
  p.omega = 1.0;
  p.s = 4.0;
  Grid g = Grid::symmetric(20.0, 16001);
  auto w = model::fundamental_profile(p, g);
  CHECK(w.U[g.mid()] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(model::l2_norm(w.U, g) * model::l2_norm(w.U, g) ==
        doctest::Approx(4.0).epsilon(1e-12));
  auto rep = model::steady_residual(w, p);
  // double-precision floor: the sech samples carry ~ulp noise that the
  // stencil amplifies by 1/h^2, bottoming out near 1.5e-10
  CHECK(rep.sup_norm < 2.5e-10);

  ModelParams p4 = p;
  p4.omega = 4.0;
  auto w4 = model::fundamental_profile(p4, g);
  CHECK(w4.U[g.mid()] == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));

  // parity and normalization: even, max at x = 0
  for (int i = 0; i < g.n; ++i)
    CHECK(w.U[i] == doctest::Approx(w.U[g.n - 1 - i]).epsilon(1e-14));
}

TEST_CASE("steady residual oracles") {
  ModelParams p;
  p.beta1 = 2.0;
  p.beta2 = 1.0;
  Grid g = Grid::symmetric(20.0, 2001);
  model::WaveProfile zero;
  zero.grid = g;
  zero.U.assign(g.n, 0.0);
  zero.V.assign(g.n, 0.0);
  auto rz = model::steady_residual(zero, p);
  CHECK(rz.sup_norm == 0.0);

  // randomly perturbed fundamental: compare against an independent
  // stencil application coded inline
  auto w = model::fundamental_profile(p, g);
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  for (auto& x : w.U) x += u(rng);
  for (auto& x : w.V) x += u(rng);
  auto rep = model::steady_residual(w, p);
  CHECK(rep.sup_norm > 0.0);
  double h2 = g.dx() * g.dx();
  for (int i : {5, 700, 1000, 1500}) {
    double lapU = (-w.U[i - 2] + 16 * w.U[i - 1] - 30 * w.U[i] + 16 * w.U[i + 1] -
                   w.U[i + 2]) /
                  (12 * h2);
    double d1F = w.U[i] * w.U[i] + p.beta1 * w.V[i] * w.V[i];
    double want = -lapU + p.omega * w.U[i] - d1F * w.U[i];
    CHECK(rep.rU[i] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("(A2) characterization for the cubic") {
  // zeta0 = inf{zeta > 0 : F(zeta^2, 0) = omega zeta^2} = sqrt(2 omega)
  for (double omega : {0.5, 1.0, 3.0}) {
    ModelParams p;
    p.omega = omega;
    double zeta = 0.0;
    for (double z = 1e-3; z < 10.0; z += 1e-3) {
      double F = model::cubic_derivs(z * z, 0.0, p).F;
      if (F >= omega * z * z) {
        zeta = z;
        break;
      }
    }
    CHECK(zeta == doctest::Approx(std::sqrt(2.0 * omega)).epsilon(1e-2));
    CHECK(model::cubic_derivs(2.0 * omega, 0.0, p).d1 ==
          doctest::Approx(2.0 * omega).epsilon(1e-14));
    CHECK(model::cubic_derivs(2.0 * omega, 0.0, p).d1 > omega);
  }
}

TEST_CASE("profile CSV and params JSON round-trip bit-exactly") {
  ModelParams p;
  p.omega = 1.0;
  p.s = 4.0;
  p.beta1 = 10.0 + 1e-13;
  p.beta2 = 2.0 / 3.0;
  Grid g = Grid::symmetric(20.0, 101);
  auto w = model::fundamental_profile(p, g);
  w.V[50] = 0.1234567890123456789;
  std::string csv = io::profile_to_csv(w);
  auto back = io::profile_from_csv(csv);
  REQUIRE(back.grid.n == w.grid.n);
  for (int i = 0; i < g.n; ++i) {
    CHECK(back.grid.x[i] == w.grid.x[i]);
    CHECK(back.U[i] == w.U[i]);
    CHECK(back.V[i] == w.V[i]);
  }
  CHECK(io::profile_to_csv(back) == csv);

  auto q = io::params_from_json(io::params_to_json(p));
  CHECK(q.beta1 == p.beta1);
  CHECK(q.beta2 == p.beta2);
}

TEST_CASE("default half-length rule") {
  ModelParams p;
  p.omega = 1.0;
  p.s = 4.0;
  CHECK(model::default_half_length(p) == 20.0);
  p.omega = 0.25;  // min sqrt = 0.5
  CHECK(model::default_half_length(p) == doctest::Approx(34.0));
}
