#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "cnls/evans.hpp"
#include "cnls/melnikov.hpp"

using namespace cnls;
using evans::cplx;
using model::ModelParams;

namespace {
ModelParams flagship() {
  ModelParams p;
  p.omega = 1.0;
  p.s = 4.0;
  p.beta1 = 10.0;
  p.beta2 = 2.0;
  return p;
}
double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("spectral points: branches and regions") {
  ModelParams p = flagship();
  auto sp0 = evans::spectral_point(cplx(0.0), p);
  CHECK(rel(sp0.nu[0], 1.0) < 1e-14);
  CHECK(rel(sp0.nu[1], 1.0) < 1e-14);
  CHECK(sp0.in_omega);
  auto sps = evans::spectral_point(cplx(0.0, 4.0), p);
  CHECK(std::abs(sps.nu[3]) < 1e-12);  // branch point
  CHECK(sps.branch_distance < 1e-12);
  auto sp3 = evans::spectral_point(cplx(0.0, 3.0), p);
  CHECK(rel(sp3.nu[1], cplx(0.0, std::sqrt(2.0))) < 1e-14);
  CHECK(sp3.in_essential);
  CHECK(!sp3.in_omega);
  CHECK(sp3.in_omega_e);
  auto spr = evans::spectral_point(cplx(2.0, 0.5), p);
  CHECK(spr.in_omega);
  CHECK(!spr.in_essential);
}

TEST_CASE("closed factor B: spectrum inventory at the flagship parameters") {
  ModelParams p = flagship();  // chi = 4
  CHECK(std::abs(evans::chi_exponent(10.0) - 4.0) < 1e-14);
  // zeros at -12i, -5i, 0, 3i; resonance pole at is = 4i
  for (double t : {-12.0, -5.0, 0.0, 3.0, 4.0})
    CHECK(std::abs(evans::evans_factor_B(cplx(0.0, t), p)) < 1e-12);
  // simple elsewhere on the axis
  for (double t : {-13.0, -8.0, -2.0, 1.0, 2.0, 3.5})
    CHECK(std::abs(evans::evans_factor_B(cplx(0.0, t), p)) > 1e-6);
  // E_C zeros are the mirrors
  for (double t : {12.0, 5.0, 0.0, -3.0})
    CHECK(std::abs(evans::evans_factor_C(cplx(0.0, t), p)) < 1e-12);
  // E_A: zero only at 0 (multiplicity 4), resonance poles at +-i
  CHECK(std::abs(evans::evans_factor_A(cplx(0.0), p)) < 1e-14);
  for (double h : {1e-3, 2e-3}) {
    cplx v = evans::evans_factor_A(cplx(h, 0.0), p);
    CHECK(std::abs(v) < 10.0 * h * h * h * h / (h * h * h));  // vanishing faster than h^3
  }
  CHECK(std::abs(evans::evans_factor_A(cplx(0.0, 1.0), p)) < 1e-12);
  CHECK(std::abs(evans::evans_factor_A(cplx(0.0, -1.0), p)) < 1e-12);
  // no E_B zeros on i(-inf, s) for beta1 < 0
  for (double b1 : {-0.3, -2.0}) {
    ModelParams q = p;
    q.beta1 = b1;
    for (double t = -15.0; t < 3.9; t += 0.37)
      CHECK(std::abs(evans::evans_factor_B(cplx(0.0, t), q)) > 1e-8);
  }
}

TEST_CASE("E_A multiplicity four at the origin") {
  ModelParams p = flagship();
  // winding of E_A E_B E_C around 0: 4 (E_A) + 1 (E_B) + 1 (E_C)
  auto logE = [&](cplx lam) {
    return std::log(evans::evans_closed_fundamental(lam, p).value);
  };
  int w = evans::winding_number_fn(logE, -0.4, 0.4, -0.4, 0.4, 16);
  CHECK(w == 6);
  auto logA = [&](cplx lam) { return std::log(evans::evans_factor_A(lam, p)); };
  CHECK(evans::winding_number_fn(logA, -0.4, 0.4, -0.4, 0.4, 16) == 4);
}

TEST_CASE("numeric Jost solution of the B block matches the closed form") {
  ModelParams p = flagship();
  for (cplx lam : {cplx(0.0, 3.0), cplx(0.0, 2.0), cplx(0.7, -1.3)}) {
    auto num = evans::jost_p4_numeric(p, lam);
    auto cl = evans::jost_closed_fundamental(0.0, lam, p);
    CHECK(rel(num[0], cl.p4) < 1e-8);
    CHECK(rel(num[1], cl.dp4) < 1e-8);
  }
  // p8(x, lambda) = p4(-x, lambda) and the Wronskian is x-independent
  // (probe away from zeros of E_B)
  cplx lam(0.0, 2.0);
  auto wron = [&](double x) {
    auto a = evans::jost_closed_fundamental(x, lam, p);
    auto b = evans::jost_closed_fundamental(-x, lam, p);
    // p8(x) = p4(-x), p8'(x) = -p4'(-x)
    return a.p4 * (-b.dp4) - b.p4 * a.dp4;
  };
  cplx w0 = wron(0.0);
  for (double x : {0.4, 1.1, 2.3}) CHECK(std::abs(wron(x) - w0) < 1e-9 * std::abs(w0));
  // and matches -2 p4(0) p4'(0)
  auto j0 = evans::jost_closed_fundamental(0.0, lam, p);
  CHECK(rel(w0, -2.0 * j0.p4 * j0.dp4) < 1e-12);
}

TEST_CASE("numeric Evans equals the closed product off the axis") {
  ModelParams p = flagship();
  auto ctx = evans::CoefficientMatrix::fundamental(p);
  for (cplx lam : {cplx(2.0, 0.5), cplx(0.3, -2.0), cplx(1.0, 4.0), cplx(0.25, -11.0),
                   cplx(0.0, 2.2), cplx(0.0, -7.5)}) {
    auto num = evans::evans_eval(ctx, lam);
    auto cl = evans::evans_closed_fundamental(lam, p);
    CHECK(rel(num.value, cl.value) < 1e-6);
  }
  // E(0) = 0: tiny against the neighborhood scale
  auto e0 = evans::evans_eval(ctx, cplx(0.0));
  auto en = evans::evans_eval(ctx, cplx(0.05));
  CHECK(std::abs(e0.value) < 1e-6 * std::abs(en.value));
  // E at 2 + 0.5i is nonzero
  CHECK(std::abs(evans::evans_eval(ctx, cplx(2.0, 0.5)).value) > 1e-9);
}

TEST_CASE("x-independence of the determinant") {
  ModelParams p = flagship();
  auto ctx = evans::CoefficientMatrix::fundamental(p);
  evans::EvansOptions xo;
  xo.x_independence = true;
  for (cplx lam : {cplx(1.2, 0.7), cplx(0.4, -3.3), cplx(0.05, 2.0)}) {
    auto ev = evans::evans_eval(ctx, lam, xo);
    CHECK(ev.x_independence_rel < 1e-8);
  }
}

TEST_CASE("conjugation symmetry of the closed factors") {
  ModelParams p = flagship();
  for (cplx lam : {cplx(1.0, 0.3), cplx(0.7, -1.9), cplx(2.5, 2.0)}) {
    CHECK(rel(evans::evans_factor_A(std::conj(lam), p),
              std::conj(evans::evans_factor_A(lam, p))) < 1e-12);
    // global identity: E_B(conj lambda) = conj(E_C(lambda))
    CHECK(rel(evans::evans_factor_B(std::conj(lam), p),
              std::conj(evans::evans_factor_C(lam, p))) < 1e-12);
  }
  // full product symmetric everywhere tested
  for (cplx lam : {cplx(1.0, 0.3), cplx(0.7, -1.9), cplx(0.2, 6.0)}) {
    auto a = evans::evans_closed_fundamental(std::conj(lam), p).value;
    auto b = std::conj(evans::evans_closed_fundamental(lam, p).value);
    CHECK(rel(a, b) < 1e-12);
  }
}

TEST_CASE("analyticity probe: Cauchy-Riemann residual of numeric E") {
  ModelParams p = flagship();
  auto ctx = evans::CoefficientMatrix::fundamental(p);
  double h = 1e-4;
  for (cplx lam : {cplx(1.5, 0.8), cplx(0.3, -2.6)}) {
    cplx dre = (evans::evans_eval(ctx, lam + h).value -
                evans::evans_eval(ctx, lam - h).value) /
               (2.0 * h);
    cplx dim = (evans::evans_eval(ctx, lam + cplx(0, h)).value -
                evans::evans_eval(ctx, lam - cplx(0, h)).value) /
               (2.0 * h * cplx(0, 1));
    CHECK(std::abs(dre - dim) <= 1e-6 * std::abs(dre));
  }
}

TEST_CASE("extended Evans function at branch points") {
  ModelParams p = flagship();  // chi = 4 integer: is is a resonance pole
  auto ctx = evans::CoefficientMatrix::fundamental(p);
  cplx is(0.0, 4.0);
  auto at0 = evans::extended_evans(ctx, cplx(0.0), is);
  auto nearby = evans::extended_evans(ctx, cplx(0.3), is);
  CHECK(std::abs(at0.value) < 1e-6 * std::abs(nearby.value));
  // first-sheet consistency: Etilde(gamma) = E(is - i gamma^2)
  cplx gam(0.1);
  auto ext = evans::extended_evans(ctx, gam, is);
  cplx lam = is - cplx(0, 1) * gam * gam;
  auto dir = evans::evans_eval(ctx, lam);
  CHECK(rel(ext.value, dir.value) < 1e-6);
  // d/dgamma Etilde(0) = -2 tau E_A(is) E_C(is); tau = (-1)^{ell-k} with
  // ell = 2, k = -2 at the flagship parameters, so tau = +1
  double hg = 1e-3;
  cplx d = (evans::extended_evans(ctx, cplx(hg), is).value -
            evans::extended_evans(ctx, cplx(-hg), is).value) /
           (2.0 * hg);
  cplx want = -2.0 * evans::evans_factor_A(is, p) * evans::evans_factor_C(is, p);
  CHECK(rel(d, want) < 1e-4);
  CHECK_THROWS(evans::extended_evans(ctx, cplx(0.9), is));
  CHECK_THROWS(evans::extended_evans(ctx, cplx(0.0), cplx(0.0, 2.5)));
}

TEST_CASE("zero location on the fundamental wave") {
  ModelParams p = flagship();
  auto ctx = evans::CoefficientMatrix::fundamental(p);
  // box around -5i: one simple zero to 1e-8
  auto zs = evans::locate_zeros(ctx, -0.25, 0.25, -5.25, -4.75);
  REQUIRE(zs.size() == 1);
  CHECK(zs[0].multiplicity == 1);
  CHECK(std::abs(zs[0].lambda - cplx(0.0, -5.0)) < 1e-8);
  // open right half-plane box: empty
  auto zr = evans::locate_zeros(ctx, 0.4, 1.6, -1.0, 1.0);
  CHECK(zr.empty());
}

TEST_CASE("point classification") {
  ModelParams p = flagship();
  auto ctx = evans::CoefficientMatrix::fundamental(p);
  CHECK(evans::classify_point(ctx, cplx(0.0, 4.0)) ==
        evans::PointKind::resonance_pole);
  CHECK(evans::classify_point(ctx, cplx(0.0, -5.0)) == evans::PointKind::eigenvalue);
  CHECK(evans::classify_point(ctx, cplx(2.0, 1.0)) == evans::PointKind::regular);
  CHECK(evans::classify_point(ctx, cplx(0.0, 1.0)) ==
        evans::PointKind::resonance_pole);
}

TEST_CASE("profile-route coefficient matrix reproduces the fundamental") {
  ModelParams p = flagship();
  model::Grid g = model::Grid::symmetric(20.0, 8001);
  auto w = model::fundamental_profile(p, g);
  auto ctx_prof = evans::CoefficientMatrix::from_profile(w, p);
  auto ctx_fun = evans::CoefficientMatrix::fundamental(p);
  for (cplx lam : {cplx(1.0, 0.5), cplx(0.2, -3.0)}) {
    auto a = evans::evans_eval(ctx_prof, lam);
    auto b = evans::evans_eval(ctx_fun, lam);
    CHECK(rel(a.value, b.value) < 1e-7);
  }
}

TEST_CASE("eps-expansion matrix reduces to the fundamental at eps = 0") {
  auto ctx0 = evans::CoefficientMatrix::eps_expansion(4.0, 2, 2.0, 0.0);
  ModelParams p = flagship();
  for (cplx lam : {cplx(1.0, 0.5), cplx(0.3, 2.0)}) {
    auto a = evans::evans_eval(ctx0, lam);
    auto b = evans::evans_closed_fundamental(lam, p);
    CHECK(rel(a.value, b.value) < 1e-6);
  }
}
