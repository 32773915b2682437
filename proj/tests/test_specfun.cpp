#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <random>

#include "cnls/quadrature.hpp"
#include "cnls/specfun.hpp"

using namespace cnls;
namespace sf = cnls::specfun;
using sf::cplx;

namespace {
double rel_err(cplx got, cplx want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}
}  // namespace

TEST_CASE("gamma at classical points") {
  CHECK(rel_err(sf::gamma(cplx(4.0)), 6.0) < 1e-14);
  CHECK(rel_err(sf::gamma(cplx(0.5)), std::sqrt(M_PI)) < 1e-14);
  // from the recurrence out of Gamma(1/2)
  CHECK(rel_err(sf::gamma(cplx(4.5)), 11.631728396567449) < 1e-14);
  CHECK_THROWS_AS(sf::gamma(cplx(-3.0)), sf::PoleError);
  CHECK(sf::recip_gamma(cplx(-4.0)) == cplx(0.0));
}

TEST_CASE("gamma recurrence on random complex probes") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> re(-49.0, 49.0), im(-49.0, 49.0);
  int checked = 0;
  for (int k = 0; k < 1000; ++k) {
    cplx z(re(rng), im(rng));
    if (sf::is_nonpositive_integer(z, 1e-3) ||
        sf::is_nonpositive_integer(z + 1.0, 1e-3))
      continue;
    cplx lhs = sf::gamma(z + 1.0);
    cplx rhs = z * sf::gamma(z);
    CHECK(rel_err(lhs, rhs) < 1e-12);
    ++checked;
  }
  CHECK(checked > 950);
}

TEST_CASE("pochhammer") {
  CHECK(sf::pochhammer(cplx(3.0), 0) == cplx(1.0));
  CHECK(sf::pochhammer(cplx(-2.0), 3) == cplx(0.0));
  CHECK(rel_err(sf::pochhammer(cplx(0.5), 2), 0.75) < 1e-15);
}

TEST_CASE("hypergeometric series basics") {
  std::array<cplx, 2> a0 = {cplx(0.0), cplx(2.0)};
  std::array<cplx, 1> b0 = {cplx(3.0)};
  CHECK(sf::hyp_pfq(a0, b0, 0.7) == cplx(1.0));
  CHECK(rel_err(sf::hyp2f1(-1.0, 2.0, 3.0, 0.5), 2.0 / 3.0) < 1e-15);
  std::array<cplx, 2> ad = {cplx(0.3), cplx(0.4)};
  CHECK_THROWS_AS(sf::hyp_pfq(ad, b0, cplx(1.5)), sf::DivergenceError);
}

TEST_CASE("terminating pFq equals its direct finite sum") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 200; ++rep) {
    int n = rep % 6;
    cplx a1(-double(n)), a2(u(rng), u(rng)), b1(3.1 + std::abs(u(rng)), u(rng));
    cplx z(u(rng), u(rng));
    std::array<cplx, 2> as = {a1, a2};
    std::array<cplx, 1> bs = {b1};
    cplx got = sf::hyp_pfq(as, bs, z);
    cplx direct = 0.0;
    for (int j = 0; j <= n; ++j)
      direct += sf::pochhammer(a1, j) * sf::pochhammer(a2, j) /
                (sf::pochhammer(b1, j) * sf::pochhammer(cplx(1.0), j)) *
                std::pow(z, j);
    CHECK(rel_err(got, direct) < 1e-13);
  }
}

TEST_CASE("2F1 at unit argument: Gauss summation") {
  // paper's closed example at s = 0.64, nu = 0.6
  double rs = 0.8, nu = 0.6;
  cplx a(-rs, nu), b((rs + 1.0) / 2.0, nu / 2.0), c(1.0, nu);
  cplx got = sf::gauss_2f1_unit(a, b, c);
  cplx frozen(0.074248645733896592, 0.27622779397370728);
  CHECK(rel_err(got, frozen) < 1e-13);
}

TEST_CASE("2F1 connection at large argument agrees with the direct series") {
  cplx a(0.21, 0.4), b(1.3, -0.2), c(2.05, 0.1);
  for (double z : {0.65, 0.8, 0.9}) {
    cplx via_connection = sf::hyp2f1(a, b, c, z);
    // direct series, still convergent below 1
    std::array<cplx, 2> as = {a, b};
    std::array<cplx, 1> bs = {c};
    cplx direct = sf::hyp_pfq(as, bs, cplx(z));
    CHECK(rel_err(via_connection, direct) < 1e-11);
  }
}

TEST_CASE("Saalschutz theorem vs direct summation") {
  CHECK(rel_err(sf::saalschutz_3f2(0, cplx(1.3, 0.2), cplx(0.7), cplx(2.0)), 1.0) <
        1e-15);
  // fixed probe with e forced by the balance
  CHECK(rel_err(sf::saalschutz_3f2(2, cplx(0.5), cplx(1.5), cplx(2.5)),
                1.8285714285714286) < 1e-13);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.3, 2.5);
  for (int rep = 0; rep < 100; ++rep) {
    unsigned n = rep % 5;
    cplx b(u(rng), 0.3 * u(rng)), c(u(rng), -0.2 * u(rng)), d(2.0 + u(rng));
    cplx e = -double(n) + b + c + 1.0 - d;
    if (std::abs(sf::pochhammer(e, n)) < 1e-6) continue;
    cplx closed = sf::saalschutz_3f2(n, b, c, d, &e);
    cplx direct = 0.0;
    for (unsigned j = 0; j <= n; ++j)
      direct += sf::pochhammer(cplx(-double(n)), j) * sf::pochhammer(b, j) *
                sf::pochhammer(c, j) /
                (sf::pochhammer(d, j) * sf::pochhammer(e, j) *
                 sf::pochhammer(cplx(1.0), j));
    CHECK(rel_err(closed, direct) < 1e-12);
  }
  cplx bad = cplx(1.0);  // balance requires e = 0 here
  CHECK_THROWS_AS(sf::saalschutz_3f2(1, cplx(1.0), cplx(1.0), cplx(2.0), &bad),
                  sf::BalanceError);
}

TEST_CASE("associated Legendre basics") {
  for (double z : {-0.7, 0.0, 0.4, 0.9}) {
    CHECK(rel_err(sf::legendre_p(cplx(0.0), cplx(0.0), z), 1.0) < 1e-14);
    CHECK(rel_err(sf::legendre_p(cplx(1.0), cplx(0.0), z), z) < 1e-13);
  }
  // 2^{rs} Gamma(rs + 1) P^{-rs}_{rs}(tanh x) = sech^{rs} x
  for (double s : {0.5, 2.0, 4.0}) {
    double rs = std::sqrt(s);
    for (double x : {-1.2, 0.3, 2.0}) {
      cplx lhs = std::pow(2.0, rs) * sf::gamma(cplx(rs + 1.0)) *
                 sf::legendre_p(cplx(rs), cplx(-rs), std::tanh(x));
      double rhs = std::pow(1.0 / std::cosh(x), rs);
      CHECK(rel_err(lhs, rhs) < 1e-12);
    }
  }
  CHECK_THROWS_AS(sf::legendre_p(cplx(1.0), cplx(2.0), 0.3), sf::PoleError);
}

TEST_CASE("sech moments and Fourier transforms") {
  // r = 2 against quadrature of sech^2
  auto q2 = quad::integrate<double>(
      [](double x) { return 1.0 / (std::cosh(x) * std::cosh(x)); }, -40.0, 40.0,
      1e-13, 1e-13);
  CHECK(std::abs(sf::sech_moment(2.0) - q2.value) < 1e-12);
  CHECK(std::abs(sf::sech_moment(2.0) - 2.0) < 1e-14);
  // recurrence K_{r+2} = r/(r+1) K_r from K_2 = 2
  CHECK(std::abs(sf::sech_moment(4.0) - 4.0 / 3.0) < 1e-14);
  // K_{r+2}(alpha) = ((r^2+alpha^2)/(r(r+1))) K_r(alpha) at (3, 1.5)
  double lhs = sf::sech_fourier(5.0, 1.5);
  double rhs = (9.0 + 2.25) / 12.0 * sf::sech_fourier(3.0, 1.5);
  CHECK(std::abs(lhs - rhs) < 1e-13 * std::abs(rhs));
  // alpha = 0 reduces to the moment
  for (double r : {0.7, 1.0, 2.3, 5.5})
    CHECK(std::abs(sf::sech_fourier(r, 0.0) - sf::sech_moment(r)) <
          1e-13 * sf::sech_moment(r));
}

TEST_CASE("sech Fourier vs adaptive quadrature") {
  for (double r : {1.0, 2.0, 3.7, 8.0}) {
    for (double alpha : {0.0, 0.5, 3.0}) {
      auto q = quad::integrate<cplx>(
          [&](double x) {
            return std::exp(cplx(0.0, -alpha * x)) *
                   std::pow(1.0 / std::cosh(x), r);
          },
          -45.0, 45.0, 1e-12, 1e-13);
      CHECK(std::abs(q.value.real() - sf::sech_fourier(r, alpha)) < 1e-9);
      CHECK(std::abs(q.value.imag()) < 1e-9);
    }
  }
}

TEST_CASE("Clausen identity on the paper's parameter family") {
  // 2F1(a,b;a+b+1/2;z)^2 = 3F2(2a,2b,a+b;2a+2b,a+b+1/2;z)
  auto check_family = [&](cplx a, cplx b) {
    cplx c = a + b + 0.5;
    for (double z = 0.0; z <= 0.9 + 1e-12; z += 0.15) {
      cplx lhs = sf::hyp2f1(a, b, c, z);
      lhs *= lhs;
      std::array<cplx, 3> as = {2.0 * a, 2.0 * b, a + b};
      std::array<cplx, 2> bs = {2.0 * (a + b), c};
      cplx rhs = sf::hyp_pfq(as, bs, cplx(z));
      CHECK(rel_err(lhs, rhs) < 1e-11);
    }
  };
  for (double s : {1.0, 4.0}) {
    double rs = std::sqrt(s);
    for (int lp : {0, 1, 2}) check_family(cplx(-lp), cplx(rs + lp + 0.5));
  }
  check_family(cplx(0.3), cplx(0.7));
}
