#include "cnls/specfun.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace cnls::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Lanczos g = 7, 9-term coefficient set.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

cplx gamma_core(cplx z) {
  // valid for Re z >= 0.5
  z -= 1.0;
  cplx acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + double(i));
  cplx t = z + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

}  // namespace

bool is_nonpositive_integer(cplx z, double tol) {
  if (std::abs(z.imag()) > tol) return false;
  double r = std::round(z.real());
  return r <= 0.0 && std::abs(z.real() - r) <= tol;
}

cplx gamma(cplx z) {
  if (is_nonpositive_integer(z, 1e-14))
    throw PoleError("gamma: argument at a nonpositive-integer pole");
  if (z.real() < 0.5) {
    // reflection formula
    return kPi / (std::sin(kPi * z) * gamma_core(1.0 - z));
  }
  return gamma_core(z);
}

cplx recip_gamma(cplx z) {
  if (is_nonpositive_integer(z)) return 0.0;
  if (z.real() < 0.5) return std::sin(kPi * z) * gamma_core(1.0 - z) / kPi;
  return 1.0 / gamma_core(z);
}

cplx pochhammer(cplx x, unsigned j) {
  cplx p = 1.0;
  for (unsigned m = 0; m < j; ++m) p *= x + double(m);
  return p;
}

namespace {

// Number of terms of a terminating series, or -1 when non-terminating.
long termination_length(std::span<const cplx> a) {
  long n = -1;
  for (const cplx& ai : a) {
    if (is_nonpositive_integer(ai)) {
      long ni = lround(-ai.real());
      if (n < 0 || ni < n) n = ni;
    }
  }
  return n < 0 ? -1 : n + 1;
}

cplx pfq_series(std::span<const cplx> a, std::span<const cplx> b, cplx z,
                long nterms) {
  // sum_{j>=0} t_j with t_0 = 1 and t_{j+1} = t_j prod(a+j)/prod(b+j) z/(j+1);
  // nterms >= 0 means the sum has exactly nterms terms (terminating case).
  cplx sum = 1.0, term = 1.0;
  int small_in_a_row = 0;
  for (long j = 0;; ++j) {
    if (nterms >= 0 && j + 1 >= nterms) return sum;
    cplx ratio = z / double(j + 1);
    for (const cplx& ai : a) ratio *= ai + double(j);
    for (const cplx& bi : b) {
      cplx d = bi + double(j);
      if (std::abs(d) < 1e-300)
        throw PoleError("hyp_pfq: denominator parameter hits a nonpositive integer");
      ratio /= d;
    }
    term *= ratio;
    sum += term;
    if (nterms < 0) {
      if (std::abs(term) <= 1e-16 * std::abs(sum)) {
        if (++small_in_a_row >= 2) return sum;
      } else {
        small_in_a_row = 0;
      }
      if (j >= 100000)
        throw DivergenceError("hyp_pfq: series did not converge within 1e5 terms");
    }
  }
}

}  // namespace

cplx hyp_pfq(std::span<const cplx> a, std::span<const cplx> b, cplx z) {
  long nterms = termination_length(a);
  if (nterms < 0 && std::abs(z) >= 1.0) {
    if (std::abs(z) > 1.0)
      throw DivergenceError("hyp_pfq: |z| > 1 for a non-terminating series");
    // |z| == 1: allowed only with convergent parameter excess
    cplx excess = 0.0;
    for (const cplx& bi : b) excess += bi;
    for (const cplx& ai : a) excess -= ai;
    if (excess.real() <= 0.0)
      throw DivergenceError("hyp_pfq: divergent parameter balance at |z| = 1");
  }
  if (std::abs(z) == 0.0) return 1.0;
  return pfq_series(a, b, z, nterms);
}

cplx gauss_2f1_unit(cplx a, cplx b, cplx c) {
  long nterms = termination_length({&a, 1});
  if (nterms < 0) {
    long nb = termination_length({&b, 1});
    if (nb >= 0) nterms = nb;
  }
  if (nterms >= 0) {
    std::array<cplx, 2> as = {a, b};
    std::array<cplx, 1> bs = {c};
    return pfq_series(as, bs, 1.0, nterms);
  }
  if ((c - a - b).real() <= 0.0)
    throw DivergenceError("gauss_2f1_unit: 2F1 at z = 1 requires Re(c-a-b) > 0");
  return gamma(c) * gamma(c - a - b) / (gamma(c - a) * gamma(c - b));
}

cplx hyp2f1(cplx a, cplx b, cplx c, double z) {
  std::array<cplx, 2> as = {a, b};
  std::array<cplx, 1> bs = {c};
  long nterms = termination_length(as);
  if (nterms >= 0) return pfq_series(as, bs, z, nterms);
  if (std::abs(c - b) < 1e-12) return std::pow(cplx(1.0 - z), -a);
  if (std::abs(c - a) < 1e-12) return std::pow(cplx(1.0 - z), -b);
  if (is_nonpositive_integer(c - a) || is_nonpositive_integer(c - b)) {
    // Euler transformation turns these into terminating series
    std::array<cplx, 2> at = {c - a, c - b};
    long nt = termination_length(at);
    return std::pow(cplx(1.0 - z), c - a - b) * pfq_series(at, bs, z, nt);
  }
  if (z == 1.0) return gauss_2f1_unit(a, b, c);
  if (z < 0.0 || z > 1.0)
    throw DivergenceError("hyp2f1: argument outside [0, 1] for non-terminating series");
  if (z <= 0.6) return pfq_series(as, bs, z, -1);

  cplx cab = c - a - b;
  double w = 1.0 - z;
  if (std::abs(cab.imag()) > 1e-10 ||
      std::abs(cab.real() - std::round(cab.real())) > 1e-8) {
    // connection formula at 1-z (Abramowitz & Stegun 15.3.6)
    std::array<cplx, 2> a1 = {a, b};
    std::array<cplx, 1> b1 = {a + b - c + 1.0};
    std::array<cplx, 2> a2 = {c - a, c - b};
    std::array<cplx, 1> b2 = {cab + 1.0};
    cplx f1 = gamma(c) * gamma(cab) / (gamma(c - a) * gamma(c - b)) *
              pfq_series(a1, b1, w, -1);
    cplx f2 = gamma(c) * gamma(-cab) / (gamma(a) * gamma(b)) *
              std::pow(cplx(w), cab) * pfq_series(a2, b2, w, -1);
    return f1 + f2;
  }
  // degenerate integer c-a-b and non-terminating: fall back on the raw
  // series, which still converges for z < 1 (slowly near 1)
  if (z > 0.999)
    throw DivergenceError("hyp2f1: integer c-a-b too close to z = 1");
  return pfq_series(as, bs, z, -1);
}

cplx saalschutz_3f2(unsigned n, cplx b, cplx c, cplx d, const cplx* e_check) {
  if (e_check) {
    cplx e = *e_check;
    cplx balance = -double(n) + b + c + 1.0 - (d + e);
    if (std::abs(balance) > 1e-10)
      throw BalanceError("saalschutz_3f2: parameters violate -n+b+c+1 = d+e");
  }
  cplx den = pochhammer(d, n) * pochhammer(d - b - c, n);
  if (std::abs(den) < 1e-300)
    throw PoleError("saalschutz_3f2: degenerate denominator Pochhammer");
  return pochhammer(d - b, n) * pochhammer(d - c, n) / den;
}

cplx legendre_p(cplx nu, cplx mu, double z) {
  cplx one_minus_mu = 1.0 - mu;
  if (is_nonpositive_integer(one_minus_mu))
    throw PoleError("legendre_p: 1-mu is a nonpositive integer");
  cplx pref = recip_gamma(one_minus_mu) *
              std::pow(cplx((1.0 + z) / (1.0 - z)), mu / 2.0);
  return pref * hyp2f1(-nu, nu + 1.0, one_minus_mu, (1.0 - z) / 2.0);
}

double sech_moment(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("sech_moment: r must be positive");
  return std::sqrt(kPi) * gamma(cplx(r / 2.0)).real() /
         gamma(cplx((r + 1.0) / 2.0)).real();
}

double sech_fourier(double r, double alpha) {
  if (!(r > 0.0)) throw std::invalid_argument("sech_fourier: r must be positive");
  cplx g = gamma(cplx(r / 2.0, alpha / 2.0));
  return std::pow(2.0, r - 1.0) * std::norm(g) / gamma(cplx(r)).real();
}

}  // namespace cnls::specfun
