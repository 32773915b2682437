#pragma once

#include <complex>
#include <span>
#include <stdexcept>

// Self-contained special-function kernel: complex Gamma, rising factorials,
// hypergeometric series, associated Legendre functions, and the sech-power
// moment/Fourier integrals that back every closed-form evaluation in the
// bifurcation and spectral modules.

namespace cnls::specfun {

using cplx = std::complex<double>;

struct PoleError : std::domain_error {
  using std::domain_error::domain_error;
};
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BalanceError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// True when z is within tol of a nonpositive integer (a Gamma pole).
bool is_nonpositive_integer(cplx z, double tol = 1e-12);

// Gamma(z) by the Lanczos approximation (g = 7, 9 coefficients), reflected
// for Re z < 1/2. Throws PoleError within 1e-14 of a pole.
cplx gamma(cplx z);

// 1/Gamma(z): entire, returns exactly 0 at nonpositive integers.
cplx recip_gamma(cplx z);

// Rising factorial (x)_j by direct product, exact at negative integers.
cplx pochhammer(cplx x, unsigned j);

// Generalized hypergeometric sum pFq(a; b; z). Terminating series (some
// numerator parameter a nonpositive integer) are summed exactly for any z;
// otherwise |z| < 1 is required and the series is summed until the running
// term drops below 1e-16 of the partial sum, capped at 1e5 terms.
cplx hyp_pfq(std::span<const cplx> a, std::span<const cplx> b, cplx z);

// Gauss 2F1 on the real segment z in [0, 1]. Terminating series work for
// any z; z = 1 uses Gauss's summation theorem; z in (0.6, 1) uses the
// standard 1-z connection formula when c-a-b is not an integer.
cplx hyp2f1(cplx a, cplx b, cplx c, double z);

// 2F1(a, b; c; 1) by Gauss's theorem; requires Re(c-a-b) > 0 unless the
// series terminates.
cplx gauss_2f1_unit(cplx a, cplx b, cplx c);

// Saalschutz's theorem for the balanced terminating 3F2(-n, b, c; d, e; 1)
// with e = -n + b + c + 1 - d. If e_check is supplied it must satisfy the
// balance condition to 1e-10 or BalanceError is thrown.
cplx saalschutz_3f2(unsigned n, cplx b, cplx c, cplx d,
                    const cplx* e_check = nullptr);

// Associated Legendre function of the first kind P^mu_nu(z), z in (-1, 1),
// via its 2F1 representation. Throws PoleError when 1-mu is a nonpositive
// integer.
cplx legendre_p(cplx nu, cplx mu, double z);

// K_r = Integral of sech^r x over the line = sqrt(pi) Gamma(r/2) / Gamma((r+1)/2).
double sech_moment(double r);

// K_r(alpha) = Integral of e^{-i alpha x} sech^r x = 2^{r-1} |Gamma((r+i alpha)/2)|^2 / Gamma(r).
double sech_fourier(double r, double alpha);

}  // namespace cnls::specfun
