#pragma once

// Odd Jacobi theta function theta_1(u | tau) and its u-derivatives, by the
// Fourier series
//
//   theta_1(u) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) u),  q = e^{i pi tau}.
//
// The series converges for Im tau > 0 and every complex u; callers keep
// |Im u| <= pi Im(tau) / 2 so the terms decay from the first one.

#include <cmath>
#include <complex>
#include <numbers>

#include "vortex/errors.hpp"

namespace vortex {

using cplx = std::complex<double>;

struct ThetaJet {
  cplx value;
  cplx d1;
  cplx d2;
  cplx d3;
  int terms = 0;
};

struct ThetaOptions {
  int min_terms = 8;
  int extra_terms = 0;
  double rel_tol = 1e-16;
  int max_terms = 400;
};

/// theta_1 and its first three u-derivatives at u.
inline ThetaJet theta1_jet(cplx u, cplx tau, const ThetaOptions& opt = {}) {
  using std::numbers::pi;
  if (!(tau.imag() > 0.0)) throw DomainError("theta1: Im(tau) must be positive");
  ThetaJet out;
  const cplx i_pi_tau = cplx(0.0, pi) * tau;
  const double abs_im_u = std::abs(u.imag());
  double first_bound = 0.0;
  int extra_left = opt.extra_terms;
  for (int n = 0; n < opt.max_terms; ++n) {
    const double m = 2.0 * n + 1.0;
    const double half = n + 0.5;
    const cplx qn = std::exp(i_pi_tau * (half * half));
    const double bound = std::abs(qn) * std::cosh(m * abs_im_u) * m * m * m;
    if (n == 0) first_bound = bound;
    if (n >= opt.min_terms && bound < opt.rel_tol * first_bound) {
      if (extra_left-- <= 0) break;
    }
    const cplx s = std::sin(m * u);
    const cplx c = std::cos(m * u);
    const cplx coef = (n % 2 == 0 ? 2.0 : -2.0) * qn;
    out.value += coef * s;
    out.d1 += coef * m * c;
    out.d2 -= coef * m * m * s;
    out.d3 -= coef * m * m * m * c;
    out.terms = n + 1;
  }
  return out;
}

inline cplx theta1(cplx u, cplx tau) { return theta1_jet(u, tau).value; }

}  // namespace vortex
