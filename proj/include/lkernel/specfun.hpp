#pragma once

#include "lkernel/numeric.hpp"

namespace lkernel::specfun {

/// Argument in the half-open principal branch (-pi, pi]; arg(-1) = +pi.
double principal_arg(const cplx& z);

/// z^w = exp(w log z) on the principal branch.  Throws domain_error for z = 0.
cplx principal_pow(const cplx& z, const cplx& w);

/// Gamma via a 15-term Lanczos approximation (g = 607/128) with reflection
/// for Re z < 1/2.  Poles at nonpositive integers throw pole_error.
cplx gamma(const cplx& z);
cplx log_gamma(const cplx& z);

/// Riemann zeta.  Eta (alternating-series) acceleration for Re s >= 1/2,
/// reflection through the functional equation below.  Pole at s = 1.
cplx zeta(const cplx& s);

/// The two independent internal routes, exposed so agreement can be checked.
cplx zeta_eta(const cplx& s);
cplx zeta_euler_maclaurin(const cplx& s);

/// Hurwitz zeta(z, a) for a > 0 by Euler-Maclaurin.  Requires z != 1.
cplx hurwitz_zeta(const cplx& z, double a);

/// Upper incomplete Gamma(s, x), x > 0: continued fraction for
/// x >= |s| + 1, series through the lower function otherwise.
cplx upper_incomplete_gamma(const cplx& s, double x,
                            const AccuracyBudget& budget = {});

/// Rising factorial (z)_m.  Exact zero when z is a nonpositive integer
/// with -z < m.
cplx pochhammer(const cplx& z, int m);

/// 2F1(a, b; c; z) for real z in (0, 1/2], by the defining series with a
/// geometric tail bound.
cplx gauss_2f1(const cplx& a, const cplx& b, const cplx& c, double z,
               const AccuracyBudget& budget = {});

}  // namespace lkernel::specfun
