#pragma once

#include <functional>
#include <vector>

#include "lkernel/numeric.hpp"

namespace lkernel::quad {

using Integrand = std::function<cplx(double)>;

struct Result {
    cplx value;
    double error = 0.0;  // absolute error estimate
};

/// Adaptive Gauss-Kronrod (G7, K15) on a finite interval.  Bisects the
/// worst panel until the summed error estimate is below
/// abs_tol + rel_tol * |value|, or max_panels is reached (accuracy_error).
Result integrate(const Integrand& f, double a, double b, double abs_tol,
                 double rel_tol = 0.0, int max_panels = 4000);

/// Integral over (0, inf): split at `split`, the upper piece mapped by
/// t = split/u onto (0, 1].  Suited to integrands with algebraic decay.
Result integrate_zero_inf(const Integrand& f, double abs_tol,
                          double rel_tol = 0.0, double split = 1.0);

/// Integral over the whole real line via two half-line integrals.
Result integrate_line(const Integrand& f, double abs_tol,
                      double rel_tol = 0.0, double split = 1.0);

/// Non-adaptive tensor rule helper: Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace lkernel::quad
