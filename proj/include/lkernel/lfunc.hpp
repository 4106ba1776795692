#pragma once

#include "lkernel/modforms.hpp"
#include "lkernel/numeric.hpp"

namespace lkernel::lfunc {

using modforms::Eigenform;

struct LStarSeriesParams {
    int n_terms = 48;
    AccuracyBudget budget{};
};

struct PeterssonQuadParams {
    double y_max = 12.0;
    int nx = 32;
    int ny = 16;

    void validate() const {
        if (!(y_max >= 2.0) || nx < 8 || ny < 8)
            throw std::invalid_argument("PeterssonQuadParams: y_max >= 2, nx, ny >= 8");
    }
};

struct NormResult {
    double value = 0.0;
    double rel_error = 0.0;  // estimate from grid refinement
};

/// Completed L-value L*(f, s) by the incomplete-gamma series split at t = 1;
/// valid for any complex s.
cplx lstar(const Eigenform& f, const cplx& s, const LStarSeriesParams& p = {});

/// n-th period r_n(f) = L*(f, n + 1), 0 <= n <= k - 2.
cplx period(const Eigenform& f, int n, const LStarSeriesParams& p = {});

/// f(x + iy) from the truncated Fourier expansion.
cplx eval_form(const Eigenform& f, double x, double y);

/// Petersson norm <f, f> over the standard fundamental domain, by tensor
/// Gauss-Legendre in x and decay-scaled panels in y, truncated at y_max.
NormResult petersson_norm(const Eigenform& f, const PeterssonQuadParams& q = {});

}  // namespace lkernel::lfunc
