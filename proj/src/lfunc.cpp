#include "lkernel/lfunc.hpp"

#include <cmath>

#include "lkernel/quadrature.hpp"
#include "lkernel/specfun.hpp"

namespace lkernel::lfunc {

using specfun::principal_pow;
using specfun::upper_incomplete_gamma;

cplx lstar(const Eigenform& f, const cplx& s, const LStarSeriesParams& p) {
    if (p.n_terms < 1 || p.n_terms > f.prec())
        throw precision_error("lstar: n_terms exceeds available coefficients");
    const int k = f.weight;
    const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
    const cplx ks = cplx(static_cast<double>(k), 0.0) - s;
    KahanSumC sum;
    for (int n = 1; n <= p.n_terms; ++n) {
        double x = two_pi * n;
        cplx term = principal_pow(cplx(x, 0.0), -s) * upper_incomplete_gamma(s, x, p.budget) +
                    sign * principal_pow(cplx(x, 0.0), s - cplx(static_cast<double>(k), 0.0)) *
                        upper_incomplete_gamma(ks, x, p.budget);
        sum.add(f.a(n) * term);
    }
    return sum.value();
}

cplx period(const Eigenform& f, int n, const LStarSeriesParams& p) {
    if (n < 0 || n > f.weight - 2)
        throw domain_error("period: n must satisfy 0 <= n <= k - 2");
    return lstar(f, cplx(n + 1.0, 0.0), p);
}

cplx eval_form(const Eigenform& f, double x, double y) {
    // Horner in q = e^{2 pi i (x + iy)}
    cplx q = std::exp(cplx(-two_pi * y, two_pi * x));
    cplx acc(0.0, 0.0);
    for (int n = f.prec(); n >= 1; --n) acc = (acc + f.a(n)) * q;
    return acc;
}

namespace {

double norm_on_grid(const Eigenform& f, const PeterssonQuadParams& q) {
    const int k = f.weight;
    std::vector<double> xn, xw, yn, yw;
    quad::gauss_legendre(q.nx, xn, xw);
    quad::gauss_legendre(q.ny, yn, yw);

    KahanSum total;
    for (int ix = 0; ix < q.nx; ++ix) {
        double x = 0.5 * xn[ix];  // [-1/2, 1/2]
        double y0 = std::sqrt(1.0 - x * x);
        // Panels sized to the e^{-4 pi y} decay of |f|^2.
        const double panel_h = 1.0 / (2.0 * pi);
        KahanSum column;
        for (double a = y0; a < q.y_max; a += panel_h) {
            double b = std::min(a + panel_h, q.y_max);
            double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (int iy = 0; iy < q.ny; ++iy) {
                double y = mid + half * yn[iy];
                double fv = std::norm(eval_form(f, x, y));
                column.add(half * yw[iy] * fv * std::pow(y, k - 2));
            }
        }
        total.add(0.5 * xw[ix] * column.value());
    }
    return total.value();
}

}  // namespace

NormResult petersson_norm(const Eigenform& f, const PeterssonQuadParams& q) {
    q.validate();
    double coarse = norm_on_grid(f, q);
    PeterssonQuadParams fine = q;
    fine.nx = q.nx + q.nx / 2;
    fine.ny = q.ny + q.ny / 2;
    double refined = norm_on_grid(f, fine);
    if (!(refined > 0.0))
        throw accuracy_error("petersson_norm: non-positive quadrature value");
    double rel = std::abs(refined - coarse) / refined;
    return {refined, rel};
}

}  // namespace lkernel::lfunc
