#include "lkernel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace lkernel::quad {

namespace {

// Kronrod-15 abscissae (positive half) and weights; Gauss-7 weights.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
    double a, b;
    cplx value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate_panel(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    cplx fc = f(center);
    cplx result_gauss = kWg[3] * fc;
    cplx result_kronrod = kWgk[7] * fc;
    for (int j = 0; j < 7; ++j) {
        double x = half * kXgk[j];
        cplx fsum = f(center - x) + f(center + x);
        result_kronrod += kWgk[j] * fsum;
        if (j % 2 == 1) result_gauss += kWg[j / 2] * fsum;
    }
    result_gauss *= half;
    result_kronrod *= half;
    double err = std::abs(result_kronrod - result_gauss);
    // Standard QUADPACK-style sharpening of the raw difference.
    if (err > 0.0) err = std::pow(200.0 * err, 1.5);
    double scale = std::abs(result_kronrod);
    if (scale > 0.0 && err > scale) err = scale;
    return {a, b, result_kronrod, err};
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, double abs_tol,
                 double rel_tol, int max_panels) {
    std::priority_queue<Panel> panels;
    panels.push(evaluate_panel(f, a, b));
    cplx total = panels.top().value;
    double total_err = panels.top().error;
    int n = 1;
    while (total_err > abs_tol + rel_tol * std::abs(total)) {
        if (n >= max_panels)
            throw accuracy_error("quad::integrate: panel budget exhausted", total_err);
        Panel worst = panels.top();
        panels.pop();
        double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            throw accuracy_error("quad::integrate: interval too small to bisect", total_err);
        Panel left = evaluate_panel(f, worst.a, mid);
        Panel right = evaluate_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++n;
    }
    return {total, total_err};
}

Result integrate_zero_inf(const Integrand& f, double abs_tol, double rel_tol,
                          double split) {
    Result lower = integrate(f, 0.0, split, 0.5 * abs_tol, 0.5 * rel_tol);
    // t = split/u maps (0,1] to [split, inf); dt = -split/u^2 du.
    auto mapped = [&](double u) -> cplx {
        double t = split / u;
        return f(t) * (split / (u * u));
    };
    Result upper = integrate(mapped, 0.0, 1.0, 0.5 * abs_tol, 0.5 * rel_tol);
    return {lower.value + upper.value, lower.error + upper.error};
}

Result integrate_line(const Integrand& f, double abs_tol, double rel_tol,
                      double split) {
    Result pos = integrate_zero_inf(f, 0.5 * abs_tol, 0.5 * rel_tol, split);
    auto neg = [&](double t) -> cplx { return f(-t); };
    Result negr = integrate_zero_inf(neg, 0.5 * abs_tol, 0.5 * rel_tol, split);
    return {pos.value + negr.value, pos.error + negr.error};
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration from the Chebyshev-based initial guess.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

}  // namespace lkernel::quad
