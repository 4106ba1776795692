#include "lkernel/specfun.hpp"

#include <array>
#include <cmath>

namespace lkernel::specfun {

double principal_arg(const cplx& z) {
    // atan2 returns -pi for (-x, -0.0); the branch here is half-open at -pi.
    if (z.imag() == 0.0 && z.real() < 0.0) return pi;
    double a = std::atan2(z.imag(), z.real());
    if (a <= -pi) a = pi;
    return a;
}

cplx principal_pow(const cplx& z, const cplx& w) {
    if (z == cplx(0.0, 0.0))
        throw domain_error("principal_pow: base is zero");
    if (w == cplx(0.0, 0.0)) return {1.0, 0.0};
    cplx logz(std::log(std::abs(z)), principal_arg(z));
    return std::exp(w * logz);
}

namespace {

// Lanczos coefficients, g = 607/128, n = 15 (Godfrey's set).
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

bool is_nonpositive_integer(const cplx& z) {
    return z.imag() == 0.0 && z.real() <= 0.0 &&
           z.real() == std::floor(z.real());
}

// Valid for Re z >= 1/2.
cplx lanczos_gamma(const cplx& z) {
    cplx sum(kLanczos[0], 0.0);
    for (int i = 1; i < static_cast<int>(kLanczos.size()); ++i)
        sum += kLanczos[i] / (z + cplx(i - 1.0, 0.0));
    cplx base = z + cplx(kLanczosG - 0.5, 0.0);
    return std::sqrt(two_pi) * std::exp((z - cplx(0.5, 0.0)) * std::log(base) - base) * sum;
}

cplx lanczos_log_gamma(const cplx& z) {
    cplx sum(kLanczos[0], 0.0);
    for (int i = 1; i < static_cast<int>(kLanczos.size()); ++i)
        sum += kLanczos[i] / (z + cplx(i - 1.0, 0.0));
    cplx base = z + cplx(kLanczosG - 0.5, 0.0);
    return 0.5 * std::log(two_pi) + (z - cplx(0.5, 0.0)) * std::log(base) - base +
           std::log(sum);
}

}  // namespace

cplx gamma(const cplx& z) {
    if (is_nonpositive_integer(z))
        throw pole_error("gamma: pole at nonpositive integer");
    if (z.real() >= 0.5) return lanczos_gamma(z);
    // Reflection: Gamma(z) = pi / (sin(pi z) Gamma(1 - z)).
    cplx s = std::sin(pi * z);
    return pi / (s * lanczos_gamma(cplx(1.0, 0.0) - z));
}

cplx log_gamma(const cplx& z) {
    if (is_nonpositive_integer(z))
        throw pole_error("log_gamma: pole at nonpositive integer");
    if (z.real() >= 0.5) return lanczos_log_gamma(z);
    cplx s = std::sin(pi * z);
    return std::log(cplx(pi, 0.0)) - std::log(s) -
           lanczos_log_gamma(cplx(1.0, 0.0) - z);
}

namespace {

// Bernoulli numbers B_2, B_4, ..., B_20.
constexpr std::array<double, 10> kBernoulli2j = {
    1.0 / 6.0,      -1.0 / 30.0,     1.0 / 42.0,      -1.0 / 30.0,
    5.0 / 66.0,     -691.0 / 2730.0, 7.0 / 6.0,       -3617.0 / 510.0,
    43867.0 / 798.0, -174611.0 / 330.0,
};

cplx pow_real_base(double x, const cplx& w) {
    // x > 0
    return std::exp(w * std::log(x));
}

}  // namespace

cplx zeta_euler_maclaurin(const cplx& s) {
    if (s == cplx(1.0, 0.0)) throw pole_error("zeta: pole at s = 1");
    return hurwitz_zeta(s, 1.0);
}

cplx zeta_eta(const cplx& s) {
    if (s == cplx(1.0, 0.0)) throw pole_error("zeta: pole at s = 1");
    // P. Borwein's algorithm 2 for the Dirichlet eta function.
    const int n = 64;
    // d_k = n * sum_{i=0}^{k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    // Tracking n * term keeps the i = 0 entry at exactly 1; successive
    // ratios are 4 (n+i-1)(n-i+1) / ((2i)(2i-1)).
    std::array<double, n + 1> d{};
    double term = 1.0;
    double acc = 1.0;
    d[0] = acc;
    for (int i = 1; i <= n; ++i) {
        term *= 4.0 * (n + i - 1.0) * (n - i + 1.0) / ((2.0 * i) * (2.0 * i - 1.0));
        acc += term;
        d[i] = acc;
    }
    KahanSumC sum;
    double sign = 1.0;
    for (int k = 0; k < n; ++k) {
        sum.add(sign * (d[k] - d[n]) * pow_real_base(k + 1.0, -s));
        sign = -sign;
    }
    cplx denom = cplx(1.0, 0.0) - pow_real_base(2.0, cplx(1.0, 0.0) - s);
    return -sum.value() / (d[n] * denom);
}

cplx zeta(const cplx& s) {
    if (s == cplx(1.0, 0.0)) throw pole_error("zeta: pole at s = 1");
    if (s.real() >= 0.5) return zeta_eta(s);
    // Functional equation: zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1-s) zeta(1-s).
    cplx one_minus_s = cplx(1.0, 0.0) - s;
    return pow_real_base(2.0, s) * pow_real_base(pi, s - cplx(1.0, 0.0)) *
           std::sin(0.5 * pi * s) * gamma(one_minus_s) * zeta_eta(one_minus_s);
}

cplx hurwitz_zeta(const cplx& z, double a) {
    if (z == cplx(1.0, 0.0)) throw pole_error("hurwitz_zeta: pole at z = 1");
    if (!(a > 0.0)) throw domain_error("hurwitz_zeta: requires a > 0");
    // Shift until the asymptotic tail at a + N is accurate.
    double target = 18.0 + 0.5 * std::abs(z.imag());
    int N = 0;
    if (a < target) N = static_cast<int>(std::ceil(target - a));
    KahanSumC head;
    for (int n = 0; n < N; ++n) head.add(pow_real_base(a + n, -z));
    double x = a + N;
    cplx xmz = pow_real_base(x, -z);
    cplx result = head.value();
    result += pow_real_base(x, cplx(1.0, 0.0) - z) / (z - cplx(1.0, 0.0));
    result += 0.5 * xmz;
    // Euler-Maclaurin correction terms.
    cplx poch = z;  // (z)_{2j-1} built incrementally
    double x2 = x * x;
    double xp = x;  // x^(2j-1)
    for (std::size_t j = 1; j <= kBernoulli2j.size(); ++j) {
        double fact = 1.0;
        for (int i = 2; i <= static_cast<int>(2 * j); ++i) fact *= i;
        result += kBernoulli2j[j - 1] / fact * poch * xmz / xp;
        poch *= (z + cplx(2.0 * j - 1.0, 0.0)) * (z + cplx(2.0 * j, 0.0));
        xp *= x2;
    }
    return result;
}

cplx upper_incomplete_gamma(const cplx& s, double x, const AccuracyBudget& budget) {
    budget.validate();
    if (!(x > 0.0)) throw domain_error("upper_incomplete_gamma: requires x > 0");
    if (x >= std::abs(s) + 1.0) {
        // Continued fraction (modified Lentz):
        // Gamma(s,x) = e^{-x} x^s / (x + 1 - s - 1(1-s)/(x + 3 - s - ...))
        const double tiny = 1e-300;
        cplx b = cplx(x + 1.0, 0.0) - s;
        cplx c = cplx(1.0 / tiny, 0.0);
        cplx d = 1.0 / b;
        cplx h = d;
        for (int i = 1; i <= budget.max_terms; ++i) {
            cplx an = -static_cast<double>(i) * (cplx(static_cast<double>(i), 0.0) - s);
            b += cplx(2.0, 0.0);
            d = an * d + b;
            if (std::abs(d) < tiny) d = cplx(tiny, 0.0);
            c = b + an / c;
            if (std::abs(c) < tiny) c = cplx(tiny, 0.0);
            d = 1.0 / d;
            cplx delta = d * c;
            h *= delta;
            if (std::abs(delta - cplx(1.0, 0.0)) < 0.25 * budget.rel_tol)
                return std::exp(-x + s * std::log(x)) * h;
        }
        throw accuracy_error("upper_incomplete_gamma: continued fraction did not converge");
    }
    // Series for the lower function:
    // gamma(s,x) = x^s e^{-x} sum_{n>=0} x^n / (s (s+1) ... (s+n))
    // then Gamma(s,x) = Gamma(s) - gamma(s,x).
    cplx denom = s;
    cplx term = 1.0 / s;
    KahanSumC sum;
    sum.add(term);
    for (int n = 1; n <= budget.max_terms; ++n) {
        denom += cplx(1.0, 0.0);
        term *= x / denom;
        sum.add(term);
        if (std::abs(term) < budget.rel_tol * std::abs(sum.value()) + budget.abs_tol * 1e-4) {
            cplx lower = std::exp(-x + s * std::log(x)) * sum.value();
            return gamma(s) - lower;
        }
    }
    throw accuracy_error("upper_incomplete_gamma: series did not converge");
}

cplx pochhammer(const cplx& z, int m) {
    if (m < 0) throw domain_error("pochhammer: m must be nonnegative");
    cplx prod(1.0, 0.0);
    for (int i = 0; i < m; ++i) {
        cplx factor = z + cplx(static_cast<double>(i), 0.0);
        if (factor == cplx(0.0, 0.0)) return {0.0, 0.0};
        prod *= factor;
    }
    return prod;
}

cplx gauss_2f1(const cplx& a, const cplx& b, const cplx& c, double z,
               const AccuracyBudget& budget) {
    budget.validate();
    if (is_nonpositive_integer(c))
        throw domain_error("gauss_2f1: c is a nonpositive integer");
    if (!(z > 0.0 && z <= 0.5))
        throw domain_error("gauss_2f1: z must lie in (0, 1/2]");
    KahanSumC sum;
    cplx term(1.0, 0.0);
    sum.add(term);
    for (int m = 0; m < budget.max_terms; ++m) {
        double dm = static_cast<double>(m);
        term *= (a + dm) * (b + dm) / ((c + dm) * (dm + 1.0)) * z;
        sum.add(term);
        // Beyond index m the term ratio is bounded by rho once the parameter
        // ratios settle; the remaining tail is below |term| rho/(1-rho).
        double rho = z * std::abs((a + dm + 1.0) * (b + dm + 1.0) /
                                  ((c + dm + 1.0) * (dm + 2.0)));
        if (rho < 1.0 && std::abs(term) * rho / (1.0 - rho) < budget.abs_tol &&
            std::abs(term) < budget.abs_tol)
            return sum.value();
    }
    throw accuracy_error("gauss_2f1: series did not converge within max_terms");
}

}  // namespace lkernel::specfun
