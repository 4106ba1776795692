#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "lkernel/kernel.hpp"
#include "lkernel/lfunc.hpp"
#include "lkernel/modforms.hpp"
#include "lkernel/quadrature.hpp"
#include "lkernel/specfun.hpp"

using lkernel::cplx;
using lkernel::pi;
using lkernel::two_pi;
namespace kn = lkernel::kernel;
namespace sf = lkernel::specfun;

namespace {
double rel(const cplx& got, const cplx& want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}
}  // namespace

TEST_CASE("parameter validation") {
    CHECK(kn::check_params(12, cplx(7.5, 0.0), cplx(3.5, 0.0)).empty());
    CHECK(kn::check_params(8, cplx(3.6, 0.7), cplx(1.4, -0.7)).empty());
    CHECK_NOTHROW(kn::validate_params(12, cplx(6.8, 1.2), cplx(4.2, -1.2)));

    // k = 4: no (s, s') satisfies all conditions at once.
    CHECK_FALSE(kn::check_params(4, cplx(2.0, 0.0), cplx(1.0, 0.0)).empty());
    CHECK_THROWS_AS(kn::validate_params(4, cplx(2.0, 0.0), cplx(1.0, 0.0)),
                    lkernel::validation_error);

    // s + s' even.
    CHECK_FALSE(kn::check_params(12, cplx(7.0, 0.0), cplx(3.0, 0.0)).empty());
    // s + s' not real.
    CHECK_FALSE(kn::check_params(12, cplx(7.5, 1.0), cplx(3.5, 0.5)).empty());
    // Re s <= Re s' + 1.
    CHECK_FALSE(kn::check_params(12, cplx(5.6, 0.0), cplx(5.4, 0.0)).empty());
    // Re s' out of (1, k-1).
    CHECK_FALSE(kn::check_params(12, cplx(10.2, 0.0), cplx(0.8, 0.0)).empty());
    // odd k.
    CHECK_FALSE(kn::check_params(13, cplx(7.5, 0.0), cplx(3.5, 0.0)).empty());
}

TEST_CASE("gamma_k and c_k reference values") {
    // gamma_12(2) = e^{i pi} 1! 9! = -362880.
    CHECK(rel(kn::gamma_k(cplx(2.0, 0.0), 12), cplx(-362880.0, 0.0)) < 1e-13);
    // gamma_12(3) = e^{3 i pi / 2} 2! 8! = -80640 i.
    CHECK(rel(kn::gamma_k(cplx(3.0, 0.0), 12), cplx(0.0, -80640.0)) < 1e-13);
    CHECK_THROWS_AS(kn::gamma_k(cplx(-1.0, 0.0), 12), lkernel::domain_error);
    CHECK_THROWS_AS(kn::gamma_k(cplx(12.5, 0.0), 12), lkernel::domain_error);

    CHECK(kn::c_k(12) == doctest::Approx(pi * 3628800.0 / 1024.0).epsilon(1e-14));
    CHECK(kn::c_k(14) == doctest::Approx(-pi * 479001600.0 / 4096.0).epsilon(1e-14));
    CHECK(kn::c_k(8) == doctest::Approx(pi * 720.0 / 64.0).epsilon(1e-14));
}

TEST_CASE("quadruple enumeration: exact small case, count, order") {
    auto q2 = kn::enumerate_quadruples(2);
    REQUIRE(q2.size() == 2);
    CHECK(q2[0] == kn::MatrixQuadruple{1, 1, 1, 2});
    CHECK(q2[1] == kn::MatrixQuadruple{2, 1, 1, 1});

    auto quads = kn::enumerate_quadruples(50);
    long brute = 0;
    for (long a = 1; a <= 50; ++a)
        for (long d = 1; a * d <= 50; ++d)
            for (long b = 1; b <= a * d - 1; ++b)
                for (long c = 1; c <= a * d - 1; ++c)
                    if (a * d - b * c == 1) ++brute;
    CHECK(static_cast<long>(quads.size()) == brute);

    long last_n = 1;
    for (const auto& q : quads) {
        CHECK(q.a * q.d - q.b * q.c == 1);
        CHECK(q.a > 0);
        CHECK(q.b > 0);
        CHECK(q.c > 0);
        CHECK(q.d > 0);
        CHECK(q.a * q.d >= last_n);
        last_n = q.a * q.d;
    }
}

TEST_CASE("hyper_sum is exactly zero for integer s' in the vanishing window") {
    auto p = kn::validate_params(12, cplx(7.0, 0.0), cplx(2.0, 0.0));
    auto h = kn::hyper_sum(p);
    CHECK(h.value == cplx(0.0, 0.0));
    CHECK(h.tail_correction == cplx(0.0, 0.0));
    CHECK(h.err_bound == 0.0);
}

TEST_CASE("hyper_sum is stable under truncation changes") {
    auto p = kn::validate_params(8, cplx(3.6, 0.0), cplx(1.4, 0.0));
    lkernel::AccuracyBudget loose{1e-6, 1e-6, 100000};
    auto h300 = kn::hyper_sum(p, 300, loose);
    auto h400 = kn::hyper_sum(p, 400, loose);
    CHECK(std::abs(h300.value - h400.value) < 1e-7);
    // The analytic completion is a large fraction of the truncated sum here;
    // the shell decay is only N^{-0.4} cumulative.
    CHECK(std::abs(h400.tail_correction) > 1e-3);
}

TEST_CASE("corollary 2 residual at a real k=14 point") {
    auto p = kn::validate_params(14, cplx(6.5, 0.0), cplx(2.5, 0.0));
    auto r = kn::corollary2_residual(p);
    CHECK(r.residual < 1e-8);
    CHECK_THROWS_AS(
        kn::corollary2_residual(kn::validate_params(12, cplx(7.5, 0.0), cplx(3.5, 0.0))),
        lkernel::domain_error);
}

TEST_CASE("a_term oracle: closed form equals Lipschitz quadrature") {
    auto p = kn::validate_params(12, cplx(6.5, 0.0), cplx(2.5, 0.0));
    auto o = kn::a_term_oracle(p);
    CHECK(o.residual() < 1e-8);
}

TEST_CASE("a_term oracle flags unconverged truncation on the band edge") {
    // At s + s' = k - 1 the direct route's n-tail decays only like 1/n_cut,
    // so a tight budget must be reported as unreachable, not as disagreement.
    auto p = kn::validate_params(12, cplx(7.5, 0.0), cplx(3.5, 0.0));
    CHECK_THROWS_AS(kn::a_term_oracle(p), lkernel::accuracy_error);
}

TEST_CASE("c = 0 family oracle") {
    for (auto [s, sp] : {std::pair{cplx(7.5, 0.0), cplx(3.5, 0.0)},
                         {cplx(6.8, 1.2), cplx(4.2, -1.2)}}) {
        auto p = kn::validate_params(12, s, sp);
        CAPTURE(s.imag());
        CHECK(kn::c_zero_term_oracle(p).residual() < 1e-8);
    }
}

TEST_CASE("per-matrix oracle on small matrices") {
    auto p = kn::validate_params(12, cplx(7.5, 0.0), cplx(3.5, 0.0));
    for (const auto& q : {kn::MatrixQuadruple{1, 1, 1, 2}, {2, 1, 1, 1},
                          {1, 1, 2, 3}, {3, 1, 2, 1}}) {
        CAPTURE(q.a);
        CAPTURE(q.d);
        CHECK(kn::per_matrix_oracle(q, p).residual() < 1e-8);
    }
    CHECK_THROWS_AS(kn::per_matrix_oracle({1, 1, 1, 3}, p), lkernel::domain_error);
    CHECK_THROWS_AS(kn::per_matrix_oracle({-1, 1, 1, 0}, p), lkernel::domain_error);
}

TEST_CASE("Lipschitz summation formula") {
    // sum_{m in Z} (m + it)^{-s} = ((-2 pi i)^s / Gamma(s)) sum_{n>=1}
    //   n^{s-1} e^{-2 pi n t}, for t > 0.
    const cplx s(3.2, 0.4);
    const double t = 1.0;
    lkernel::KahanSumC lhs;
    const int M = 40000;
    for (int m = -M; m <= M; ++m)
        lhs.add(sf::principal_pow(cplx(static_cast<double>(m), t), -s));
    lkernel::KahanSumC rhs;
    for (int n = 1; n <= 60; ++n)
        rhs.add(std::exp((s - cplx(1.0, 0.0)) * std::log(static_cast<double>(n))) *
                std::exp(-two_pi * n * t));
    cplx pref = sf::principal_pow(cplx(0.0, -two_pi), s) / sf::gamma(s);
    CHECK(std::abs(lhs.value() - pref * rhs.value()) < 1e-7);
}

TEST_CASE("beta-type integrals against closed forms") {
    // int_0^inf t^{c-1} (1 + t)^{-(a+c)} dt = B(c, a).
    auto f1 = [](double t) -> cplx {
        return {std::pow(t, 0.5) / std::pow(1.0 + t, 4.0), 0.0};
    };
    auto r1 = lkernel::quad::integrate_zero_inf(f1, 1e-12, 1e-12, 1.0);
    double b_want = (std::tgamma(1.5) * std::tgamma(2.5)) / std::tgamma(4.0);
    CHECK(std::abs(r1.value.real() - b_want) < 1e-10);
    CHECK(b_want == doctest::Approx(pi / 16.0).epsilon(1e-14));

    // Rotated weight: int_0^inf t^{b-1} (1 + beta t)^{-a} dt
    //   = beta^{-b} B(b, a - b) for Re beta > 0.
    const cplx beta(1.0, -1.0), b(1.5, 0.0), a(4.0, 0.0);
    auto f2 = [&](double t) -> cplx {
        return sf::principal_pow(cplx(t, 0.0), b - cplx(1.0, 0.0)) *
               sf::principal_pow(cplx(1.0, 0.0) + beta * t, -a);
    };
    auto r2 = lkernel::quad::integrate_zero_inf(f2, 1e-12, 1e-12, 1.0);
    cplx want = sf::principal_pow(beta, -b) * sf::gamma(b) * sf::gamma(a - b) /
                sf::gamma(a);
    CHECK(std::abs(r2.value - want) < 1e-10);
}

TEST_CASE("kernel sum: fold identity on the truncated representative set") {
    // The truncated set is closed under z -> -1/z, so
    //   int_{1/8}^{1} R(it) t^{s'-1} dt = i^k int_1^8 R(it) t^{k-s'-1} dt
    // exactly (up to quadrature error).
    const int k = 12, m_max = 25;
    const cplx s(7.5, 0.0), sp(3.5, 0.0);
    kn::KernelSummator R(k, s, m_max);
    const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
    auto lhs = lkernel::quad::integrate(
        [&](double t) -> cplx {
            return R(t) * sf::principal_pow(cplx(t, 0.0), sp - cplx(1.0, 0.0));
        },
        1.0 / 8.0, 1.0, 1e-12, 1e-12, 600);
    auto rhs = lkernel::quad::integrate(
        [&](double t) -> cplx {
            return R(t) * sf::principal_pow(cplx(t, 0.0),
                                            cplx(static_cast<double>(k), 0.0) - sp -
                                                cplx(1.0, 0.0));
        },
        1.0, 8.0, 1e-12, 1e-12, 600);
    CHECK(rel(lhs.value, sign * rhs.value) < 1e-8);
}

TEST_CASE("kernel sum converges as the entry window grows") {
    // The slowest family in the window decays like m_max^{s-k+1}, so
    // successive doublings shrink the change by roughly 2^{k-s-1}.
    const cplx s(7.5, 0.0);
    cplx v30 = kn::kernel_value(s, 12, 1.5, 30);
    cplx v60 = kn::kernel_value(s, 12, 1.5, 60);
    cplx v120 = kn::kernel_value(s, 12, 1.5, 120);
    double d1 = std::abs(v30 - v60) / std::abs(v120);
    double d2 = std::abs(v60 - v120) / std::abs(v120);
    CHECK(d1 < 1e-4);
    CHECK(d2 < d1 / 4.0);
    CHECK_THROWS_AS(kn::kernel_value(s, 12, 0.5, 30), lkernel::domain_error);
}

TEST_CASE("spectral side is symmetric in s and s'") {
    auto forms = lkernel::modforms::eigenbasis(12, 64);
    REQUIRE(forms.size() == 1);
    std::vector<kn::SpectralForm> basis{
        {forms[0], lkernel::lfunc::petersson_norm(forms[0]).value}};
    kn::ParamPoint p{12, cplx(7.5, 0.0), cplx(3.5, 0.0)};
    kn::ParamPoint swapped{12, cplx(3.5, 0.0), cplx(7.5, 0.0)};
    cplx a = kn::spectral_lhs(p, basis);
    cplx b = kn::spectral_lhs(swapped, basis);
    CHECK(rel(a, b) < 1e-12);
}

TEST_CASE("rhs_theorem terms are finite and reproducible") {
    auto p = kn::validate_params(12, cplx(7.5, 0.0), cplx(3.5, 0.0));
    auto t1 = kn::rhs_theorem(p);
    auto t2 = kn::rhs_theorem(p);
    CHECK(lkernel::is_finite(t1.total));
    CHECK(t1.total == t2.total);  // bitwise: fixed-order summation
    CHECK(t1.trunc_error < 1e-8);
}
