#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lkernel/lfunc.hpp"
#include "lkernel/modforms.hpp"
#include "lkernel/quadrature.hpp"
#include "lkernel/specfun.hpp"

using lkernel::cplx;
using lkernel::pi;
using lkernel::two_pi;
namespace lf = lkernel::lfunc;
namespace mf = lkernel::modforms;
namespace sf = lkernel::specfun;

namespace {

mf::Eigenform delta_form(int prec = 64) {
    auto forms = mf::eigenbasis(12, prec);
    REQUIRE(forms.size() == 1);
    return forms[0];
}

double rel(const cplx& got, const cplx& want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

// Independent route: L*(f, s) = int_0^inf f(iy) y^{s-1} dy by quadrature.
cplx lstar_quadrature(const mf::Eigenform& f, const cplx& s) {
    auto integrand = [&](double y) -> cplx {
        if (y <= 0.0) return {0.0, 0.0};
        return lf::eval_form(f, 0.0, y) *
               sf::principal_pow(cplx(y, 0.0), s - cplx(1.0, 0.0));
    };
    // f(iy) decays like e^{-2 pi y}; below y ~ 0.05 use the functional
    // substitution-free direct series (converges since prec is large).
    auto lo = lkernel::quad::integrate(integrand, 0.02, 1.0, 1e-13, 1e-13, 400);
    auto hi = lkernel::quad::integrate(integrand, 1.0, 10.0, 1e-13, 1e-13, 400);
    return lo.value + hi.value;
}

}  // namespace

TEST_CASE("functional equation L*(s) = (-1)^{k/2} L*(k - s)") {
    mf::Eigenform d = delta_form();
    for (const cplx s : {cplx(7.5, 0.0), cplx(6.8, 1.2), cplx(3.1, -2.2)}) {
        cplx lhs = lf::lstar(d, s);
        cplx rhs = lf::lstar(d, cplx(12.0, 0.0) - s);
        CAPTURE(s.real());
        CHECK(rel(lhs, rhs) < 1e-12);
    }
    mf::Eigenform f18 = mf::eigenbasis(18, 64)[0];
    cplx s(10.3, 0.9);
    // k/2 = 9 odd: the sign is -1.
    CHECK(rel(lf::lstar(f18, s), -lf::lstar(f18, cplx(18.0, 0.0) - s)) < 1e-12);
}

TEST_CASE("central value of delta is real and nonzero") {
    mf::Eigenform d = delta_form();
    cplx center = lf::lstar(d, cplx(6.0, 0.0));
    CHECK(std::abs(center.imag()) < 1e-12);
    CHECK(std::abs(center.real()) > 1e-6);
}

TEST_CASE("lstar matches direct Mellin quadrature") {
    mf::Eigenform d = delta_form(256);
    for (const cplx s : {cplx(7.5, 0.0), cplx(6.8, 1.2), cplx(9.0, 0.0)}) {
        CAPTURE(s.real());
        CAPTURE(s.imag());
        // f(iy) ~ e^{-2 pi / y} / y^{12} as y -> 0, so the (0, 0.02] piece
        // is below 1e-130 and [0.02, 10] captures the integral.
        CHECK(rel(lstar_quadrature(d, s), lf::lstar(d, s)) < 1e-9);
    }
}

TEST_CASE("period indices within range only") {
    mf::Eigenform d = delta_form();
    CHECK_NOTHROW(lf::period(d, 0));
    CHECK_NOTHROW(lf::period(d, 10));
    CHECK_THROWS_AS(lf::period(d, 11), lkernel::domain_error);
    CHECK_THROWS_AS(lf::period(d, -1), lkernel::domain_error);
    CHECK(rel(lf::period(d, 5), lf::lstar(d, cplx(6.0, 0.0))) < 1e-14);
}

TEST_CASE("lstar is stable in n_terms") {
    mf::Eigenform d = delta_form(96);
    cplx s(7.5, 0.0);
    lf::LStarSeriesParams p40{40}, p64{64};
    CHECK(std::abs(lf::lstar(d, s, p40) - lf::lstar(d, s, p64)) < 1e-13);
}

TEST_CASE("eval_form matches the lattice expansion") {
    mf::Eigenform d = delta_form(64);
    // At y = 1.2, x = 0.3 compare against an explicit loop.
    cplx acc(0.0, 0.0);
    for (int n = 1; n <= 64; ++n)
        acc += d.a(n) * std::exp(cplx(-two_pi * 1.2 * n, two_pi * 0.3 * n));
    CHECK(std::abs(lf::eval_form(d, 0.3, 1.2) - acc) < 1e-12);
    // Periodicity in x.
    CHECK(std::abs(lf::eval_form(d, 0.3, 1.2) - lf::eval_form(d, 1.3, 1.2)) < 1e-14);
}

TEST_CASE("Petersson norm: refinement converges and value is stable") {
    mf::Eigenform d = delta_form(96);
    lf::NormResult coarse = lf::petersson_norm(d);
    CHECK(coarse.value > 0.0);
    CHECK(coarse.rel_error < 1e-8);
    lf::PeterssonQuadParams fine;
    fine.nx = 48;
    fine.ny = 24;
    lf::NormResult finer = lf::petersson_norm(d, fine);
    CHECK(std::abs(finer.value - coarse.value) / finer.value < 1e-9);
    // Known value <Delta, Delta> ~ 1.035e-6 (unnormalized fundamental-domain
    // integral).
    CHECK(coarse.value == doctest::Approx(1.035362e-06).epsilon(1e-3));
}

TEST_CASE("Petersson norm scales quadratically in the form") {
    mf::Eigenform d = delta_form(64);
    mf::Eigenform d2 = d;
    for (auto& c : d2.coeffs) c *= 3.0;
    lf::NormResult n1 = lf::petersson_norm(d);
    lf::NormResult n2 = lf::petersson_norm(d2);
    CHECK(n2.value / n1.value == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("y_max truncation is immaterial at default settings") {
    mf::Eigenform d = delta_form(64);
    lf::PeterssonQuadParams wider;
    wider.y_max = 16.0;
    CHECK(std::abs(lf::petersson_norm(d).value - lf::petersson_norm(d, wider).value) <
          1e-16);
}
