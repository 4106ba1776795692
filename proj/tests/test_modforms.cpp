#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lkernel/modforms.hpp"

using namespace lkernel::modforms;
using lkernel::cplx;

namespace {

// Independent route to delta: the eta product q prod (1-q^n)^24.
QExpansion delta_eta_product(int prec) {
    std::vector<mpq_class> f(prec + 1, 0);
    f[0] = 1;
    for (int n = 1; n <= prec; ++n) {
        // multiply by (1 - q^n)^24 one factor at a time
        for (int rep = 0; rep < 24; ++rep)
            for (int i = prec; i >= n; --i) f[i] -= f[i - n];
    }
    QExpansion d;
    d.weight = 12;
    d.prec = prec;
    d.coeffs.assign(prec + 1, 0);
    for (int i = 1; i <= prec; ++i) d.coeffs[i] = f[i - 1];  // the leading q
    return d;
}

}  // namespace

TEST_CASE("Eisenstein series coefficients") {
    QExpansion e4 = eisenstein(4, 6);
    CHECK(e4.a(0) == 1);
    CHECK(e4.a(1) == 240);
    CHECK(e4.a(2) == 2160);
    CHECK(e4.a(3) == 6720);
    CHECK(e4.a(4) == 17520);
    CHECK(e4.a(5) == 30240);
    QExpansion e6 = eisenstein(6, 4);
    CHECK(e6.a(0) == 1);
    CHECK(e6.a(1) == -504);
    CHECK(e6.a(2) == -16632);
    CHECK(e6.a(3) == -122976);
    CHECK(e6.a(4) == -532728);
    CHECK_THROWS_AS(eisenstein(8, 4), lkernel::domain_error);
}

TEST_CASE("delta matches the eta-product expansion") {
    const int prec = 40;
    QExpansion d = delta(prec);
    CHECK(d.a(0) == 0);
    CHECK(d.a(1) == 1);
    CHECK(d.a(2) == -24);
    CHECK(d.a(3) == 252);
    CHECK(d.a(4) == -1472);
    CHECK(d.a(5) == 4830);
    CHECK(d == delta_eta_product(prec));
}

TEST_CASE("cusp-form dimensions") {
    CHECK(dim_cusp(0) == 0);
    CHECK(dim_cusp(4) == 0);
    CHECK(dim_cusp(10) == 0);
    CHECK(dim_cusp(12) == 1);
    CHECK(dim_cusp(14) == 0);
    CHECK(dim_cusp(16) == 1);
    CHECK(dim_cusp(22) == 1);
    CHECK(dim_cusp(24) == 2);
    CHECK(dim_cusp(26) == 1);
    CHECK(dim_cusp(28) == 2);
    CHECK(dim_cusp(36) == 3);
    CHECK_THROWS_AS(dim_cusp(7), lkernel::domain_error);
}

TEST_CASE("Victor-Miller basis is echelonized") {
    for (int k : {12, 16, 24, 28}) {
        int d = dim_cusp(k);
        auto basis = victor_miller_basis(k, d + 10);
        REQUIRE(static_cast<int>(basis.size()) == d);
        for (int i = 0; i < d; ++i) {
            CHECK(basis[i].a(0) == 0);
            for (int j = 1; j <= d; ++j)
                CHECK(basis[i].a(j) == (j == i + 1 ? 1 : 0));
        }
    }
    // k = 12: the sole basis element is delta itself.
    auto b12 = victor_miller_basis(12, 20);
    CHECK(b12[0] == delta(20));
}

TEST_CASE("Hecke operator basics") {
    QExpansion d = delta(30);
    QExpansion t2 = hecke_operator(d, 2);
    for (int n = 1; n <= t2.prec; ++n) CHECK(t2.a(n) == -24 * d.a(n));
    QExpansion t3 = hecke_operator(d, 3);
    for (int n = 1; n <= t3.prec; ++n) CHECK(t3.a(n) == 252 * d.a(n));
    CHECK_THROWS_AS(hecke_operator(d, 0), lkernel::domain_error);
}

TEST_CASE("Hecke operators commute on S_24") {
    const int prec = 60;
    auto basis = victor_miller_basis(24, prec);
    for (const auto& g : basis) {
        QExpansion t2t3 = hecke_operator(hecke_operator(g, 3), 2);
        QExpansion t3t2 = hecke_operator(hecke_operator(g, 2), 3);
        REQUIRE(t2t3.prec == t3t2.prec);
        for (int n = 0; n <= t2t3.prec; ++n) CHECK(t2t3.a(n) == t3t2.a(n));
    }
}

TEST_CASE("T_2 matrix on S_24 has trace 1080 and det -20468736") {
    auto m = hecke_matrix(24, 2, 12);
    REQUIRE(m.size() == 2);
    CHECK(m[0][0] + m[1][1] == 1080);
    CHECK(m[0][0] * m[1][1] - m[0][1] * m[1][0] == -20468736);
}

TEST_CASE("eigenbasis k=12 is delta") {
    auto forms = eigenbasis(12, 24);
    REQUIRE(forms.size() == 1);
    QExpansion d = delta(24);
    for (int n = 1; n <= 24; ++n)
        CHECK(forms[0].a(n) == doctest::Approx(d.a(n).get_d()).epsilon(1e-12));
}

TEST_CASE("eigenbasis k=16: a(2) = 216, a(3) = -3348") {
    auto forms = eigenbasis(16, 16);
    REQUIRE(forms.size() == 1);
    CHECK(forms[0].a(2) == doctest::Approx(216.0).epsilon(1e-12));
    CHECK(forms[0].a(3) == doctest::Approx(-3348.0).epsilon(1e-12));
}

TEST_CASE("eigenbasis k=24: a(2) = 540 -+ 12 sqrt(144169)") {
    auto forms = eigenbasis(24, 20);
    REQUIRE(forms.size() == 2);
    double root = 12.0 * std::sqrt(144169.0);
    CHECK(forms[0].a(2) == doctest::Approx(540.0 - root).epsilon(1e-10));
    CHECK(forms[1].a(2) == doctest::Approx(540.0 + root).epsilon(1e-10));
    CHECK(forms[0].a(1) == 1.0);
    CHECK(forms[1].a(1) == 1.0);
}

TEST_CASE("eigenform coefficients: multiplicativity, a(p^2), Deligne bound") {
    for (int k : {12, 16, 18, 20, 24, 26}) {
        auto forms = eigenbasis(k, 40);
        for (const auto& f : forms) {
            CAPTURE(k);
            CAPTURE(f.index);
            // a(mn) = a(m) a(n) for coprime m, n.
            for (auto [m, n] : {std::pair{2, 3}, {2, 5}, {3, 4}, {4, 9}, {5, 8}, {2, 9}}) {
                double scale = std::max(1.0, std::abs(f.a(m) * f.a(n)));
                CHECK(std::abs(f.a(m * n) - f.a(m) * f.a(n)) / scale < 1e-9);
            }
            // a(p^2) = a(p)^2 - p^{k-1}.
            for (int p : {2, 3, 5}) {
                double want = f.a(p) * f.a(p) - std::pow(p, k - 1);
                double scale = std::max(1.0, std::abs(want));
                CHECK(std::abs(f.a(p * p) - want) / scale < 1e-9);
            }
            // |a(p)| <= 2 p^{(k-1)/2}.
            for (int p : {2, 3, 5, 7, 11, 13})
                CHECK(std::abs(f.a(p)) <= 2.0 * std::pow(p, (k - 1) / 2.0) * (1 + 1e-9));
        }
    }
}

TEST_CASE("QExpansion JSON round trip preserves exact rationals") {
    QExpansion d = delta(16) * mpq_class(7, 3);
    QExpansion back = QExpansion::from_json(d.to_json());
    CHECK(back == d);
    CHECK(back.to_json() == d.to_json());
}

TEST_CASE("arithmetic respects precision compatibility") {
    QExpansion a = eisenstein(4, 10), b = eisenstein(4, 8);
    CHECK_THROWS_AS(a + b, lkernel::precision_error);
    QExpansion p = a.pow(3);
    CHECK(p.weight == 12);
    CHECK(p.prec == 10);
}
