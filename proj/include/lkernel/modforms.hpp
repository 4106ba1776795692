#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "lkernel/numeric.hpp"

namespace lkernel::modforms {

/// Truncated q-expansion a(0) + a(1) q + ... + a(prec) q^prec with exact
/// rational coefficients.
struct QExpansion {
    int weight = 0;
    int prec = 0;
    std::vector<mpq_class> coeffs;  // size prec + 1

    const mpq_class& a(int n) const { return coeffs.at(n); }

    QExpansion operator+(const QExpansion& o) const;
    QExpansion operator-(const QExpansion& o) const;
    QExpansion operator*(const QExpansion& o) const;
    QExpansion operator*(const mpq_class& c) const;
    QExpansion pow(int e) const;
    bool operator==(const QExpansion& o) const = default;

    std::string to_json() const;
    static QExpansion from_json(const std::string& text);
};

/// Normalized Hecke eigenform: a(1) = 1, real coefficients a(1)..a(prec).
struct Eigenform {
    int weight = 0;
    int index = 0;  // position within the weight's eigenbasis, 1-based
    std::vector<double> coeffs;  // coeffs[n] = a(n); coeffs[0] unused (0)

    int prec() const { return static_cast<int>(coeffs.size()) - 1; }
    double a(int n) const { return coeffs.at(n); }
};

/// E4 or E6 (k must be 4 or 6) to q^prec, exact.
QExpansion eisenstein(int k, int prec);

/// Delta = (E4^3 - E6^2) / 1728.
QExpansion delta(int prec);

/// dim S_k for level 1, even k >= 0.
int dim_cusp(int k);

/// Echelonized basis g_i = q^i + O(q^{d+1}) of S_k from E4^a E6^b monomials.
std::vector<QExpansion> victor_miller_basis(int k, int prec);

/// T_n acting on a cusp form; result precision is floor(prec / n).
QExpansion hecke_operator(const QExpansion& f, int n);

/// Matrix of T_n on the Victor-Miller basis (column j holds T_n g_j).
std::vector<std::vector<mpq_class>> hecke_matrix(int k, int n, int prec);

/// Numerical eigenbasis of S_k: diagonalize T_2 (T_3 on degeneracy),
/// normalize a(1) = 1, sort by a(2) ascending.
std::vector<Eigenform> eigenbasis(int k, int prec);

}  // namespace lkernel::modforms
