#include "lkernel/modforms.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

namespace lkernel::modforms {

namespace {

void check_compatible(const QExpansion& a, const QExpansion& b, const char* op) {
    if (a.prec != b.prec)
        throw precision_error(std::string("QExpansion ") + op + ": precision mismatch");
}

mpz_class sigma(int n, int power) {
    mpz_class total = 0;
    for (int d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        mpz_class dp, qp;
        mpz_ui_pow_ui(dp.get_mpz_t(), d, power);
        total += dp;
        int q = n / d;
        if (q != d) {
            mpz_ui_pow_ui(qp.get_mpz_t(), q, power);
            total += qp;
        }
    }
    return total;
}

}  // namespace

QExpansion QExpansion::operator+(const QExpansion& o) const {
    check_compatible(*this, o, "+");
    QExpansion r{weight, prec, coeffs};
    for (int i = 0; i <= prec; ++i) r.coeffs[i] += o.coeffs[i];
    return r;
}

QExpansion QExpansion::operator-(const QExpansion& o) const {
    check_compatible(*this, o, "-");
    QExpansion r{weight, prec, coeffs};
    for (int i = 0; i <= prec; ++i) r.coeffs[i] -= o.coeffs[i];
    return r;
}

QExpansion QExpansion::operator*(const QExpansion& o) const {
    check_compatible(*this, o, "*");
    QExpansion r;
    r.weight = weight + o.weight;
    r.prec = prec;
    r.coeffs.assign(prec + 1, mpq_class(0));
    for (int i = 0; i <= prec; ++i) {
        if (coeffs[i] == 0) continue;
        for (int j = 0; i + j <= prec; ++j) {
            if (o.coeffs[j] == 0) continue;
            r.coeffs[i + j] += coeffs[i] * o.coeffs[j];
        }
    }
    return r;
}

QExpansion QExpansion::operator*(const mpq_class& c) const {
    QExpansion r{weight, prec, coeffs};
    for (auto& x : r.coeffs) x *= c;
    return r;
}

QExpansion QExpansion::pow(int e) const {
    QExpansion result;
    result.weight = 0;
    result.prec = prec;
    result.coeffs.assign(prec + 1, mpq_class(0));
    result.coeffs[0] = 1;
    QExpansion base = *this;
    int remaining = e;
    while (remaining > 0) {
        if (remaining & 1) result = result * base;
        remaining >>= 1;
        if (remaining) base = base * base;
    }
    result.weight = weight * e;
    return result;
}

std::string QExpansion::to_json() const {
    nlohmann::json j;
    j["weight"] = weight;
    j["prec"] = prec;
    auto& arr = j["coeffs"] = nlohmann::json::array();
    for (const auto& c : coeffs) arr.push_back(c.get_str());
    return j.dump();
}

QExpansion QExpansion::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    QExpansion f;
    f.weight = j.at("weight").get<int>();
    f.prec = j.at("prec").get<int>();
    for (const auto& s : j.at("coeffs")) {
        mpq_class c(s.get<std::string>());
        c.canonicalize();
        f.coeffs.push_back(c);
    }
    if (static_cast<int>(f.coeffs.size()) != f.prec + 1)
        throw precision_error("QExpansion::from_json: coefficient count != prec + 1");
    return f;
}

QExpansion eisenstein(int k, int prec) {
    if (k != 4 && k != 6)
        throw domain_error("eisenstein: only E4 and E6 are generators here");
    if (prec < 0) throw domain_error("eisenstein: negative precision");
    QExpansion e;
    e.weight = k;
    e.prec = prec;
    e.coeffs.assign(prec + 1, mpq_class(0));
    e.coeffs[0] = 1;
    const int factor = (k == 4) ? 240 : -504;
    const int power = k - 1;
    for (int n = 1; n <= prec; ++n)
        e.coeffs[n] = mpq_class(factor * mpz_class(sigma(n, power)));
    return e;
}

QExpansion delta(int prec) {
    if (prec < 1) throw domain_error("delta: precision must be >= 1");
    QExpansion e4 = eisenstein(4, prec);
    QExpansion e6 = eisenstein(6, prec);
    QExpansion d = (e4.pow(3) - e6.pow(2)) * mpq_class(1, 1728);
    d.weight = 12;
    return d;
}

int dim_cusp(int k) {
    if (k < 0 || k % 2 != 0) throw domain_error("dim_cusp: k must be even and >= 0");
    if (k < 12) return 0;
    if (k == 14) return 0;
    int dim_mk = (k % 12 == 2) ? k / 12 : k / 12 + 1;
    return dim_mk - 1;
}

std::vector<QExpansion> victor_miller_basis(int k, int prec) {
    if (k < 4 || k % 2 != 0)
        throw domain_error("victor_miller_basis: k must be even and >= 4");
    int d = dim_cusp(k);
    if (prec < d)
        throw precision_error("victor_miller_basis: prec below dim S_k");
    if (d == 0) return {};

    // All monomials E4^a E6^b with 4a + 6b = k span M_k.
    std::vector<QExpansion> rows;
    QExpansion e4 = eisenstein(4, prec);
    QExpansion e6 = eisenstein(6, prec);
    for (int b = 0; 6 * b <= k; ++b) {
        if ((k - 6 * b) % 4 != 0) continue;
        int a = (k - 6 * b) / 4;
        QExpansion m = e4.pow(a) * e6.pow(b);
        m.weight = k;
        rows.push_back(m);
    }

    // Exact reduced row echelon over the coefficient columns.
    int nrows = static_cast<int>(rows.size());
    int pivot_row = 0;
    for (int col = 0; col <= prec && pivot_row < nrows; ++col) {
        int sel = -1;
        for (int r = pivot_row; r < nrows; ++r)
            if (rows[r].coeffs[col] != 0) { sel = r; break; }
        if (sel < 0) continue;
        std::swap(rows[pivot_row], rows[sel]);
        mpq_class inv = 1 / rows[pivot_row].coeffs[col];
        rows[pivot_row] = rows[pivot_row] * inv;
        for (int r = 0; r < nrows; ++r) {
            if (r == pivot_row || rows[r].coeffs[col] == 0) continue;
            mpq_class factor = rows[r].coeffs[col];
            for (int c = col; c <= prec; ++c)
                rows[r].coeffs[c] -= factor * rows[pivot_row].coeffs[c];
        }
        ++pivot_row;
    }
    // dim M_k = d + 1 rows with pivots at q^0 .. q^d; the cusp basis is
    // the rows with pivot index >= 1.
    std::vector<QExpansion> basis(rows.begin() + 1, rows.begin() + 1 + d);
    return basis;
}

QExpansion hecke_operator(const QExpansion& f, int n) {
    if (n < 1) throw domain_error("hecke_operator: n must be positive");
    if (f.prec < n)
        throw precision_error("hecke_operator: insufficient precision");
    const int k = f.weight;
    QExpansion r;
    r.weight = k;
    r.prec = f.prec / n;
    r.coeffs.assign(r.prec + 1, mpq_class(0));
    for (int m = 0; m <= r.prec; ++m) {
        mpq_class total = 0;
        int g = std::gcd(m, n);
        for (int e = 1; e <= g; ++e) {
            if (g % e != 0) continue;
            mpz_class ep;
            mpz_ui_pow_ui(ep.get_mpz_t(), e, k - 1);
            total += mpq_class(ep) * f.coeffs[static_cast<long>(m) * n / (e * e)];
        }
        r.coeffs[m] = total;
    }
    return r;
}

std::vector<std::vector<mpq_class>> hecke_matrix(int k, int n, int prec) {
    int d = dim_cusp(k);
    if (d == 0) return {};
    if (prec / n < d)
        throw precision_error("hecke_matrix: prec too small for T_n on S_k");
    std::vector<QExpansion> basis = victor_miller_basis(k, prec);
    std::vector<std::vector<mpq_class>> mat(d, std::vector<mpq_class>(d));
    for (int j = 0; j < d; ++j) {
        QExpansion tg = hecke_operator(basis[j], n);
        // Echelon structure: T_n g_j = sum_i (coeff of q^i) g_i.
        for (int i = 0; i < d; ++i) mat[i][j] = tg.coeffs[i + 1];
    }
    return mat;
}

namespace {

Eigenform combine(const std::vector<QExpansion>& basis,
                  const std::vector<double>& v, int k, int prec) {
    Eigenform f;
    f.weight = k;
    f.coeffs.assign(prec + 1, 0.0);
    for (std::size_t j = 0; j < basis.size(); ++j) {
        if (v[j] == 0.0) continue;
        for (int n = 1; n <= prec; ++n)
            f.coeffs[n] += v[j] * basis[j].coeffs[n].get_d();
    }
    double a1 = f.coeffs[1];
    if (a1 == 0.0)
        throw accuracy_error("eigenbasis: eigenvector with vanishing a(1)");
    for (int n = 1; n <= prec; ++n) f.coeffs[n] /= a1;
    return f;
}

std::vector<Eigenform> diagonalize(int k, int prec, int hecke_n) {
    const int d = dim_cusp(k);
    const int work_prec = std::max(prec, hecke_n * (d + 1));
    std::vector<QExpansion> basis = victor_miller_basis(k, std::max(prec, work_prec));
    auto mat = hecke_matrix(k, hecke_n, work_prec);

    std::vector<QExpansion> out_basis = basis;
    for (auto& g : out_basis) {
        g.prec = prec;
        g.coeffs.resize(prec + 1);
    }

    std::vector<Eigenform> forms;
    if (d == 1) {
        forms.push_back(combine(out_basis, {1.0}, k, prec));
    } else if (d == 2) {
        // Exact characteristic polynomial of the 2x2 rational matrix.
        mpq_class tr = mat[0][0] + mat[1][1];
        mpq_class det = mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0];
        double trd = tr.get_d(), detd = det.get_d();
        double disc = trd * trd - 4.0 * detd;
        if (disc <= 0.0)
            throw accuracy_error("eigenbasis: degenerate or complex T_n spectrum");
        double root = std::sqrt(disc);
        for (double lambda : {0.5 * (trd - root), 0.5 * (trd + root)}) {
            double m00 = mat[0][0].get_d(), m01 = mat[0][1].get_d();
            double m10 = mat[1][0].get_d(), m11 = mat[1][1].get_d();
            std::vector<double> v;
            if (std::abs(m01) > 1e-300)
                v = {m01, lambda - m00};
            else
                v = {lambda - m11, m10};
            forms.push_back(combine(out_basis, v, k, prec));
        }
    } else {
        Eigen::MatrixXd m(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m(i, j) = mat[i][j].get_d();
        Eigen::EigenSolver<Eigen::MatrixXd> solver(m);
        std::vector<double> evals(d);
        for (int i = 0; i < d; ++i) {
            if (std::abs(solver.eigenvalues()[i].imag()) >
                1e-8 * std::abs(solver.eigenvalues()[i].real()))
                throw accuracy_error("eigenbasis: non-real T_n eigenvalue");
            evals[i] = solver.eigenvalues()[i].real();
        }
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                if (std::abs(evals[i] - evals[j]) <
                    1e-8 * (1.0 + std::abs(evals[i])))
                    throw accuracy_error("eigenbasis: degenerate T_n spectrum");
        for (int i = 0; i < d; ++i) {
            std::vector<double> v(d);
            for (int j = 0; j < d; ++j) v[j] = solver.eigenvectors().col(i)[j].real();
            forms.push_back(combine(out_basis, v, k, prec));
        }
    }
    std::sort(forms.begin(), forms.end(),
              [](const Eigenform& a, const Eigenform& b) { return a.a(2) < b.a(2); });
    for (std::size_t i = 0; i < forms.size(); ++i)
        forms[i].index = static_cast<int>(i) + 1;
    return forms;
}

}  // namespace

std::vector<Eigenform> eigenbasis(int k, int prec) {
    if (dim_cusp(k) == 0) return {};
    try {
        return diagonalize(k, prec, 2);
    } catch (const accuracy_error&) {
        return diagonalize(k, prec, 3);
    }
}

}  // namespace lkernel::modforms
