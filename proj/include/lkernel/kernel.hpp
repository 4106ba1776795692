#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lkernel/lfunc.hpp"
#include "lkernel/numeric.hpp"

namespace lkernel::kernel {

using modforms::Eigenform;

/// (k, s, s') subject to the identity's hypotheses: s + s' an odd integer,
/// 1 < s + s' <= k - 1, Re s > Re s' + 1, 1 < Re s < k - 1, 1 < Re s' < k - 1.
/// The upper band edge s + s' = k - 1 is admitted: every term stays analytic
/// there (the zeta pole sits at s + s' = k).
struct ParamPoint {
    int k = 0;
    cplx s{};
    cplx sprime{};
};

/// Conditions violated by (k, s, s'); empty means valid.
std::vector<std::string> check_params(int k, const cplx& s, const cplx& sprime);

/// Returns the validated point or throws validation_error naming every
/// violated condition.
ParamPoint validate_params(int k, const cplx& s, const cplx& sprime);

struct MatrixQuadruple {
    std::int64_t a = 0, b = 0, c = 0, d = 0;
    bool operator==(const MatrixQuadruple&) const = default;
};

/// gamma_k(s) = e^{pi i s/2} Gamma(s) Gamma(k-s), for 0 < Re s < k.
cplx gamma_k(const cplx& s, int k);

/// c_k = (-1)^{k/2} pi (k-2)! / 2^{k-2}.
double c_k(int k);

/// All (a,b,c,d) > 0 with ad - bc = 1 and ad <= n_max, each exactly once,
/// ascending in N = ad then lexicographic in the divisor pairs.
std::vector<MatrixQuadruple> enumerate_quadruples(int n_max);

struct HyperSumResult {
    cplx value{};              // truncated sum + analytic tail completion
    cplx tail_correction{};    // the analytic completion alone
    double tail_estimate = 0.0;  // geometric shell-ratio diagnostic
    double err_bound = 0.0;      // bound on the completion's cutoff error
};

/// The hypergeometric matrix-series term of the identity, prefactor
/// included.  Exactly zero when s' is an integer (the rising factorial
/// (-s'+1)_{k-1} vanishes).  The shell tail decays like N^{1-Re s'}, so the
/// truncated sum is completed analytically: divisor expansion of the shell
/// sums plus Hurwitz-zeta evaluation of the remaining smooth series.
HyperSumResult hyper_sum(const ParamPoint& p, int n_max = 400,
                         const AccuracyBudget& budget = {1e-8, 1e-6, 100000});

struct TheoremTerms {
    cplx t1{}, t2{}, t3{}, t4{};
    cplx total{};
    double trunc_error = 0.0;
};

/// The four summands of the main identity's right-hand side, printed order.
TheoremTerms rhs_theorem(const ParamPoint& p,
                         const AccuracyBudget& budget = {1e-8, 1e-6, 100000},
                         int n_max = 400);

struct OraclePair {
    cplx direct{};  // quadrature route
    cplx closed{};  // closed-form route
    double residual() const { return std::abs(direct - closed); }
};

/// bd = 0 contribution evaluated two ways: closed form (the two zeta/Gamma
/// terms) versus quadrature of the exponential-sum integrals.  Throws
/// accuracy_error when the two routes disagree beyond the budget, or when
/// the direct route's n-truncation error bound (which degenerates like
/// n_cut^{s+s'-k}) already exceeds the budget — the comparison is then
/// flagged as unconverged rather than reported as a disagreement.
OraclePair a_term_oracle(const ParamPoint& p,
                         const AccuracyBudget& budget = {1e-8, 1e-8, 100000},
                         int n_cut = 1200);

/// Line integral of (cit+d)^{-k} ((ait+b)/(cit+d))^{-s} t^{s'-1} with the
/// t < 0 branch taken as arg t = +pi.  Entries may be negative (used by the
/// vanishing-contour checks); poles must stay off the real axis.
cplx matrix_line_integral(double a, double b, double c, double d,
                          const ParamPoint& p, double abs_tol = 1e-10);

/// Per-matrix contour evaluation versus its dumbbell-contour closed form.
OraclePair per_matrix_oracle(const MatrixQuadruple& q, const ParamPoint& p,
                             double abs_tol = 1e-10);

/// The c = 0 family: zeta(s-s') times the beta-type line integral, direct
/// versus closed form.
OraclePair c_zero_term_oracle(const ParamPoint& p, double abs_tol = 1e-10);

struct SpectralForm {
    Eigenform form;
    double petersson = 0.0;  // <f, f>
};

/// c_k sum_nu L*(f,s) L*(f,s') / <f,f>; zero when S_k is trivial.
cplx spectral_lhs(const ParamPoint& p, const std::vector<SpectralForm>& basis,
                  const AccuracyBudget& budget = {});

/// Kernel series at z = it, one representative per +-pair, entries bounded
/// by m_max; gamma_k(s) factor included.
cplx kernel_value(const cplx& s, int k, double t, int m_max);

/// Caches the PSL2 representative list so repeated t-evaluations are cheap.
class KernelSummator {
public:
    KernelSummator(int k, cplx s, int m_max);
    cplx operator()(double t) const;
    std::size_t matrix_count() const { return mats_.size(); }

private:
    int k_;
    cplx s_;
    std::vector<MatrixQuadruple> mats_;
};

/// gamma_k(s)^{-1} integral of R_{s,k}(it) t^{s'-1} dt, folded onto (1, inf)
/// through the weight-k modularity of the kernel.
cplx mellin_lhs(const ParamPoint& p, int m_max = 60,
                const AccuracyBudget& budget = {1e-6, 1e-4, 100000});

/// Right side of the averaged-L-value corollary: (gamma_k(s)/c_k) rhs_total.
cplx average_lseries(const ParamPoint& p,
                     const AccuracyBudget& budget = {1e-8, 1e-6, 100000},
                     int n_max = 400);

struct Cor2Result {
    double residual = 0.0;
    double trunc_bound = 0.0;
};

/// |three zeta/Gamma terms + hypergeometric sum| for trivial S_k
/// (k in {8, 10, 14}).
Cor2Result corollary2_residual(const ParamPoint& p,
                               const AccuracyBudget& budget = {1e-8, 1e-6, 100000},
                               int n_max = 400);

}  // namespace lkernel::kernel
