#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace lkernel {

using cplx = std::complex<double>;

constexpr double pi = 3.141592653589793238462643383279502884;
constexpr double two_pi = 2.0 * pi;

/// Tolerances and iteration caps shared by the series/quadrature routines.
struct AccuracyBudget {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_terms = 100000;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_terms < 1)
            throw std::invalid_argument("AccuracyBudget: abs_tol, rel_tol must be > 0 and max_terms >= 1");
    }
};

struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct pole_error : domain_error {
    using domain_error::domain_error;
};

struct accuracy_error : std::runtime_error {
    double achieved = 0.0;
    accuracy_error(const std::string& msg, double got = 0.0)
        : std::runtime_error(msg), achieved(got) {}
};

struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Neumaier compensated accumulator; complex values are tracked per component.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class KahanSumC {
public:
    void add(const cplx& z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    cplx value() const { return {re_.value(), im_.value()}; }

private:
    KahanSum re_, im_;
};

inline bool is_finite(const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace lkernel
