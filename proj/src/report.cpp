#include "lkernel/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace lkernel::kernel {

namespace {

nlohmann::json cpx(const cplx& z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

std::string num17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string report_to_json(const VerificationReport& r) {
    nlohmann::json j;
    j["params"] = {{"k", r.params.k},
                   {"s_re", r.params.s.real()},
                   {"s_im", r.params.s.imag()},
                   {"sp_re", r.params.sprime.real()},
                   {"sp_im", r.params.sprime.imag()}};
    j["terms"] = {{"t1", cpx(r.terms.t1)},     {"t2", cpx(r.terms.t2)},
                  {"t3", cpx(r.terms.t3)},     {"t4", cpx(r.terms.t4)},
                  {"total", cpx(r.terms.total)},
                  {"trunc_error", r.terms.trunc_error}};
    j["lhs_spectral"] = r.lhs_spectral ? cpx(*r.lhs_spectral) : nlohmann::json();
    j["lhs_quadrature"] = r.lhs_quadrature ? cpx(*r.lhs_quadrature) : nlohmann::json();
    j["residuals"] = r.residuals;
    j["settings"] = r.settings;
    j["timings_ms"] = r.timings_ms;
    return j.dump(2);
}

std::string report_csv_header(const VerificationReport& r) {
    std::ostringstream os;
    os << "k,s_re,s_im,sp_re,sp_im,"
          "t1_re,t1_im,t2_re,t2_im,t3_re,t3_im,t4_re,t4_im,"
          "total_re,total_im,trunc_error,"
          "lhs_spectral_re,lhs_spectral_im,lhs_quadrature_re,lhs_quadrature_im";
    for (const auto& [name, _] : r.residuals) os << ",residual_" << name;
    return os.str();
}

std::string report_to_csv_row(const VerificationReport& r) {
    std::ostringstream os;
    os << r.params.k << ',' << num17(r.params.s.real()) << ','
       << num17(r.params.s.imag()) << ',' << num17(r.params.sprime.real()) << ','
       << num17(r.params.sprime.imag());
    for (const cplx& z : {r.terms.t1, r.terms.t2, r.terms.t3, r.terms.t4, r.terms.total})
        os << ',' << num17(z.real()) << ',' << num17(z.imag());
    os << ',' << num17(r.terms.trunc_error);
    for (const auto& opt : {r.lhs_spectral, r.lhs_quadrature}) {
        if (opt)
            os << ',' << num17(opt->real()) << ',' << num17(opt->imag());
        else
            os << ",,";
    }
    for (const auto& [_, v] : r.residuals) os << ',' << num17(v);
    return os.str();
}

}  // namespace lkernel::kernel
