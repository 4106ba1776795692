#pragma once

#include <map>
#include <optional>
#include <string>

#include "lkernel/kernel.hpp"

namespace lkernel::kernel {

/// Everything one verification run produced for a single (k, s, s').
struct VerificationReport {
    ParamPoint params{};
    TheoremTerms terms{};
    std::optional<cplx> lhs_spectral;
    std::optional<cplx> lhs_quadrature;
    std::map<std::string, double> residuals;
    std::map<std::string, std::string> settings;
    std::map<std::string, double> timings_ms;
};

/// Wire format with fixed field names; numbers carry 17 significant digits.
std::string report_to_json(const VerificationReport& r);

/// One CSV row (plus a header helper); numeric values identical to the JSON.
std::string report_csv_header(const VerificationReport& r);
std::string report_to_csv_row(const VerificationReport& r);

}  // namespace lkernel::kernel
