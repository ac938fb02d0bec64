#pragma once

#include <span>
#include <string>
#include <vector>

#include "edens/estimators.hpp"

namespace edens {

/// JSON text of a report.  report_from_json(report_to_json(r)) == r.
std::string report_to_json(const DensityReport& report, int indent = 2);
DensityReport report_from_json(const std::string& text);

std::string reports_to_json(std::span<const DensityReport> reports, int indent = 2);
std::vector<DensityReport> reports_from_json(const std::string& text);

/// Header "functional,r,R_or_t,estimate,error_bound,flags".
std::string csv_header();
/// One line per table row, numbers with 17 significant digits; r is empty
/// when the table has no inner radius.
std::string report_to_csv(const DensityReport& report, bool header = true);
std::string reports_to_csv(std::span<const DensityReport> reports);

}  // namespace edens
