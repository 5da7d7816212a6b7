#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wilks/betamodel.hpp"
#include "wilks/btmodel.hpp"
#include "wilks/inference.hpp"
#include "wilks/montecarlo.hpp"

namespace wilks {

// JSON documents for single results; indices are 1-based at this boundary.
std::string fit_result_json(const FitResult& fit, Model model);
std::string bt_fit_result_json(const BtFitResult& fit);
std::string test_result_json(const TestResult& res);
std::string error_json(const std::string& code, const std::string& message);

// CSV tables for replicate studies: one row per alpha level, and one row per
// retained replicate for the quantile table.
void sim_report_csv(const SimReport& report, std::ostream& out);
void qq_table_csv(const std::vector<QqRow>& rows, std::ostream& out);

}  // namespace wilks
