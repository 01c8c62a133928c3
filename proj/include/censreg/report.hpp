#pragma once

#include "censreg/censcov_reg.hpp"
#include "censreg/coxph.hpp"
#include "censreg/diagnostics.hpp"
#include "censreg/onesample.hpp"
#include "censreg/simulate.hpp"
#include "censreg/twosample.hpp"
#include "censreg/weibull_reg.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace censreg {

inline constexpr const char* kVersion = "0.1.0";

// Machine-readable wrapper around every CLI result.
struct ReportEnvelope {
  std::string command;
  std::string input_digest;  // FNV-1a 64 of the raw input bytes, hex; empty if no file input
  std::vector<std::string> warnings;
  nlohmann::ordered_json payload;
};

nlohmann::ordered_json envelope_json(const ReportEnvelope& envelope);

std::string fnv1a_digest(const std::string& bytes);

// Aligned coefficient table in the style
//        Estimate Std. Error   CI.low    CI.up p-value
// with 5 significant digits and p-values below 2e-16 shown as <2e-16.
// A NaN p-value renders as NA.
struct CoefRow {
  std::string name;
  double estimate, std_error, ci_low, ci_high, p_value;
};
std::string format_coef_table(const std::vector<CoefRow>& rows);

std::string format_number(double v);   // 5 significant digits
std::string format_p_value(double p);

// Per-fit JSON payloads (full precision) and coefficient rows (shared by the
// table renderer so both outputs carry identical values).
nlohmann::ordered_json to_json(const OneSampleFit& fit);
nlohmann::ordered_json to_json(const MeanDiffFit& fit);
nlohmann::ordered_json to_json(const AFTFit& fit, const PHSummary& ph);
nlohmann::ordered_json to_json(const CensCovFit& fit);
nlohmann::ordered_json to_json(const CoxFit& fit);
nlohmann::ordered_json to_json(const DiagResult& diag);
nlohmann::ordered_json to_json(const SimReport& report);

std::vector<CoefRow> coef_rows(const OneSampleFit& fit);
std::vector<CoefRow> coef_rows(const MeanDiffFit& fit);
std::vector<CoefRow> coef_rows(const CensCovFit& fit, bool exact_covariates_first);
std::vector<CoefRow> coef_rows(const CoxFit& fit);

std::string format_table(const CensCovFit& fit, bool exact_covariates_first = true);
std::string format_table(const SimReport& report);

// diag CSV (columns stratum, log_time, loglog_surv, fitted) and minimal SVG.
std::string diag_csv(const DiagResult& diag);
std::string diag_svg(const DiagResult& diag);

}  // namespace censreg
