#pragma once

/**
 * @file report.hpp
 * @brief CSV and JSON serialization of result tables.
 *
 * SMSE tables use the header estimator,k,d,mode,smse,stderr. The JSON form holds
 * the same rows under "rows" next to a "metadata" object. Numbers are written in
 * shortest round-trip form, so parsing a report back yields identical doubles.
 */

#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "shrinkest/analysis.hpp"
#include "shrinkest/montecarlo.hpp"

namespace shrinkest {

enum class OutputFormat { csv, json };

std::string_view to_string(OutputFormat f);
OutputFormat parse_output_format(std::string_view s);

inline constexpr std::string_view kSmseHeader = "estimator,k,d,mode,smse,stderr";
inline constexpr std::string_view kDominanceHeader =
    "candidate,incumbent,k,d,mode,precondition_eig,quadratic_form,status,dominated,oracle_nnd,oracle_agrees";

/// Shortest decimal string that parses back to the same double; "nan", "inf", "-inf" otherwise.
std::string format_number(double x);
/// Inverse of format_number. Throws DataError on malformed input.
double parse_number(std::string_view s);

std::string smse_csv(const std::vector<SimRow>& rows);
std::vector<SimRow> parse_smse_csv(std::string_view text);

nlohmann::json smse_rows_json(const std::vector<SimRow>& rows);
std::vector<SimRow> parse_smse_json(const nlohmann::json& doc);

nlohmann::json simulation_metadata(const SimReport& report);
nlohmann::json analysis_metadata(const AnalysisResult& result, const AnalysisConfig& config, std::string_view source);

/// Full document in the requested format; JSON carries the metadata block.
std::string render_smse(const std::vector<SimRow>& rows, const nlohmann::json& metadata, OutputFormat format);

std::string render_dominance(const std::vector<DominanceRow>& rows, const nlohmann::json& metadata,
                             OutputFormat format);

}  // namespace shrinkest
