#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hfseason/density.hpp"
#include "hfseason/gam/fit.hpp"
#include "hfseason/regime.hpp"
#include "hfseason/seasonality.hpp"
#include "hfseason/stats.hpp"

namespace hfseason::report {

// Every CSV artifact ships with a JSON twin holding the full-precision
// values; re-rendering the parsed twin reproduces the CSV byte-for-byte.

/// Summary table mirroring the paper's column order, one row per asset in
/// alphabetical symbol order, two-decimal display formatting.
std::string table1_to_csv(std::vector<stats::SummaryStats> rows);
nlohmann::json table1_to_json(std::vector<stats::SummaryStats> rows);
std::vector<stats::SummaryStats> table1_from_json(const nlohmann::json& j);

/// Correlation table: symbol header row/column, blank diagonal, 2 decimals.
std::string corr_to_csv(const stats::CorrelationMatrix& matrix);
nlohmann::json corr_to_json(const stats::CorrelationMatrix& matrix);
stats::CorrelationMatrix corr_from_json(const nlohmann::json& j);

std::string density_to_csv(const stats::DensityCurve& curve);
nlohmann::json density_to_json(const stats::DensityCurve& curve);
stats::DensityCurve density_from_json(const nlohmann::json& j);

/// Daily curve: bin,local_time,effect,lower,upper. Weekly: day,effect,lower,upper.
std::string profile_daily_csv(const seasonality::SeasonalProfile& profile);
std::string profile_weekly_csv(const seasonality::SeasonalProfile& profile);
nlohmann::json profile_to_json(const seasonality::SeasonalProfile& profile);
seasonality::SeasonalProfile profile_from_json(const nlohmann::json& j);

/// Fitted-model snapshot: term names, knots, lambdas, EDF, GCV, R^2 and
/// coefficient vectors.
nlohmann::json gamfit_to_json(const gam::GamFit& fit);

/// Effect curve CSV: x,effect,lower,upper.
std::string effect_curve_csv(const gam::EffectCurve& curve);

/// Paired UP/DOWN rendering; throws DataError when the asset sets differ.
struct CorrTablePair {
    std::string up_csv, down_csv;
    nlohmann::json up_json, down_json;
};
CorrTablePair build_corr_tables(const stats::CorrelationMatrix& up,
                                const stats::CorrelationMatrix& down);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace hfseason::report
