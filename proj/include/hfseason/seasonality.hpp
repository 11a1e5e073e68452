#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hfseason::seasonality {

/// Time-of-day bin and ISO day-of-week per observation, computed in the
/// display timezone (UTC + fixed minute offset).
struct SeasonCovariates {
    std::vector<int> time_of_day_bin;  // [0, bins_per_day)
    std::vector<int> day_of_week;      // 1 = Monday .. 7 = Sunday
    int bins_per_day = 288;
    std::int64_t interval_s = 300;
    int tz_offset_minutes = 60;
};

SeasonCovariates encode_covariates(std::span<const std::int64_t> timestamps_ms,
                                   std::int64_t interval_s, int tz_offset_minutes);

enum class ResponseKind { AbsReturn, Volatility, Volume };

std::string response_name(ResponseKind kind);
ResponseKind response_from_name(const std::string& name);

struct SeasonalityConfig {
    int daily_knots = 24;       // quantile-placed over the observed bins
    bool daily_cyclic = false;  // equally spaced knots wrapping midnight
    int weekly_knots = 7;       // P-spline basis dimension over day 1..7
    int weekly_degree = 3;
    int weekly_penalty_order = 2;
    bool weekly_cyclic = false;
    double lambda_log10_min = -6.0;
    double lambda_log10_max = 6.0;
};

/// Daily (per-bin) and weekly (per-day) effect curves with +-2 se bands,
/// plus the fit summary. Both curves sum to ~0 (identifiability constraint).
struct SeasonalProfile {
    ResponseKind response = ResponseKind::AbsReturn;
    int bins_per_day = 288;
    int tz_offset_minutes = 60;
    std::int64_t interval_s = 300;

    std::vector<double> daily_effect, daily_lower, daily_upper;    // bins_per_day entries
    std::vector<double> weekly_effect, weekly_lower, weekly_upper;  // 7 entries

    double lambda_daily = 0.0, lambda_weekly = 0.0;
    double edf_daily = 0.0, edf_weekly = 0.0, edf_total = 0.0;
    double gcv = 0.0;
    double r_squared = 0.0;
    bool degenerate = false;  // constant response: flat curves, R^2 = 0
};

/// Fits response_i = b0 + f_daily(bin_i) + f_weekly(dow_i) + eps_i with a
/// cubic regression spline over time-of-day and a P-spline over day-of-week,
/// lambdas selected by GCV. A constant response short-circuits to the
/// documented flat-curve profile.
SeasonalProfile fit_seasonality(std::span<const double> response, const SeasonCovariates& cov,
                                const SeasonalityConfig& config, ResponseKind kind);

/// Descriptive pattern flags. A curve counts as significant only when its
/// effect range exceeds the median band width; flat profiles report no
/// pattern.
struct QualitativeReport {
    bool daily_significant = false;
    bool weekly_significant = false;
    bool evening_peak = false;   // daily argmax inside the peak window
    bool night_low = false;      // daily argmin inside local 00:00-06:00
    bool weekend_trough = false; // weekend mean below weekday mean by > band width
    int peak_bin = -1;
    int trough_bin = -1;
    std::string note;
};

QualitativeReport qualitative_checks(const SeasonalProfile& profile,
                                     int peak_window_start_minute = 17 * 60,
                                     int peak_window_end_minute = 20 * 60);

}  // namespace hfseason::seasonality
