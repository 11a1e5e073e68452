#include <algorithm>
#include <cmath>
#include <numeric>

#include "hfseason/errors.hpp"
#include "hfseason/gam/select.hpp"
#include "hfseason/seasonality.hpp"
#include "hfseason/timeutil.hpp"

namespace hfseason::seasonality {

SeasonCovariates encode_covariates(std::span<const std::int64_t> timestamps_ms,
                                   std::int64_t interval_s, int tz_offset_minutes) {
    if (interval_s <= 0 || 86'400 % interval_s != 0) {
        throw ConfigError("encode_covariates: interval must divide one day evenly");
    }
    SeasonCovariates out;
    out.interval_s = interval_s;
    out.tz_offset_minutes = tz_offset_minutes;
    out.bins_per_day = static_cast<int>(86'400 / interval_s);
    out.time_of_day_bin.reserve(timestamps_ms.size());
    out.day_of_week.reserve(timestamps_ms.size());

    const std::int64_t interval_ms = interval_s * 1000;
    for (std::int64_t ts : timestamps_ms) {
        if (ts % interval_ms != 0) {
            throw DataError("encode_covariates: timestamp off the interval grid: " +
                            timeutil::format_utc(ts));
        }
        const std::int64_t local_ms = ts + static_cast<std::int64_t>(tz_offset_minutes) * 60'000;
        std::int64_t day = local_ms / 86'400'000;
        std::int64_t rem = local_ms % 86'400'000;
        if (rem < 0) {
            rem += 86'400'000;
            day -= 1;
        }
        out.time_of_day_bin.push_back(static_cast<int>(rem / interval_ms));
        out.day_of_week.push_back(timeutil::day_of_week(day));
    }
    return out;
}

std::string response_name(ResponseKind kind) {
    switch (kind) {
        case ResponseKind::AbsReturn: return "abs_return";
        case ResponseKind::Volatility: return "volatility";
        case ResponseKind::Volume: return "volume";
    }
    return "?";
}

ResponseKind response_from_name(const std::string& name) {
    if (name == "abs_return") return ResponseKind::AbsReturn;
    if (name == "volatility") return ResponseKind::Volatility;
    if (name == "volume") return ResponseKind::Volume;
    throw ConfigError("unknown response kind '" + name + "'");
}

namespace {

gam::Smooth make_daily_smooth(const SeasonCovariates& cov, const SeasonalityConfig& config) {
    const double bins = static_cast<double>(cov.bins_per_day);
    if (config.daily_cyclic) {
        // Equally spaced knots over the whole day; the period closes the
        // wrap from the last knot back to bin 0.
        std::vector<double> knots;
        const int k = std::max(config.daily_knots, 3);
        for (int i = 0; i < k; ++i) {
            knots.push_back(bins * static_cast<double>(i) / static_cast<double>(k));
        }
        return gam::Smooth::cyclic_cubic("daily", std::move(knots), bins);
    }
    std::vector<double> binvals(cov.time_of_day_bin.begin(), cov.time_of_day_bin.end());
    auto knots = gam::quantile_knots(binvals, config.daily_knots);
    return gam::Smooth::cubic_regression("daily", std::move(knots));
}

gam::Smooth make_weekly_smooth(const SeasonalityConfig& config) {
    return gam::Smooth::pspline("weekly", config.weekly_knots, 1.0, 7.0, config.weekly_degree,
                                config.weekly_penalty_order, config.weekly_cyclic);
}

}  // namespace

SeasonalProfile fit_seasonality(std::span<const double> response, const SeasonCovariates& cov,
                                const SeasonalityConfig& config, ResponseKind kind) {
    const std::size_t n = response.size();
    if (n != cov.time_of_day_bin.size()) {
        throw DataError("fit_seasonality: response/covariate length mismatch");
    }
    const std::size_t basis_dim =
        static_cast<std::size_t>(config.daily_knots) + static_cast<std::size_t>(config.weekly_knots);
    if (n < 10 * basis_dim) {
        throw DataError("fit_seasonality: need at least 10x the total basis dimension (" +
                        std::to_string(10 * basis_dim) + " observations)");
    }

    SeasonalProfile profile;
    profile.response = kind;
    profile.bins_per_day = cov.bins_per_day;
    profile.tz_offset_minutes = cov.tz_offset_minutes;
    profile.interval_s = cov.interval_s;

    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) y(static_cast<Eigen::Index>(i)) = response[i];
    const double mean = y.mean();
    const double tss = (y.array() - mean).square().sum();
    if (tss <= 0.0) {
        // Documented degenerate rule: flat curves, zero bands, R^2 = 0.
        profile.degenerate = true;
        profile.daily_effect.assign(static_cast<std::size_t>(cov.bins_per_day), 0.0);
        profile.daily_lower = profile.daily_effect;
        profile.daily_upper = profile.daily_effect;
        profile.weekly_effect.assign(7, 0.0);
        profile.weekly_lower = profile.weekly_effect;
        profile.weekly_upper = profile.weekly_effect;
        return profile;
    }

    std::vector<gam::TermData> terms(2);
    terms[0].smooth = make_daily_smooth(cov, config);
    terms[0].x.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        terms[0].x(static_cast<Eigen::Index>(i)) = static_cast<double>(cov.time_of_day_bin[i]);
    }
    terms[1].smooth = make_weekly_smooth(config);
    terms[1].x.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        terms[1].x(static_cast<Eigen::Index>(i)) = static_cast<double>(cov.day_of_week[i]);
    }

    gam::LambdaGrid grid;
    grid.log10_min = config.lambda_log10_min;
    grid.log10_max = config.lambda_log10_max;
    const auto selection = gam::select_lambda(y, terms, grid);
    const gam::GamFit& fit = selection.fit;

    profile.lambda_daily = selection.lambdas(0);
    profile.lambda_weekly = selection.lambdas(1);
    profile.edf_daily = fit.terms[0].edf;
    profile.edf_weekly = fit.terms[1].edf;
    profile.edf_total = fit.edf_total;
    profile.gcv = fit.gcv;
    profile.r_squared = fit.r_squared;

    Eigen::VectorXd daily_grid(cov.bins_per_day);
    for (int b = 0; b < cov.bins_per_day; ++b) daily_grid(b) = static_cast<double>(b);
    const auto daily = gam::predict_with_bands(fit, "daily", daily_grid);
    Eigen::VectorXd weekly_grid(7);
    for (int d = 0; d < 7; ++d) weekly_grid(d) = static_cast<double>(d + 1);
    const auto weekly = gam::predict_with_bands(fit, "weekly", weekly_grid);

    // The fit constrains each smooth to sum to zero over the sample; the
    // profile curves are additionally centered over their full grids (the
    // sample need not cover bins and weekdays evenly), shifting the
    // constant into the intercept.
    auto to_centered = [](const gam::EffectCurve& c, std::vector<double>& effect,
                          std::vector<double>& lower, std::vector<double>& upper) {
        const double shift = c.effect.mean();
        auto to_vec = [shift](const Eigen::VectorXd& v) {
            std::vector<double> out(static_cast<std::size_t>(v.size()));
            for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v(i) - shift;
            return out;
        };
        effect = to_vec(c.effect);
        lower = to_vec(c.lower);
        upper = to_vec(c.upper);
    };
    to_centered(daily, profile.daily_effect, profile.daily_lower, profile.daily_upper);
    to_centered(weekly, profile.weekly_effect, profile.weekly_lower, profile.weekly_upper);
    return profile;
}

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

QualitativeReport qualitative_checks(const SeasonalProfile& profile, int peak_window_start_minute,
                                     int peak_window_end_minute) {
    QualitativeReport report;
    if (profile.daily_effect.empty() || profile.weekly_effect.size() != 7) {
        report.note = "profile incomplete";
        return report;
    }

    std::vector<double> daily_width(profile.daily_effect.size());
    for (std::size_t i = 0; i < daily_width.size(); ++i) {
        daily_width[i] = profile.daily_upper[i] - profile.daily_lower[i];
    }
    std::vector<double> weekly_width(7);
    for (std::size_t i = 0; i < 7; ++i) {
        weekly_width[i] = profile.weekly_upper[i] - profile.weekly_lower[i];
    }
    const double daily_band = median_of(daily_width);
    const double weekly_band = median_of(weekly_width);

    const auto [dmin_it, dmax_it] =
        std::minmax_element(profile.daily_effect.begin(), profile.daily_effect.end());
    report.daily_significant = (*dmax_it - *dmin_it) > daily_band;
    report.peak_bin = static_cast<int>(dmax_it - profile.daily_effect.begin());
    report.trough_bin = static_cast<int>(dmin_it - profile.daily_effect.begin());

    const double weekday_mean =
        std::accumulate(profile.weekly_effect.begin(), profile.weekly_effect.begin() + 5, 0.0) / 5.0;
    const double weekend_mean = 0.5 * (profile.weekly_effect[5] + profile.weekly_effect[6]);
    const auto [wmin_it, wmax_it] =
        std::minmax_element(profile.weekly_effect.begin(), profile.weekly_effect.end());
    report.weekly_significant = (*wmax_it - *wmin_it) > weekly_band;

    const double minutes_per_bin = static_cast<double>(profile.interval_s) / 60.0;
    if (report.daily_significant) {
        const double peak_minute = static_cast<double>(report.peak_bin) * minutes_per_bin;
        report.evening_peak = peak_minute >= static_cast<double>(peak_window_start_minute) &&
                              peak_minute <= static_cast<double>(peak_window_end_minute);
        const double trough_minute = static_cast<double>(report.trough_bin) * minutes_per_bin;
        report.night_low = trough_minute >= 0.0 && trough_minute <= 6.0 * 60.0;
    }
    if (report.weekly_significant) {
        report.weekend_trough = (weekday_mean - weekend_mean) > weekly_band;
    }
    if (!report.daily_significant && !report.weekly_significant) {
        report.note = "no significant pattern";
    }
    return report;
}

}  // namespace hfseason::seasonality
