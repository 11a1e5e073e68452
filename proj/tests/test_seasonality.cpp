#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "hfseason/errors.hpp"
#include "hfseason/seasonality.hpp"
#include "hfseason/timeutil.hpp"
#include "support/oracles.hpp"
#include "support/synth.hpp"

using namespace hfseason;
using namespace hfseason::seasonality;

TEST_CASE("encode_covariates basic calendar arithmetic") {
    // 2018-07-02 is a Monday; midnight UTC at +60 is local 01:00 -> bin 12.
    const std::int64_t ts = *timeutil::parse_timestamp("2018-07-02T00:00:00Z");
    const auto cov = encode_covariates(std::vector<std::int64_t>{ts}, 300, 60);
    CHECK(cov.bins_per_day == 288);
    CHECK(cov.time_of_day_bin[0] == 12);
    CHECK(cov.day_of_week[0] == 1);
}

TEST_CASE("encode_covariates rolls the local day over") {
    // 2018-07-01T23:30:00Z at +60 is local 2018-07-02 00:30 -> bin 6, Monday.
    const std::int64_t ts = *timeutil::parse_timestamp("2018-07-01T23:30:00Z");
    const auto cov = encode_covariates(std::vector<std::int64_t>{ts}, 300, 60);
    CHECK(cov.time_of_day_bin[0] == 6);
    CHECK(cov.day_of_week[0] == 1);
}

TEST_CASE("encode_covariates matches the calendar oracle on random grid points") {
    std::mt19937_64 rng(163);
    std::uniform_int_distribution<std::int64_t> bucket(0, 400'000);
    std::uniform_int_distribution<int> tz(-720, 720);
    for (int rep = 0; rep < 5; ++rep) {
        const int offset = tz(rng);
        std::vector<std::int64_t> ts(2000);
        for (auto& t : ts) t = bucket(rng) * 300'000;
        const auto cov = encode_covariates(ts, 300, offset);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const std::int64_t local_ms = ts[i] + static_cast<std::int64_t>(offset) * 60'000;
            std::int64_t day = local_ms / 86'400'000;
            std::int64_t rem = local_ms % 86'400'000;
            if (rem < 0) {
                rem += 86'400'000;
                day -= 1;
            }
            CHECK(cov.time_of_day_bin[i] == static_cast<int>(rem / 300'000));
            const auto od = oracle::walk_from_epoch(day);
            CHECK(cov.day_of_week[i] == oracle::sakamoto_dow(od.year, od.month, od.day));
        }
    }
}

TEST_CASE("encode_covariates rejects off-grid timestamps") {
    CHECK_THROWS_AS(encode_covariates(std::vector<std::int64_t>{1234}, 300, 0), DataError);
    CHECK_THROWS_AS(encode_covariates(std::vector<std::int64_t>{0}, 7 * 60, 0), ConfigError);
}

namespace {

SeasonalProfile fit_synthetic(const synth::SeasonalSpec& spec, const SeasonalityConfig& config,
                              std::vector<double>* values_out = nullptr) {
    const auto series = synth::seasonal_series(spec);
    const auto cov = encode_covariates(series.timestamps_ms, spec.interval_s,
                                       spec.tz_offset_minutes);
    if (values_out) *values_out = series.values;
    return fit_seasonality(series.values, cov, config, ResponseKind::AbsReturn);
}

}  // namespace

TEST_CASE("recovers a diurnal sine with a flat weekly curve") {
    synth::SeasonalSpec spec;
    spec.noise_sd = 0.05;
    spec.peak_bin = 216;
    const auto profile = fit_synthetic(spec, SeasonalityConfig{});

    const auto peak = std::max_element(profile.daily_effect.begin(), profile.daily_effect.end());
    const int peak_bin = static_cast<int>(peak - profile.daily_effect.begin());
    CHECK(std::abs(peak_bin - spec.peak_bin) <= 2);

    double max_weekly = 0.0;
    for (double w : profile.weekly_effect) max_weekly = std::max(max_weekly, std::fabs(w));
    CHECK(max_weekly < 0.05);
    CHECK(profile.r_squared > 0.9);
}

TEST_CASE("recovers a weekend step with a flat daily curve") {
    synth::SeasonalSpec spec;
    spec.sine_amplitude = 0.0;
    spec.weekend_level = -1.0;
    spec.noise_sd = 0.05;
    const auto profile = fit_synthetic(spec, SeasonalityConfig{});

    const double weekday_mean =
        std::accumulate(profile.weekly_effect.begin(), profile.weekly_effect.begin() + 5, 0.0) /
        5.0;
    CHECK(weekday_mean - profile.weekly_effect[5] >= 0.8);  // Saturday
    CHECK(weekday_mean - profile.weekly_effect[6] >= 0.8);  // Sunday

    double max_daily = 0.0;
    for (double d : profile.daily_effect) max_daily = std::max(max_daily, std::fabs(d));
    CHECK(max_daily < 0.05);
}

TEST_CASE("profile curves sum to zero and have the right lengths") {
    synth::SeasonalSpec spec;
    spec.days = 13;  // uneven weekday coverage on purpose
    spec.weekend_level = -1.0;
    const auto profile = fit_synthetic(spec, SeasonalityConfig{});
    CHECK(profile.daily_effect.size() == 288);
    CHECK(profile.weekly_effect.size() == 7);
    CHECK(std::fabs(std::accumulate(profile.daily_effect.begin(), profile.daily_effect.end(),
                                    0.0)) < 1e-6);
    CHECK(std::fabs(std::accumulate(profile.weekly_effect.begin(), profile.weekly_effect.end(),
                                    0.0)) < 1e-6);
    for (std::size_t i = 0; i < profile.daily_effect.size(); ++i) {
        CHECK(profile.daily_lower[i] <= profile.daily_effect[i]);
        CHECK(profile.daily_upper[i] >= profile.daily_effect[i]);
    }
}

TEST_CASE("constant response takes the documented flat-curve path") {
    synth::SeasonalSpec spec;
    spec.days = 14;
    spec.sine_amplitude = 0.0;
    spec.noise_sd = 0.0;
    const auto series = synth::seasonal_series(spec);
    const auto cov = encode_covariates(series.timestamps_ms, 300, 60);
    const std::vector<double> constant(series.values.size(), 5.0);
    const auto profile = fit_seasonality(constant, cov, SeasonalityConfig{}, ResponseKind::Volume);
    CHECK(profile.degenerate);
    CHECK(profile.r_squared == 0.0);
    for (double v : profile.daily_effect) CHECK(v == 0.0);
    for (double v : profile.weekly_effect) CHECK(v == 0.0);
}

TEST_CASE("too little data is rejected") {
    std::vector<std::int64_t> ts(40);
    for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = static_cast<std::int64_t>(i) * 300'000;
    const auto cov = encode_covariates(ts, 300, 60);
    const std::vector<double> y(ts.size(), 1.0);
    CHECK_THROWS_WITH_AS(fit_seasonality(y, cov, SeasonalityConfig{}, ResponseKind::Volume),
                         doctest::Contains("basis dimension"), DataError);
}

TEST_CASE("a seven-day timestamp shift leaves the profile bit-identical") {
    synth::SeasonalSpec spec;
    spec.days = 21;
    spec.weekend_level = -0.5;
    const auto series = synth::seasonal_series(spec);

    std::vector<std::int64_t> shifted = series.timestamps_ms;
    for (auto& t : shifted) t += 7LL * 86'400'000;

    const auto cov_a = encode_covariates(series.timestamps_ms, 300, 60);
    const auto cov_b = encode_covariates(shifted, 300, 60);
    CHECK(cov_a.time_of_day_bin == cov_b.time_of_day_bin);
    CHECK(cov_a.day_of_week == cov_b.day_of_week);

    const auto pa = fit_seasonality(series.values, cov_a, SeasonalityConfig{},
                                    ResponseKind::AbsReturn);
    const auto pb = fit_seasonality(series.values, cov_b, SeasonalityConfig{},
                                    ResponseKind::AbsReturn);
    CHECK(pa.daily_effect == pb.daily_effect);
    CHECK(pa.weekly_effect == pb.weekly_effect);
    CHECK(pa.gcv == pb.gcv);
}

TEST_CASE("a timezone shift rotates the cyclic daily curve") {
    // Noiseless periodic signal, cyclic daily smooth with knots every 12
    // bins: shifting the display offset by +60 minutes rotates the fitted
    // curve by exactly 12 bins.
    synth::SeasonalSpec spec;
    spec.days = 14;
    spec.noise_sd = 0.0;
    spec.tz_offset_minutes = 0;
    const auto series = synth::seasonal_series(spec);

    SeasonalityConfig config;
    config.daily_cyclic = true;
    config.daily_knots = 24;

    const auto cov0 = encode_covariates(series.timestamps_ms, 300, 0);
    const auto cov60 = encode_covariates(series.timestamps_ms, 300, 60);
    const auto p0 = fit_seasonality(series.values, cov0, config, ResponseKind::AbsReturn);
    const auto p60 = fit_seasonality(series.values, cov60, config, ResponseKind::AbsReturn);

    for (int b = 0; b < 288; ++b) {
        const int rotated = (b + 12) % 288;
        CHECK(p60.daily_effect[static_cast<std::size_t>(rotated)] ==
              doctest::Approx(p0.daily_effect[static_cast<std::size_t>(b)]).epsilon(1e-6));
    }
}

TEST_CASE("qualitative checks flag the constructed patterns") {
    synth::SeasonalSpec spec;
    spec.peak_bin = 216;  // local 18:00
    spec.weekend_level = -1.0;
    spec.noise_sd = 0.05;
    const auto profile = fit_synthetic(spec, SeasonalityConfig{});
    const auto report = qualitative_checks(profile);
    CHECK(report.daily_significant);
    CHECK(report.evening_peak);
    CHECK(report.weekend_trough);
    // The cosine trough sits 12h from the peak, local 06:00, at the edge of
    // the night window.
    CHECK(report.trough_bin == doctest::Approx(72).epsilon(0.1));
}

TEST_CASE("qualitative checks stay silent on flat profiles") {
    SeasonalProfile flat;
    flat.bins_per_day = 288;
    flat.interval_s = 300;
    flat.daily_effect.assign(288, 0.0);
    flat.daily_lower.assign(288, -0.01);
    flat.daily_upper.assign(288, 0.01);
    flat.weekly_effect.assign(7, 0.0);
    flat.weekly_lower.assign(7, -0.01);
    flat.weekly_upper.assign(7, 0.01);
    const auto report = qualitative_checks(flat);
    CHECK_FALSE(report.daily_significant);
    CHECK_FALSE(report.evening_peak);
    CHECK_FALSE(report.night_low);
    CHECK_FALSE(report.weekend_trough);
    CHECK(report.note == "no significant pattern");
}
