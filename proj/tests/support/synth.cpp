#include "synth.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "hfseason/timeutil.hpp"

namespace synth {

namespace {

constexpr double kTwoPi = 6.283185307179586;

int local_bin(std::int64_t ts_ms, std::int64_t interval_s, int tz_offset_minutes) {
    const std::int64_t local = ts_ms + static_cast<std::int64_t>(tz_offset_minutes) * 60'000;
    std::int64_t rem = local % 86'400'000;
    if (rem < 0) rem += 86'400'000;
    return static_cast<int>(rem / (interval_s * 1000));
}

int local_dow(std::int64_t ts_ms, int tz_offset_minutes) {
    const std::int64_t day = hfseason::timeutil::local_epoch_day(ts_ms, tz_offset_minutes);
    return hfseason::timeutil::day_of_week(day);
}

}  // namespace

SeasonalSeries seasonal_series(const SeasonalSpec& spec) {
    SeasonalSeries out;
    const int bins = static_cast<int>(86'400 / spec.interval_s);
    const std::int64_t interval_ms = spec.interval_s * 1000;
    const std::int64_t count = static_cast<std::int64_t>(spec.days) * bins;
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_sd);
    out.timestamps_ms.reserve(static_cast<std::size_t>(count));
    out.values.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        const std::int64_t ts = spec.start_ms + i * interval_ms;
        const int bin = local_bin(ts, spec.interval_s, spec.tz_offset_minutes);
        const int dow = local_dow(ts, spec.tz_offset_minutes);
        double y = spec.sine_amplitude *
                   std::cos(kTwoPi * static_cast<double>(bin - spec.peak_bin) /
                            static_cast<double>(bins));
        if (dow >= 6) y += spec.weekend_level;
        if (spec.noise_sd > 0.0) y += noise(rng);
        out.timestamps_ms.push_back(ts);
        out.values.push_back(y);
    }
    return out;
}

FixturePaths write_market_fixture(const std::string& dir, int days, std::uint64_t seed) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    const std::int64_t start_ms = 1530403200000;  // 2018-07-01T00:00:00Z
    const std::int64_t interval_ms = 300'000;
    const int buckets = days * 288;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> shock(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    struct AssetDef {
        const char* symbol;
        double price;
        double beta;   // loading on the common factor
        bool epoch_ms; // timestamp column format
    };
    const AssetDef defs[] = {
        {"AAA", 6500.0, 1.0, true},
        {"BBB", 450.0, 0.8, false},
        {"CCC", 0.47, 0.5, false},
    };

    std::vector<std::string> lines[3];
    std::vector<double> index_level;
    double idx = 1000.0;

    std::vector<double> last_price = {defs[0].price, defs[1].price, defs[2].price};
    for (int b = 0; b < buckets; ++b) {
        const std::int64_t open = start_ms + static_cast<std::int64_t>(b) * interval_ms;
        const int bin = local_bin(open, 300, 60);
        const int dow = local_dow(open, 60);
        // Mild diurnal + weekend activity pattern in volatility and volume.
        const double activity =
            (0.7 + 0.5 * std::cos(kTwoPi * (bin - 216) / 288.0)) * (dow >= 6 ? 0.55 : 1.0);
        const double common = shock(rng) * 0.002 * activity;
        double idx_ret = common;
        for (int a = 0; a < 3; ++a) {
            const double own = shock(rng) * 0.003 * activity;
            const double ret = defs[a].beta * common + own;
            last_price[a] *= std::exp(ret);
            idx_ret += 0.1 * ret;

            // A couple of deterministic dead buckets per asset exercise
            // forward filling; everything else gets 1-3 in-bucket ticks.
            if ((b + 37 * a) % 613 == 0 && b != 0 && b != buckets - 1) continue;
            const int ticks = 1 + static_cast<int>(unif(rng) * 3.0);
            for (int t = 0; t < ticks; ++t) {
                const std::int64_t ts =
                    open + static_cast<std::int64_t>(unif(rng) * 299'000.0);
                const double price = last_price[a] * std::exp(shock(rng) * 0.0005);
                const double volume = (0.5 + unif(rng)) * 12.0 * activity;
                char buf[160];
                if (defs[a].epoch_ms) {
                    std::snprintf(buf, sizeof(buf), "%lld,%.8f,%.6f",
                                  static_cast<long long>(ts), price, volume);
                } else {
                    std::snprintf(buf, sizeof(buf), "%s,%.8f,%.6f",
                                  hfseason::timeutil::format_utc(ts).c_str(), price, volume);
                }
                lines[a].push_back(buf);
            }
        }
        idx *= std::exp(idx_ret);
        index_level.push_back(idx);
    }

    FixturePaths out;
    for (int a = 0; a < 3; ++a) {
        const std::string path = dir + "/" + defs[a].symbol + ".csv";
        std::ofstream f(path, std::ios::binary);
        f << "timestamp,price,volume\n";
        for (const auto& l : lines[a]) f << l << "\n";
        out.assets.emplace_back(defs[a].symbol, path);
    }

    out.index_symbol = "IDX";
    out.index_path = dir + "/IDX.csv";
    std::ofstream f(out.index_path, std::ios::binary);
    f << "timestamp,price,volume\n";
    for (int b = 0; b < buckets; ++b) {
        const std::int64_t ts = start_ms + static_cast<std::int64_t>(b) * interval_ms;
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s,%.8f,%.6f",
                      hfseason::timeutil::format_utc(ts).c_str(),
                      index_level[static_cast<std::size_t>(b)], 0.0);
        f << buf << "\n";
    }
    return out;
}

}  // namespace synth
