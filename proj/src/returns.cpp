#include <cmath>
#include <cstdio>
#include <sstream>

#include "hfseason/errors.hpp"
#include "hfseason/returns.hpp"
#include "hfseason/timeutil.hpp"

namespace hfseason::timeseries {

namespace {

void require_return_input(const ingest::GridSeries& series) {
    if (series.bars.size() < 2) throw DataError("returns: need at least 2 bars");
    for (const auto& b : series.bars) {
        if (!(b.close > 0.0)) throw DataError("returns: non-positive close price");
    }
}

}  // namespace

std::vector<double> simple_returns(const ingest::GridSeries& series) {
    require_return_input(series);
    std::vector<double> out(series.bars.size() - 1);
    for (std::size_t i = 0; i + 1 < series.bars.size(); ++i) {
        out[i] = (series.bars[i + 1].close - series.bars[i].close) / series.bars[i].close;
    }
    return out;
}

std::vector<double> log_returns(const ingest::GridSeries& series) {
    require_return_input(series);
    std::vector<double> out(series.bars.size() - 1);
    for (std::size_t i = 0; i + 1 < series.bars.size(); ++i) {
        out[i] = std::log(series.bars[i + 1].close / series.bars[i].close);
    }
    return out;
}

std::vector<double> abs_volatility(std::span<const double> log_rets) {
    std::vector<double> out(log_rets.size());
    for (std::size_t i = 0; i < log_rets.size(); ++i) out[i] = std::fabs(log_rets[i]);
    return out;
}

ReturnSeries make_return_series(const ingest::GridSeries& series) {
    ReturnSeries rs;
    rs.asset = series.asset;
    rs.interval_s = series.interval_s;
    rs.simple = simple_returns(series);
    rs.log = log_returns(series);
    rs.abs_log = abs_volatility(rs.log);
    rs.timestamps_ms.resize(rs.simple.size());
    rs.crosses_gap.resize(rs.simple.size());
    for (std::size_t i = 0; i + 1 < series.bars.size(); ++i) {
        rs.timestamps_ms[i] = series.bars[i + 1].open_time_ms;
        rs.crosses_gap[i] = series.bars[i].gap_filled || series.bars[i + 1].gap_filled;
    }
    return rs;
}

ingest::GridSeries aggregate_bars(const ingest::GridSeries& series, std::int64_t target_interval_s) {
    if (target_interval_s <= 0 || target_interval_s % series.interval_s != 0) {
        throw DataError("aggregate_bars: target interval must be an integer multiple of source");
    }
    ingest::GridSeries out;
    out.asset = series.asset;
    out.interval_s = target_interval_s;
    out.tz_offset_minutes = series.tz_offset_minutes;
    if (series.bars.empty()) return out;
    if (target_interval_s == series.interval_s) {
        out.bars = series.bars;
        return out;
    }

    const std::int64_t target_ms = target_interval_s * 1000;
    std::int64_t cur_bucket = 0;
    bool open = false;
    ingest::Bar agg;
    auto flush = [&] {
        if (open) out.bars.push_back(agg);
        open = false;
    };
    for (const ingest::Bar& b : series.bars) {
        std::int64_t bucket = b.open_time_ms / target_ms;
        if (b.open_time_ms % target_ms < 0) bucket -= 1;
        if (!open || bucket != cur_bucket) {
            flush();
            cur_bucket = bucket;
            agg = b;
            agg.open_time_ms = bucket * target_ms;
            agg.interval_s = target_interval_s;
            open = true;
        } else {
            agg.high = std::max(agg.high, b.high);
            agg.low = std::min(agg.low, b.low);
            agg.close = b.close;
            agg.volume += b.volume;
            agg.gap_filled = agg.gap_filled && b.gap_filled;
        }
    }
    flush();
    return out;
}

std::string returns_to_csv(const ReturnSeries& series) {
    std::ostringstream out;
    out << "timestamp,simple,log,abs_log\n";
    char buf[128];
    for (std::size_t i = 0; i < series.simple.size(); ++i) {
        std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g\n", series.simple[i], series.log[i],
                      series.abs_log[i]);
        out << timeutil::format_utc(series.timestamps_ms[i]) << buf;
    }
    return out.str();
}

}  // namespace hfseason::timeseries
