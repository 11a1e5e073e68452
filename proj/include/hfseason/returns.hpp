#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hfseason/ingest.hpp"

namespace hfseason::timeseries {

/// Close-to-close returns of a grid series. Entry i is the return realized
/// at bar i+1, stamped with that bar's open time. crosses_gap marks returns
/// touching a forward-filled bar so downstream statistics can exclude them.
struct ReturnSeries {
    std::string asset;
    std::int64_t interval_s = 300;
    std::vector<std::int64_t> timestamps_ms;
    std::vector<double> simple;   // (P_t - P_{t-1}) / P_{t-1}
    std::vector<double> log;      // ln(P_t / P_{t-1})
    std::vector<double> abs_log;  // |log|, the intraday volatility measure
    std::vector<bool> crosses_gap;
};

std::vector<double> simple_returns(const ingest::GridSeries& series);
std::vector<double> log_returns(const ingest::GridSeries& series);
std::vector<double> abs_volatility(std::span<const double> log_rets);

ReturnSeries make_return_series(const ingest::GridSeries& series);

/// Merges source bars into coarser ones. The target interval must be an
/// integer multiple of the source interval; buckets align to midnight UTC.
ingest::GridSeries aggregate_bars(const ingest::GridSeries& series, std::int64_t target_interval_s);

/// CSV: timestamp,simple,log,abs_log (ISO-8601 UTC, full precision).
std::string returns_to_csv(const ReturnSeries& series);

}  // namespace hfseason::timeseries
