#include <algorithm>
#include <cmath>

#include "hfseason/errors.hpp"
#include "hfseason/ingest.hpp"

namespace hfseason::ingest {

GridBuildResult build_grid(std::span<const RawRecord> records, std::int64_t interval_s,
                           GapPolicy gap_policy, int tz_offset_minutes) {
    if (records.empty()) throw DataError("build_grid: empty input");
    if (interval_s <= 0) throw DataError("build_grid: interval must be positive");

    std::vector<std::size_t> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return records[a].timestamp_ms < records[b].timestamp_ms;
    });

    bool two_distinct = false;
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (records[order[i]].timestamp_ms != records[order[0]].timestamp_ms) {
            two_distinct = true;
            break;
        }
    }
    if (!two_distinct) throw DataError("build_grid: need at least two distinct timestamps");

    const std::int64_t interval_ms = interval_s * 1000;
    auto bucket_of = [&](std::int64_t ts) {
        std::int64_t b = ts / interval_ms;
        if (ts % interval_ms < 0) b -= 1;  // epoch is midnight UTC, so buckets stay day-aligned
        return b;
    };

    GridBuildResult result;
    result.series.asset = records.front().asset;
    result.series.interval_s = interval_s;
    result.series.tz_offset_minutes = tz_offset_minutes;

    const std::int64_t first_bucket = bucket_of(records[order.front()].timestamp_ms);
    const std::int64_t last_bucket = bucket_of(records[order.back()].timestamp_ms);

    std::size_t idx = 0;
    double prev_close = 0.0;  // the first bucket always holds records
    for (std::int64_t bucket = first_bucket; bucket <= last_bucket; ++bucket) {
        Bar bar;
        bar.open_time_ms = bucket * interval_ms;
        bar.interval_s = interval_s;
        bool any = false;
        while (idx < order.size() && bucket_of(records[order[idx]].timestamp_ms) == bucket) {
            const RawRecord& r = records[order[idx]];
            if (!any) {
                bar.open = bar.high = bar.low = bar.close = r.price;
                bar.volume = r.volume;
                any = true;
            } else {
                bar.high = std::max(bar.high, r.price);
                bar.low = std::min(bar.low, r.price);
                bar.close = r.price;
                bar.volume += r.volume;
            }
            ++idx;
        }
        if (any) {
            prev_close = bar.close;
            result.series.bars.push_back(bar);
        } else if (gap_policy == GapPolicy::ForwardFill) {
            bar.open = bar.high = bar.low = bar.close = prev_close;
            bar.volume = 0.0;
            bar.gap_filled = true;
            result.series.bars.push_back(bar);
        } else {
            result.hole_open_times_ms.push_back(bar.open_time_ms);
        }
    }
    return result;
}

}  // namespace hfseason::ingest
