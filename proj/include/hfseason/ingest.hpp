#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hfseason::ingest {

/// One raw market observation before grid alignment. Raw feeds are
/// irregularly spaced; build_grid buckets them onto a fixed interval.
struct RawRecord {
    std::int64_t timestamp_ms = 0;  // UTC epoch milliseconds
    double price = 0.0;             // quote currency per coin, > 0
    double volume = 0.0;            // coin units, >= 0
    std::string asset;
};

/// One OHLCV observation on the interval grid.
struct Bar {
    std::int64_t open_time_ms = 0;  // exact multiple of interval from midnight UTC
    std::int64_t interval_s = 300;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;
    bool gap_filled = false;
};

struct GridSeries {
    std::string asset;
    std::int64_t interval_s = 300;
    std::vector<Bar> bars;              // strictly increasing by exactly one interval
    int tz_offset_minutes = 60;         // display only; storage is UTC
};

/// Column mapping for parse_csv. Tick files name timestamp/price/volume;
/// pre-barred files name timestamp/open/high/low/close/volume instead (the
/// close is then taken as the record price).
struct CsvSchema {
    std::string timestamp = "timestamp";
    std::string price = "price";
    std::string volume = "volume";
    std::string open;   // set open..close to switch to pre-barred mode
    std::string high;
    std::string low;
    std::string close;
    std::string asset;                    // label stamped on records
    double max_bad_row_fraction = 0.001;  // row-error tolerance before failing
};

struct RowError {
    std::size_t line = 0;  // 1-based, header is line 1
    std::string message;
};

struct ParseResult {
    std::vector<RawRecord> records;  // in file order
    std::vector<RowError> row_errors;
    std::size_t total_rows = 0;
};

/// Reads a comma-separated UTF-8 file with one header row. Timestamps may be
/// ISO-8601 with zone or integer epoch milliseconds (detected per value).
/// Malformed rows are collected with their line numbers; the whole parse
/// fails only when the bad-row fraction exceeds the schema threshold.
/// Throws DataError on missing file/column or when the threshold is crossed.
ParseResult parse_csv(const std::string& path, const CsvSchema& schema);

enum class GapPolicy { ForwardFill, Drop };

struct GridBuildResult {
    GridSeries series;
    std::vector<std::int64_t> hole_open_times_ms;  // only populated under Drop
};

/// Buckets records onto the interval grid. Within a bucket: open = first
/// price, high = max, low = min, close = last, volume = sum (records are
/// stable-sorted by timestamp first, so file order breaks timestamp ties).
/// Empty interior buckets are forward-filled from the previous close
/// (volume 0, gap_filled flag set) or dropped with a hole report.
GridBuildResult build_grid(std::span<const RawRecord> records, std::int64_t interval_s,
                           GapPolicy gap_policy = GapPolicy::ForwardFill,
                           int tz_offset_minutes = 60);

/// CSV round trip for GridSeries: header
/// open_time,open,high,low,close,volume,gap_filled with ISO-8601 UTC times.
std::string grid_to_csv(const GridSeries& series);
GridSeries grid_from_csv_text(const std::string& text, const std::string& asset,
                              int tz_offset_minutes = 60);
GridSeries read_grid_csv(const std::string& path, const std::string& asset,
                         int tz_offset_minutes = 60);
void write_grid_csv(const GridSeries& series, const std::string& path);

}  // namespace hfseason::ingest
