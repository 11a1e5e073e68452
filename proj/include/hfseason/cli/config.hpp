#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hfseason/ingest.hpp"
#include "hfseason/seasonality.hpp"

namespace hfseason::cli {

struct AssetInput {
    std::string symbol;
    std::string path;
    bool operator==(const AssetInput&) const = default;
};

/// Full pipeline configuration: flat key=value file plus flag overrides
/// (flags win, HFSEASON_OUT overrides the output directory in between).
struct RunConfig {
    std::vector<AssetInput> assets;     // asset.<SYMBOL> = <path>
    AssetInput index;                   // index = <SYMBOL>:<path>, the regime series
    std::int64_t interval_s = 300;
    std::int64_t candle_interval_s = 3600;
    bool has_window = false;
    std::int64_t window_start_day = 0;  // UTC epoch days, inclusive
    std::int64_t window_end_day = 0;
    int tz_offset_minutes = 60;
    ingest::GapPolicy gap_policy = ingest::GapPolicy::ForwardFill;
    bool exclude_gap_filled = false;
    seasonality::SeasonalityConfig season;
    seasonality::ResponseKind response = seasonality::ResponseKind::AbsReturn;
    std::string out_dir = "out";
    int jobs = 0;  // 0 = available parallelism
    bool skip_bad_assets = false;
    bool svg = false;

    bool operator==(const RunConfig&) const = default;
};

/// Parses a flat key=value file. Unknown keys and malformed values are
/// collected and reported together in one ConfigError.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Applies one key=value assignment (also used for flag overrides).
/// Returns an error message, or empty on success.
std::string apply_config_key(RunConfig& config, const std::string& key, const std::string& value);

/// Canonical serialization: sorted keys, one per line. Execution-only
/// settings (jobs) and the output location are omitted so that run
/// identity depends only on what is computed. parse_config_text of this
/// text reproduces the config (modulo jobs/out_dir).
std::string config_to_text(const RunConfig& config);

/// Checks every invariant at once and throws ConfigError listing all
/// violations.
void validate_config(const RunConfig& config);

/// "5m" / "300s" / "1h" / "1d" <-> seconds.
std::int64_t parse_duration_s(const std::string& text);
std::string format_duration_s(std::int64_t seconds);

}  // namespace hfseason::cli
