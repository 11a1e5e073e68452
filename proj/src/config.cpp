#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>

#include "hfseason/cli/config.hpp"
#include "hfseason/errors.hpp"
#include "hfseason/report/artifacts.hpp"
#include "hfseason/timeutil.hpp"

namespace hfseason::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v, bool& out) {
    if (v == "true" || v == "1" || v == "yes") {
        out = true;
        return true;
    }
    if (v == "false" || v == "0" || v == "no") {
        out = false;
        return true;
    }
    return false;
}

bool parse_int(const std::string& v, int& out) {
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    return ec == std::errc() && p == v.data() + v.size();
}

bool parse_double(const std::string& v, double& out) {
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    return ec == std::errc() && p == v.data() + v.size();
}

}  // namespace

std::int64_t parse_duration_s(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError("empty duration");
    char unit = t.back();
    std::string num = t;
    std::int64_t mult = 1;
    if (unit == 's' || unit == 'm' || unit == 'h' || unit == 'd') {
        num = t.substr(0, t.size() - 1);
        mult = unit == 's' ? 1 : unit == 'm' ? 60 : unit == 'h' ? 3600 : 86400;
    }
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (ec != std::errc() || p != num.data() + num.size() || v <= 0) {
        throw ConfigError("invalid duration '" + text + "'");
    }
    return v * mult;
}

std::string format_duration_s(std::int64_t seconds) {
    if (seconds % 86400 == 0) return std::to_string(seconds / 86400) + "d";
    if (seconds % 3600 == 0) return std::to_string(seconds / 3600) + "h";
    if (seconds % 60 == 0) return std::to_string(seconds / 60) + "m";
    return std::to_string(seconds) + "s";
}

std::string apply_config_key(RunConfig& config, const std::string& key, const std::string& value) {
    try {
        if (key.rfind("asset.", 0) == 0) {
            const std::string symbol = key.substr(6);
            if (symbol.empty()) return "asset key needs a symbol: " + key;
            auto it = std::find_if(config.assets.begin(), config.assets.end(),
                                   [&](const AssetInput& a) { return a.symbol == symbol; });
            if (it != config.assets.end()) {
                it->path = value;
            } else {
                config.assets.push_back({symbol, value});
            }
            return "";
        }
        if (key == "index") {
            const std::size_t colon = value.find(':');
            if (colon == std::string::npos) return "index must be SYMBOL:path";
            config.index = {value.substr(0, colon), value.substr(colon + 1)};
            return "";
        }
        if (key == "interval") {
            config.interval_s = parse_duration_s(value);
            return "";
        }
        if (key == "candle_interval") {
            config.candle_interval_s = parse_duration_s(value);
            return "";
        }
        if (key == "window") {
            const std::size_t colon = value.find(':');
            if (colon == std::string::npos) return "window must be YYYY-MM-DD:YYYY-MM-DD";
            auto a = timeutil::parse_date(value.substr(0, colon));
            auto b = timeutil::parse_date(value.substr(colon + 1));
            if (!a || !b) return "window must be YYYY-MM-DD:YYYY-MM-DD";
            config.has_window = true;
            config.window_start_day = timeutil::days_from_civil(*a);
            config.window_end_day = timeutil::days_from_civil(*b);
            return "";
        }
        if (key == "tz_offset_minutes") {
            return parse_int(value, config.tz_offset_minutes) ? "" : "invalid tz_offset_minutes";
        }
        if (key == "gap_policy") {
            if (value == "forward_fill") {
                config.gap_policy = ingest::GapPolicy::ForwardFill;
            } else if (value == "drop") {
                config.gap_policy = ingest::GapPolicy::Drop;
            } else {
                return "gap_policy must be forward_fill or drop";
            }
            return "";
        }
        if (key == "exclude_gap_filled") {
            return parse_bool(value, config.exclude_gap_filled) ? "" : "invalid exclude_gap_filled";
        }
        if (key == "daily_knots") {
            return parse_int(value, config.season.daily_knots) ? "" : "invalid daily_knots";
        }
        if (key == "daily_cyclic") {
            return parse_bool(value, config.season.daily_cyclic) ? "" : "invalid daily_cyclic";
        }
        if (key == "weekly_knots") {
            return parse_int(value, config.season.weekly_knots) ? "" : "invalid weekly_knots";
        }
        if (key == "lambda_log10_min") {
            return parse_double(value, config.season.lambda_log10_min) ? ""
                                                                       : "invalid lambda_log10_min";
        }
        if (key == "lambda_log10_max") {
            return parse_double(value, config.season.lambda_log10_max) ? ""
                                                                       : "invalid lambda_log10_max";
        }
        if (key == "response") {
            config.response = seasonality::response_from_name(value);
            return "";
        }
        if (key == "out_dir") {
            config.out_dir = value;
            return "";
        }
        if (key == "jobs") {
            return parse_int(value, config.jobs) ? "" : "invalid jobs";
        }
        if (key == "skip_bad_assets") {
            return parse_bool(value, config.skip_bad_assets) ? "" : "invalid skip_bad_assets";
        }
        if (key == "svg") {
            return parse_bool(value, config.svg) ? "" : "invalid svg";
        }
    } catch (const std::exception& e) {
        return e.what();
    }
    return "unknown key '" + key + "'";
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig config;
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> errors;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
            continue;
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        const std::string err = apply_config_key(config, key, value);
        if (!err.empty()) errors.push_back("line " + std::to_string(line_no) + ": " + err);
    }
    if (!errors.empty()) {
        std::ostringstream msg;
        msg << "config errors:";
        for (const auto& e : errors) msg << "\n  - " << e;
        throw ConfigError(msg.str());
    }
    return config;
}

RunConfig parse_config_file(const std::string& path) {
    std::string text;
    try {
        text = report::read_text_file(path);
    } catch (const DataError& e) {
        throw ConfigError(std::string("cannot read config file: ") + e.what());
    }
    return parse_config_text(text);
}

std::string config_to_text(const RunConfig& config) {
    std::map<std::string, std::string> kv;
    for (const auto& a : config.assets) kv["asset." + a.symbol] = a.path;
    if (!config.index.symbol.empty()) kv["index"] = config.index.symbol + ":" + config.index.path;
    kv["interval"] = format_duration_s(config.interval_s);
    kv["candle_interval"] = format_duration_s(config.candle_interval_s);
    if (config.has_window) {
        kv["window"] = timeutil::format_date(config.window_start_day) + ":" +
                       timeutil::format_date(config.window_end_day);
    }
    kv["tz_offset_minutes"] = std::to_string(config.tz_offset_minutes);
    kv["gap_policy"] =
        config.gap_policy == ingest::GapPolicy::ForwardFill ? "forward_fill" : "drop";
    kv["exclude_gap_filled"] = config.exclude_gap_filled ? "true" : "false";
    kv["daily_knots"] = std::to_string(config.season.daily_knots);
    kv["daily_cyclic"] = config.season.daily_cyclic ? "true" : "false";
    kv["weekly_knots"] = std::to_string(config.season.weekly_knots);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", config.season.lambda_log10_min);
    kv["lambda_log10_min"] = buf;
    std::snprintf(buf, sizeof(buf), "%.17g", config.season.lambda_log10_max);
    kv["lambda_log10_max"] = buf;
    kv["response"] = seasonality::response_name(config.response);
    kv["skip_bad_assets"] = config.skip_bad_assets ? "true" : "false";
    kv["svg"] = config.svg ? "true" : "false";

    std::ostringstream out;
    for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
    return out.str();
}

void validate_config(const RunConfig& config) {
    std::vector<std::string> errors;
    if (config.assets.empty()) errors.push_back("no assets configured (asset.<SYMBOL> = path)");
    for (const auto& a : config.assets) {
        if (a.path.empty()) errors.push_back("asset " + a.symbol + ": empty path");
    }
    if (config.interval_s <= 0 || 86400 % config.interval_s != 0) {
        errors.push_back("interval must divide one day evenly");
    }
    if (config.candle_interval_s % config.interval_s != 0) {
        errors.push_back("candle_interval must be a multiple of interval");
    }
    if (config.has_window && config.window_start_day >= config.window_end_day) {
        errors.push_back("window start must precede window end");
    }
    if (config.season.daily_knots < 3) errors.push_back("daily_knots must be at least 3");
    if (config.season.weekly_knots < 5) {
        errors.push_back("weekly_knots must be at least 5 (cubic P-spline needs k > degree + 1)");
    }
    if (config.season.lambda_log10_min >= config.season.lambda_log10_max) {
        errors.push_back("lambda_log10_min must be below lambda_log10_max");
    }
    if (config.jobs < 0) errors.push_back("jobs must be >= 0");
    if (!errors.empty()) {
        std::ostringstream msg;
        msg << "invalid configuration:";
        for (const auto& e : errors) msg << "\n  - " << e;
        throw ConfigError(msg.str());
    }
}

}  // namespace hfseason::cli
