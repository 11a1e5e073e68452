#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "hfseason/errors.hpp"
#include "hfseason/ingest.hpp"
#include "hfseason/timeutil.hpp"

namespace hfseason::ingest {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc() && ptr == t.data() + t.size();
}

int find_column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (trim(header[i]) == name) return static_cast<int>(i);
    }
    return -1;
}

}  // namespace

ParseResult parse_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: " + path);
    const auto header = split_line(line);

    const bool barred = !schema.close.empty();
    const int ts_col = find_column(header, schema.timestamp);
    if (ts_col < 0) throw DataError("schema error: missing column '" + schema.timestamp + "' in " + path);

    int price_col = -1, open_col = -1, high_col = -1, low_col = -1;
    if (barred) {
        open_col = find_column(header, schema.open);
        high_col = find_column(header, schema.high);
        low_col = find_column(header, schema.low);
        price_col = find_column(header, schema.close);
        for (const auto& [col, name] :
             {std::pair{open_col, schema.open}, {high_col, schema.high}, {low_col, schema.low},
              {price_col, schema.close}}) {
            if (col < 0) throw DataError("schema error: missing column '" + name + "' in " + path);
        }
    } else {
        price_col = find_column(header, schema.price);
        if (price_col < 0)
            throw DataError("schema error: missing column '" + schema.price + "' in " + path);
    }
    const int vol_col = find_column(header, schema.volume);
    if (vol_col < 0) throw DataError("schema error: missing column '" + schema.volume + "' in " + path);

    ParseResult result;
    std::size_t line_no = 1;
    const int max_col = std::max({ts_col, price_col, vol_col, open_col, high_col, low_col});

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++result.total_rows;
        const auto fields = split_line(line);
        auto reject = [&](const std::string& why) {
            result.row_errors.push_back({line_no, why});
        };
        if (static_cast<int>(fields.size()) <= max_col) {
            reject("too few columns");
            continue;
        }
        auto ts = timeutil::parse_timestamp(fields[static_cast<std::size_t>(ts_col)]);
        if (!ts) {
            reject("unparseable timestamp '" + trim(fields[static_cast<std::size_t>(ts_col)]) + "'");
            continue;
        }
        double price = 0.0, volume = 0.0;
        if (!parse_double(fields[static_cast<std::size_t>(price_col)], price)) {
            reject("unparseable price");
            continue;
        }
        if (!parse_double(fields[static_cast<std::size_t>(vol_col)], volume)) {
            reject("unparseable volume");
            continue;
        }
        if (!(price > 0.0)) {
            reject("non-positive price");
            continue;
        }
        if (volume < 0.0) {
            reject("negative volume");
            continue;
        }
        result.records.push_back(RawRecord{*ts, price, volume, schema.asset});
    }

    if (result.total_rows == 0) throw DataError("no data rows in " + path);
    const double bad = static_cast<double>(result.row_errors.size()) /
                       static_cast<double>(result.total_rows);
    if (!result.row_errors.empty() && bad > schema.max_bad_row_fraction) {
        std::ostringstream msg;
        msg << "too many malformed rows in " << path << ": " << result.row_errors.size() << "/"
            << result.total_rows << " (first: line " << result.row_errors.front().line << ", "
            << result.row_errors.front().message << ")";
        throw DataError(msg.str());
    }
    return result;
}

std::string grid_to_csv(const GridSeries& series) {
    std::ostringstream out;
    out << "open_time,open,high,low,close,volume,gap_filled\n";
    char buf[128];
    for (const Bar& b : series.bars) {
        std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", b.open, b.high,
                      b.low, b.close, b.volume, b.gap_filled ? 1 : 0);
        out << timeutil::format_utc(b.open_time_ms) << buf;
    }
    return out.str();
}

GridSeries grid_from_csv_text(const std::string& text, const std::string& asset,
                              int tz_offset_minutes) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty grid csv");
    GridSeries series;
    series.asset = asset;
    series.tz_offset_minutes = tz_offset_minutes;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split_line(line);
        if (f.size() != 7) throw DataError("grid csv line " + std::to_string(line_no) + ": expected 7 fields");
        Bar b;
        auto ts = timeutil::parse_timestamp(f[0]);
        if (!ts) throw DataError("grid csv line " + std::to_string(line_no) + ": bad open_time");
        b.open_time_ms = *ts;
        double gap = 0.0;
        if (!parse_double(f[1], b.open) || !parse_double(f[2], b.high) ||
            !parse_double(f[3], b.low) || !parse_double(f[4], b.close) ||
            !parse_double(f[5], b.volume) || !parse_double(f[6], gap)) {
            throw DataError("grid csv line " + std::to_string(line_no) + ": bad numeric field");
        }
        b.gap_filled = gap != 0.0;
        series.bars.push_back(b);
    }
    if (series.bars.size() >= 2) {
        series.interval_s = (series.bars[1].open_time_ms - series.bars[0].open_time_ms) / 1000;
    }
    for (Bar& b : series.bars) b.interval_s = series.interval_s;
    return series;
}

GridSeries read_grid_csv(const std::string& path, const std::string& asset, int tz_offset_minutes) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open grid csv: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return grid_from_csv_text(buf.str(), asset, tz_offset_minutes);
}

void write_grid_csv(const GridSeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write grid csv: " + path);
    out << grid_to_csv(series);
}

}  // namespace hfseason::ingest
