#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>

#include "hfseason/errors.hpp"
#include "hfseason/ingest.hpp"
#include "hfseason/timeutil.hpp"

using namespace hfseason;
using namespace hfseason::ingest;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    return path.string();
}

}  // namespace

TEST_CASE("parse_csv maps fields directly") {
    const auto path = write_temp("ingest_basic.csv",
                                 "timestamp,price,volume\n"
                                 "2018-07-01T00:00:00Z,6385.0,1.2\n");
    CsvSchema schema;
    schema.asset = "BTC";
    const auto result = parse_csv(path, schema);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].timestamp_ms == 1530403200000);
    CHECK(result.records[0].price == 6385.0);
    CHECK(result.records[0].volume == 1.2);
    CHECK(result.records[0].asset == "BTC");
    CHECK(result.row_errors.empty());
}

TEST_CASE("parse_csv accepts epoch milliseconds") {
    const auto path = write_temp("ingest_epoch.csv",
                                 "timestamp,price,volume\n"
                                 "1530403200000,6385.0,1.2\n");
    const auto result = parse_csv(path, CsvSchema{});
    REQUIRE(result.records.size() == 1);
    CHECK(timeutil::format_utc(result.records[0].timestamp_ms) == "2018-07-01T00:00:00Z");
}

TEST_CASE("parse_csv collects row errors with line numbers") {
    const auto path = write_temp("ingest_bad.csv",
                                 "timestamp,price,volume\n"
                                 "2018-07-01T00:00:00Z,10,1\n"
                                 "2018-07-01T00:01:00Z,10,-1\n"   // negative volume
                                 "2018-07-01T00:02:00Z,-5,1\n"    // non-positive price
                                 "not-a-time,10,1\n"
                                 "2018-07-01T00:04:00Z,10,1\n");
    CsvSchema schema;
    schema.max_bad_row_fraction = 0.8;
    const auto result = parse_csv(path, schema);
    CHECK(result.records.size() == 2);
    REQUIRE(result.row_errors.size() == 3);
    CHECK(result.row_errors[0].line == 3);
    CHECK(result.row_errors[0].message == "negative volume");
    CHECK(result.row_errors[1].line == 4);
    CHECK(result.row_errors[2].line == 5);
}

TEST_CASE("parse_csv fails above the bad-row threshold") {
    const auto path = write_temp("ingest_thresh.csv",
                                 "timestamp,price,volume\n"
                                 "2018-07-01T00:00:00Z,10,1\n"
                                 "bad,10,1\n");
    CHECK_THROWS_AS(parse_csv(path, CsvSchema{}), DataError);  // default tolerance 0.1%
}

TEST_CASE("parse_csv reports missing columns as schema errors") {
    const auto path = write_temp("ingest_schema.csv", "time,price,volume\n1,2,3\n");
    CHECK_THROWS_WITH_AS(parse_csv(path, CsvSchema{}),
                         doctest::Contains("missing column 'timestamp'"), DataError);
}

TEST_CASE("parse_csv pre-barred schema uses the close as price") {
    const auto path = write_temp("ingest_bars.csv",
                                 "timestamp,open,high,low,close,volume\n"
                                 "2018-07-01T00:00:00Z,1,3,0.5,2,10\n");
    CsvSchema schema;
    schema.open = "open";
    schema.high = "high";
    schema.low = "low";
    schema.close = "close";
    const auto result = parse_csv(path, schema);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].price == 2.0);
    CHECK(result.records[0].volume == 10.0);
}

TEST_CASE("build_grid single-bucket reduction") {
    std::vector<RawRecord> records = {
        {60'000, 10.0, 1.0, "X"},   // 00:01
        {180'000, 12.0, 2.0, "X"},  // 00:03
    };
    const auto result = build_grid(records, 300);
    REQUIRE(result.series.bars.size() == 1);
    const Bar& b = result.series.bars[0];
    CHECK(b.open_time_ms == 0);
    CHECK(b.open == 10.0);
    CHECK(b.high == 12.0);
    CHECK(b.low == 10.0);
    CHECK(b.close == 12.0);
    CHECK(b.volume == 3.0);
    CHECK_FALSE(b.gap_filled);
}

TEST_CASE("build_grid forward-fills empty buckets") {
    std::vector<RawRecord> records = {
        {0, 10.0, 1.0, "X"},
        {30'000, 11.0, 1.0, "X"},
        {650'000, 12.0, 2.0, "X"},  // bucket 2; bucket 1 empty
    };
    const auto result = build_grid(records, 300, GapPolicy::ForwardFill);
    REQUIRE(result.series.bars.size() == 3);
    const Bar& filled = result.series.bars[1];
    CHECK(filled.gap_filled);
    CHECK(filled.open == 11.0);
    CHECK(filled.high == 11.0);
    CHECK(filled.low == 11.0);
    CHECK(filled.close == 11.0);
    CHECK(filled.volume == 0.0);
}

TEST_CASE("build_grid drop policy reports holes") {
    std::vector<RawRecord> records = {
        {0, 10.0, 1.0, "X"},
        {650'000, 12.0, 2.0, "X"},
    };
    const auto result = build_grid(records, 300, GapPolicy::Drop);
    CHECK(result.series.bars.size() == 2);
    REQUIRE(result.hole_open_times_ms.size() == 1);
    CHECK(result.hole_open_times_ms[0] == 300'000);
}

TEST_CASE("build_grid rejects degenerate input") {
    CHECK_THROWS_AS(build_grid({}, 300), DataError);
    std::vector<RawRecord> one = {{0, 10.0, 1.0, "X"}};
    CHECK_THROWS_AS(build_grid(one, 300), DataError);
    std::vector<RawRecord> same = {{5, 10.0, 1.0, "X"}, {5, 11.0, 1.0, "X"}};
    CHECK_THROWS_AS(build_grid(same, 300), DataError);
}

TEST_CASE("build_grid matches a brute-force group-by on random records") {
    std::mt19937_64 rng(123);
    std::uniform_int_distribution<std::int64_t> ts(0, 86'400'000 - 1);
    std::uniform_real_distribution<double> price(1.0, 100.0);
    std::uniform_real_distribution<double> vol(0.0, 5.0);

    std::vector<RawRecord> records;
    for (int i = 0; i < 10'000; ++i) {
        records.push_back({ts(rng), price(rng), vol(rng), "X"});
    }
    const std::int64_t interval_ms = 300'000;
    const auto result = build_grid(records, 300, GapPolicy::ForwardFill);

    // Brute force: stable order by timestamp, then group.
    std::vector<RawRecord> sorted = records;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const RawRecord& a, const RawRecord& b) {
                         return a.timestamp_ms < b.timestamp_ms;
                     });
    std::map<std::int64_t, std::vector<RawRecord>> groups;
    for (const auto& r : sorted) groups[r.timestamp_ms / interval_ms].push_back(r);

    std::size_t nonfilled = 0;
    for (const Bar& b : result.series.bars) {
        if (b.gap_filled) continue;
        ++nonfilled;
        const auto it = groups.find(b.open_time_ms / interval_ms);
        REQUIRE(it != groups.end());
        const auto& g = it->second;
        double high = g[0].price, low = g[0].price, volsum = 0.0;
        for (const auto& r : g) {
            high = std::max(high, r.price);
            low = std::min(low, r.price);
            volsum += r.volume;
        }
        CHECK(b.open == g.front().price);
        CHECK(b.close == g.back().price);
        CHECK(b.high == high);
        CHECK(b.low == low);
        CHECK(b.volume == doctest::Approx(volsum).epsilon(1e-12));
    }
    CHECK(nonfilled == groups.size());

    // Bar count under forward fill.
    const std::int64_t first = sorted.front().timestamp_ms / interval_ms;
    const std::int64_t last = sorted.back().timestamp_ms / interval_ms;
    CHECK(result.series.bars.size() == static_cast<std::size_t>(last - first + 1));
}

TEST_CASE("re-gridding the closes reproduces the close series") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> ts(0, 7'200'000);
    std::uniform_real_distribution<double> price(1.0, 100.0);
    std::vector<RawRecord> records;
    for (int i = 0; i < 500; ++i) records.push_back({ts(rng), price(rng), 1.0, "X"});
    const auto first = build_grid(records, 300).series;

    std::vector<RawRecord> closes;
    for (const Bar& b : first.bars) closes.push_back({b.open_time_ms, b.close, b.volume, "X"});
    const auto second = build_grid(closes, 300).series;
    REQUIRE(second.bars.size() == first.bars.size());
    for (std::size_t i = 0; i < first.bars.size(); ++i) {
        CHECK(second.bars[i].close == first.bars[i].close);
        CHECK(second.bars[i].open_time_ms == first.bars[i].open_time_ms);
    }
}

TEST_CASE("grid csv round trip") {
    std::vector<RawRecord> records = {
        {0, 10.5, 1.25, "X"},
        {301'000, 11.0, 0.5, "X"},
        {601'000, 9.75, 2.0, "X"},
    };
    const auto series = build_grid(records, 300).series;
    const std::string csv = grid_to_csv(series);
    const auto parsed = grid_from_csv_text(csv, series.asset);
    REQUIRE(parsed.bars.size() == series.bars.size());
    CHECK(parsed.interval_s == series.interval_s);
    for (std::size_t i = 0; i < series.bars.size(); ++i) {
        CHECK(parsed.bars[i].open_time_ms == series.bars[i].open_time_ms);
        CHECK(parsed.bars[i].open == series.bars[i].open);
        CHECK(parsed.bars[i].high == series.bars[i].high);
        CHECK(parsed.bars[i].low == series.bars[i].low);
        CHECK(parsed.bars[i].close == series.bars[i].close);
        CHECK(parsed.bars[i].volume == series.bars[i].volume);
        CHECK(parsed.bars[i].gap_filled == series.bars[i].gap_filled);
    }
    CHECK(grid_to_csv(parsed) == csv);
}

TEST_CASE("bar invariants hold on gridded output") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::int64_t> ts(0, 3'600'000);
    std::uniform_real_distribution<double> price(1.0, 10.0);
    std::vector<RawRecord> records;
    for (int i = 0; i < 2000; ++i) records.push_back({ts(rng), price(rng), 0.1, "X"});
    const auto series = build_grid(records, 300).series;
    for (const Bar& b : series.bars) {
        CHECK(b.low <= std::min(b.open, b.close));
        CHECK(b.high >= std::max(b.open, b.close));
        CHECK(b.low <= b.high);
        CHECK(b.open_time_ms % (series.interval_s * 1000) == 0);
    }
    for (std::size_t i = 1; i < series.bars.size(); ++i) {
        CHECK(series.bars[i].open_time_ms - series.bars[i - 1].open_time_ms ==
              series.interval_s * 1000);
    }
}
