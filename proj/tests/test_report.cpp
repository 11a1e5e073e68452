#include <doctest.h>

#include <json.hpp>
#include <filesystem>
#include <random>
#include <sstream>

#include "hfseason/errors.hpp"
#include "hfseason/report/artifacts.hpp"
#include "hfseason/report/digest.hpp"
#include "hfseason/report/manifest.hpp"
#include "hfseason/report/svg.hpp"
#include "hfseason/gam/select.hpp"

using namespace hfseason;
using namespace hfseason::report;

TEST_CASE("sha256 known answers") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // Block-boundary padding.
    CHECK(sha256_hex(std::string(64, 'a')) ==
          "ffe054fe7ae0cb6dc65c3af9b61d5209f439851db43d0ba5997337df154668eb");
}

namespace {

stats::SummaryStats btc_row() {
    stats::SummaryStats s;
    s.asset = "BTC";
    s.n = 17856;
    s.rho1_ret = -0.051234567;
    s.rho1_ret_sq = 0.131;
    s.rho1_abs_ret = 0.239;
    s.skewness = 1.2984;
    s.excess_kurtosis = 49.4351;
    s.jb_stat = 1823779.801;
    s.jb_pvalue = 0.0;
    return s;
}

}  // namespace

TEST_CASE("table1 formatting contract") {
    const std::string csv = table1_to_csv({btc_row()});
    CHECK(csv ==
          "asset,rho1_ret,rho1_ret_sq,rho1_abs_ret,skewness,excess_kurtosis,jb,jb_pvalue\n"
          "BTC,-0.05,0.13,0.24,1.30,49.44,1823779.80,0.00\n");
}

TEST_CASE("table1 rows are alphabetical and the JSON twin round-trips") {
    const std::vector<std::string> symbols = {"ZEC", "BTC", "XRP", "BCH", "ETH", "LTC",
                                              "DASH", "ETC", "REP", "STR", "XMR"};
    std::vector<stats::SummaryStats> rows;
    std::mt19937_64 rng(167);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const auto& s : symbols) {
        auto r = btc_row();
        r.asset = s;
        r.rho1_ret = u(rng);
        r.skewness = u(rng) * 3.0;
        rows.push_back(r);
    }
    const std::string csv = table1_to_csv(rows);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    std::string prev;
    std::size_t count = 0;
    while (std::getline(lines, line)) {
        const std::string asset = line.substr(0, line.find(','));
        CHECK(prev < asset);
        prev = asset;
        ++count;
    }
    CHECK(count == 11);

    const auto twin = table1_to_json(rows);
    const auto parsed = table1_from_json(nlohmann::json::parse(twin.dump()));
    REQUIRE(parsed.size() == rows.size());
    // Full precision survives, and re-rendering reproduces the CSV bytes.
    CHECK(table1_to_csv(parsed) == csv);
    auto sorted = rows;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.asset < b.asset; });
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        CHECK(parsed[i].asset == sorted[i].asset);
        CHECK(parsed[i].rho1_ret == sorted[i].rho1_ret);
        CHECK(parsed[i].skewness == sorted[i].skewness);
        CHECK(parsed[i].n == sorted[i].n);
    }
}

TEST_CASE("correlation table rendering") {
    stats::CorrelationMatrix m;
    m.assets = {"BCH", "BTC", "ETH"};
    m.regime = stats::Regime::Up;
    m.sample_count = 12345;
    m.values = {{1.0, 0.504, 0.47}, {0.504, 1.0, 0.55}, {0.47, 0.55, 1.0}};
    const std::string csv = corr_to_csv(m);
    CHECK(csv ==
          "UP,BCH,BTC,ETH\n"
          "BCH,,0.50,0.47\n"
          "BTC,0.50,,0.55\n"
          "ETH,0.47,0.55,\n");

    const auto parsed = corr_from_json(nlohmann::json::parse(corr_to_json(m).dump()));
    CHECK(corr_to_csv(parsed) == csv);
    CHECK(parsed.sample_count == m.sample_count);
    CHECK(parsed.values[0][1] == m.values[0][1]);
}

TEST_CASE("rendered correlation table is symmetric under label transposition") {
    std::mt19937_64 rng(173);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    stats::CorrelationMatrix m;
    m.assets = {"A", "B", "C", "D"};
    m.regime = stats::Regime::Down;
    m.values.assign(4, std::vector<double>(4, 1.0));
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            m.values[i][j] = m.values[j][i] = u(rng);
        }
    }
    const std::string csv = corr_to_csv(m);
    // Parse the body back and check cell (i,j) == cell (j,i).
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    std::vector<std::vector<std::string>> cells;
    while (std::getline(lines, line)) {
        std::vector<std::string> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        row.resize(5);
        cells.push_back(row);
    }
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(cells[i][j + 1] == cells[j][i + 1]);
        }
    }
}

TEST_CASE("density csv twin round trip") {
    stats::DensityCurve c;
    c.bandwidth = 0.0123456789;
    c.ref_mean = -0.0001;
    c.ref_sd = 0.01;
    std::mt19937_64 rng(179);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 64; ++i) {
        c.grid.push_back(-0.05 + 0.1 * i / 63.0);
        c.density.push_back(u(rng));
    }
    const auto parsed = density_from_json(nlohmann::json::parse(density_to_json(c).dump()));
    CHECK(density_to_csv(parsed) == density_to_csv(c));
    CHECK(parsed.bandwidth == c.bandwidth);
}

TEST_CASE("seasonal profile json round trip reproduces the csv artifacts") {
    seasonality::SeasonalProfile p;
    p.response = seasonality::ResponseKind::Volume;
    p.bins_per_day = 288;
    p.interval_s = 300;
    p.tz_offset_minutes = 60;
    p.lambda_daily = 12.5;
    p.lambda_weekly = 0.001;
    p.edf_daily = 9.7;
    p.edf_weekly = 3.2;
    p.edf_total = 13.9;
    p.gcv = 0.004;
    p.r_squared = 0.012;
    std::mt19937_64 rng(181);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int b = 0; b < 288; ++b) {
        const double e = g(rng);
        p.daily_effect.push_back(e);
        p.daily_lower.push_back(e - 0.1);
        p.daily_upper.push_back(e + 0.1);
    }
    for (int d = 0; d < 7; ++d) {
        const double e = g(rng);
        p.weekly_effect.push_back(e);
        p.weekly_lower.push_back(e - 0.2);
        p.weekly_upper.push_back(e + 0.2);
    }
    const auto parsed = profile_from_json(nlohmann::json::parse(profile_to_json(p).dump()));
    CHECK(profile_daily_csv(parsed) == profile_daily_csv(p));
    CHECK(profile_weekly_csv(parsed) == profile_weekly_csv(p));
    CHECK(profile_daily_csv(p).substr(0, 30) == "bin,local_time,effect,lower,up");
}

namespace {

ingest::GridSeries two_bars() {
    ingest::GridSeries s;
    s.asset = "X";
    s.interval_s = 300;
    s.bars = {
        {0, 300, 10.0, 12.0, 9.5, 11.0, 3.0, false},
        {300'000, 300, 11.0, 11.5, 10.0, 10.5, 2.0, false},
    };
    return s;
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

}  // namespace

TEST_CASE("candlestick svg has one glyph group per bar and is deterministic") {
    const auto svg1 = render_candles_svg(two_bars());
    const auto svg2 = render_candles_svg(two_bars());
    CHECK(svg1 == svg2);
    CHECK(count_occurrences(svg1, "<g class=\"candle\">") == 2);
    CHECK(svg1.find("<svg xmlns") == 0);

    ingest::GridSeries empty;
    CHECK_THROWS_AS(render_candles_svg(empty), DataError);
}

TEST_CASE("seasonal band polygon follows the affine data-to-pixel map") {
    std::vector<double> x, effect, lower, upper;
    std::mt19937_64 rng(191);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 25; ++i) {
        x.push_back(i);
        const double e = g(rng);
        effect.push_back(e);
        lower.push_back(e - 0.5 - 0.1 * i);
        upper.push_back(e + 0.3 + 0.05 * i);
    }
    const SvgLayout layout;
    const auto svg = render_seasonal_svg(x, effect, lower, upper, "band test", layout);

    // Recompute the map exactly as documented: x spans the margins, y spans
    // [min lower, max upper] inverted.
    double ymin = lower[0], ymax = upper[0];
    for (std::size_t i = 0; i < x.size(); ++i) {
        ymin = std::min(ymin, lower[i]);
        ymax = std::max(ymax, upper[i]);
    }
    const AxisMap xmap{x.front(), x.back(), layout.margin, layout.width - layout.margin};
    const AxisMap ymap{ymin, ymax, layout.height - layout.margin, layout.margin};

    const std::size_t start = svg.find("class=\"band\"");
    REQUIRE(start != std::string::npos);
    const std::size_t pstart = svg.find("points=\"", start) + 8;
    const std::size_t pend = svg.find('"', pstart);
    std::istringstream points(svg.substr(pstart, pend - pstart));
    std::vector<std::pair<double, double>> verts;
    std::string pair;
    while (points >> pair) {
        const auto comma = pair.find(',');
        verts.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
    }
    REQUIRE(verts.size() == 2 * x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(std::fabs(verts[i].first - xmap.to_px(x[i])) <= 0.5);
        CHECK(std::fabs(verts[i].second - ymap.to_px(upper[i])) <= 0.5);
        const auto& back = verts[2 * x.size() - 1 - i];
        CHECK(std::fabs(back.first - xmap.to_px(x[i])) <= 0.5);
        CHECK(std::fabs(back.second - ymap.to_px(lower[i])) <= 0.5);
    }
}

TEST_CASE("density svg renders both curves deterministically") {
    stats::DensityCurve c;
    c.ref_mean = 0.0;
    c.ref_sd = 1.0;
    c.bandwidth = 0.1;
    for (int i = 0; i < 100; ++i) {
        const double z = -4.0 + 8.0 * i / 99.0;
        c.grid.push_back(z);
        c.density.push_back(std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI));
    }
    CHECK(render_density_svg(c) == render_density_svg(c));
    CHECK(count_occurrences(render_density_svg(c), "<polyline") == 2);
}

TEST_CASE("manifest verification catches tampering") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "hfseason_manifest_test";
    fs::remove_all(dir);
    fs::create_directories(dir / "tables");

    const std::string content = "asset,x\nBTC,1\n";
    write_text_file((dir / "tables" / "t.csv").string(), content);

    ReportBundle bundle;
    bundle.run_id = "testrun";
    bundle.parameters_text = "interval = 5m\n";
    bundle.artifacts.push_back({"table1", "", "tables/t.csv", sha256_hex(content)});
    write_text_file((dir / "manifest.json").string(), manifest_text(bundle));

    CHECK_NOTHROW(verify_manifest(dir.string()));
    write_text_file((dir / "tables" / "t.csv").string(), "tampered");
    CHECK_THROWS_WITH_AS(verify_manifest(dir.string()), doctest::Contains("digest mismatch"),
                         DataError);

    const auto j = nlohmann::json::parse(manifest_text(bundle));
    CHECK(j.at("schema_version") == "1");
}

TEST_CASE("manifest artifacts are sorted by path") {
    ReportBundle bundle;
    bundle.run_id = "r";
    bundle.artifacts = {
        {"b", "", "z/2.csv", "aa"},
        {"a", "", "a/1.csv", "bb"},
        {"c", "", "m/3.csv", "cc"},
    };
    const auto j = nlohmann::json::parse(manifest_text(bundle));
    const auto& arts = j.at("artifacts");
    CHECK(arts[0].at("path") == "a/1.csv");
    CHECK(arts[1].at("path") == "m/3.csv");
    CHECK(arts[2].at("path") == "z/2.csv");
}

TEST_CASE("gam fit serializes term metadata and coefficients") {
    Eigen::VectorXd x(60), y(60);
    for (int i = 0; i < 60; ++i) {
        x(i) = i / 59.0;
        y(i) = std::sin(4.0 * x(i));
    }
    std::vector<gam::TermData> terms(1);
    terms[0].smooth = gam::Smooth::cubic_regression("daily", {0.0, 0.25, 0.5, 0.75, 1.0});
    terms[0].x = x;
    Eigen::VectorXd lambdas(1);
    lambdas << 0.01;
    const auto fit = gam::fit_penalized_ls(y, terms, lambdas);

    const auto j = gamfit_to_json(fit);
    CHECK(j.at("kind") == "gam_fit");
    CHECK(j.at("terms").size() == 1);
    const auto& t = j.at("terms")[0];
    CHECK(t.at("name") == "daily");
    CHECK(t.at("basis") == "cubic_regression");
    CHECK(t.at("knots").size() == 5);
    CHECK(t.at("lambda") == 0.01);
    CHECK(t.at("coefficients").size() == 4);  // k - 1 after the constraint
    CHECK(j.at("edf_total").get<double>() == fit.edf_total);
    CHECK(j.at("r_squared").get<double>() == fit.r_squared);

    Eigen::VectorXd grid(11);
    for (int i = 0; i < 11; ++i) grid(i) = i / 10.0;
    const auto curve = gam::predict_with_bands(fit, "daily", grid);
    const std::string csv = effect_curve_csv(curve);
    CHECK(csv.substr(0, 22) == "x,effect,lower,upper\n0");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
}

TEST_CASE("corr table pair rejects mismatched asset sets") {
    stats::CorrelationMatrix up, down;
    up.assets = {"A", "B"};
    up.regime = stats::Regime::Up;
    up.values = {{1.0, 0.5}, {0.5, 1.0}};
    down = up;
    down.regime = stats::Regime::Down;
    CHECK_NOTHROW(build_corr_tables(up, down));
    down.assets = {"A", "C"};
    CHECK_THROWS_WITH_AS(build_corr_tables(up, down), doctest::Contains("asset sets differ"),
                         DataError);
}

TEST_CASE("negative values that round to zero display as 0.00") {
    auto row = btc_row();
    row.rho1_ret = -0.0004;
    const std::string csv = table1_to_csv({row});
    CHECK(csv.find("BTC,0.00,") != std::string::npos);
    CHECK(csv.find("-0.00") == std::string::npos);
}
