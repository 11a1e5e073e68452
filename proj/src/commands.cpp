#include <algorithm>
#include <atomic>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hfseason/cli/commands.hpp"
#include "hfseason/density.hpp"
#include "hfseason/errors.hpp"
#include "hfseason/regime.hpp"
#include "hfseason/report/artifacts.hpp"
#include "hfseason/report/digest.hpp"
#include "hfseason/report/svg.hpp"
#include "hfseason/returns.hpp"
#include "hfseason/stats.hpp"
#include "hfseason/timeutil.hpp"

namespace hfseason::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Runs one task per index over a bounded worker pool. Exceptions are
/// captured per task; the lowest-index failure is rethrown after all workers
/// join so behaviour does not depend on scheduling.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task) {
    if (count == 0) return;
    unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs) : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(count));

    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    task(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

struct LoadedAsset {
    std::string symbol;
    ingest::GridSeries grid;
    timeseries::ReturnSeries returns;
    bool failed = false;
    std::string error;
};

std::vector<ingest::RawRecord> window_filter(std::vector<ingest::RawRecord> records,
                                             const RunConfig& config) {
    if (!config.has_window) return records;
    const std::int64_t lo = config.window_start_day * 86'400'000;
    const std::int64_t hi = (config.window_end_day + 1) * 86'400'000;  // end date inclusive
    std::vector<ingest::RawRecord> out;
    out.reserve(records.size());
    for (auto& r : records) {
        if (r.timestamp_ms >= lo && r.timestamp_ms < hi) out.push_back(std::move(r));
    }
    if (out.empty()) throw DataError("empty window: no records between " +
                                     timeutil::format_date(config.window_start_day) + " and " +
                                     timeutil::format_date(config.window_end_day));
    return out;
}

ingest::GridSeries load_series(const std::string& symbol, const std::string& path,
                               const RunConfig& config) {
    ingest::CsvSchema schema;
    schema.asset = symbol;
    auto parsed = ingest::parse_csv(path, schema);
    for (const auto& err : parsed.row_errors) {
        std::cerr << "warning: " << path << " line " << err.line << ": " << err.message << "\n";
    }
    auto records = window_filter(std::move(parsed.records), config);
    auto built = ingest::build_grid(records, config.interval_s, config.gap_policy,
                                    config.tz_offset_minutes);
    for (std::int64_t hole : built.hole_open_times_ms) {
        std::cerr << "warning: " << symbol << ": hole at " << timeutil::format_utc(hole) << "\n";
    }
    return std::move(built.series);
}

/// Pipeline context shared by the commands; loading is parallel per asset.
struct Pipeline {
    RunConfig config;
    std::string run_id;
    fs::path run_dir;
    std::vector<LoadedAsset> assets;  // sorted by symbol
    ingest::GridSeries index_grid;
    bool has_index = false;

    std::mutex artifacts_mutex;
    std::vector<report::ArtifactEntry> artifacts;

    void add_artifact(const std::string& kind, const std::string& asset, const fs::path& rel,
                      const std::string& content) {
        const fs::path full = run_dir / rel;
        fs::create_directories(full.parent_path());
        report::write_text_file(full.string(), content);
        std::lock_guard<std::mutex> lock(artifacts_mutex);
        artifacts.push_back({kind, asset, rel.generic_string(), report::sha256_hex(content)});
    }

    report::ReportBundle bundle() {
        report::ReportBundle b;
        b.run_id = run_id;
        b.parameters_text = config_to_text(config);
        std::lock_guard<std::mutex> lock(artifacts_mutex);
        b.artifacts = artifacts;
        return b;
    }
};

void init_pipeline(Pipeline& p, const RunConfig& config, bool need_index) {
    validate_config(config);
    if (need_index && config.index.symbol.empty()) {
        throw ConfigError("this command needs an index series (index = SYMBOL:path)");
    }

    p.config = config;
    p.run_id = resolve_run_id(config);
    p.run_dir = fs::path(config.out_dir) / p.run_id;
    fs::create_directories(p.run_dir);

    std::vector<AssetInput> inputs = config.assets;
    std::sort(inputs.begin(), inputs.end(),
              [](const AssetInput& a, const AssetInput& b) { return a.symbol < b.symbol; });

    p.assets.resize(inputs.size());
    parallel_for(inputs.size(), config.jobs, [&](std::size_t i) {
        p.assets[i].symbol = inputs[i].symbol;
        try {
            p.assets[i].grid = load_series(inputs[i].symbol, inputs[i].path, config);
            p.assets[i].returns = timeseries::make_return_series(p.assets[i].grid);
        } catch (const std::exception& e) {
            if (!config.skip_bad_assets) throw;
            p.assets[i].failed = true;
            p.assets[i].error = e.what();
        }
    });
    for (auto it = p.assets.begin(); it != p.assets.end();) {
        if (it->failed) {
            std::cerr << "warning: skipping asset " << it->symbol << ": " << it->error << "\n";
            it = p.assets.erase(it);
        } else {
            ++it;
        }
    }
    if (p.assets.empty()) throw DataError("all assets failed to load");

    if (need_index) {
        p.index_grid = load_series(config.index.symbol, config.index.path, config);
        p.has_index = true;
    }
}

/// Wraps a per-asset task so --skip-bad-assets also covers failures during
/// artifact generation, not only loading.
void run_asset_task(const Pipeline& p, const std::string& symbol,
                    const std::function<void()>& task) {
    if (!p.config.skip_bad_assets) {
        task();
        return;
    }
    try {
        task();
    } catch (const std::exception& e) {
        std::cerr << "warning: skipping asset " << symbol << ": " << e.what() << "\n";
    }
}

std::vector<double> stats_input(const timeseries::ReturnSeries& rs, bool exclude_gap_filled) {
    if (!exclude_gap_filled) return rs.log;
    std::vector<double> out;
    out.reserve(rs.log.size());
    for (std::size_t i = 0; i < rs.log.size(); ++i) {
        if (!rs.crosses_gap[i]) out.push_back(rs.log[i]);
    }
    return out;
}

void emit_grid(Pipeline& p, const LoadedAsset& a) {
    p.add_artifact("grid", a.symbol, fs::path("series") / (a.symbol + "_grid.csv"),
                   ingest::grid_to_csv(a.grid));
}

void emit_returns(Pipeline& p, const LoadedAsset& a) {
    p.add_artifact("returns", a.symbol, fs::path("series") / (a.symbol + "_returns.csv"),
                   timeseries::returns_to_csv(a.returns));
}

void emit_candles(Pipeline& p, const LoadedAsset& a, std::int64_t target_s) {
    const auto agg = timeseries::aggregate_bars(a.grid, target_s);
    const std::string stem = a.symbol + "_candles_" + format_duration_s(target_s);
    p.add_artifact("candles", a.symbol, fs::path("series") / (stem + ".csv"),
                   ingest::grid_to_csv(agg));
    if (p.config.svg) {
        p.add_artifact("svg", a.symbol, fs::path("svg") / (stem + ".svg"),
                       report::render_candles_svg(agg));
    }
}

void emit_density(Pipeline& p, const LoadedAsset& a, const std::vector<double>& reference) {
    const auto curve = stats::density_curve(stats_input(a.returns, p.config.exclude_gap_filled),
                                            reference);
    p.add_artifact("density", a.symbol, fs::path("series") / (a.symbol + "_density.csv"),
                   report::density_to_csv(curve));
    p.add_artifact("density_json", a.symbol, fs::path("series") / (a.symbol + "_density.json"),
                   report::density_to_json(curve).dump(2) + "\n");
    if (p.config.svg) {
        p.add_artifact("svg", a.symbol, fs::path("svg") / (a.symbol + "_density.svg"),
                       report::render_density_svg(curve));
    }
}

seasonality::SeasonalProfile fit_profile(const Pipeline& p, const LoadedAsset& a,
                                         seasonality::ResponseKind kind) {
    std::vector<std::int64_t> ts;
    std::vector<double> values;
    if (kind == seasonality::ResponseKind::Volume) {
        for (const auto& bar : a.grid.bars) {
            if (p.config.exclude_gap_filled && bar.gap_filled) continue;
            ts.push_back(bar.open_time_ms);
            values.push_back(bar.volume);
        }
    } else {
        // abs_return and volatility: the paper's volatility measure is the
        // absolute log return, so both responses share the series.
        for (std::size_t i = 0; i < a.returns.abs_log.size(); ++i) {
            if (p.config.exclude_gap_filled && a.returns.crosses_gap[i]) continue;
            ts.push_back(a.returns.timestamps_ms[i]);
            values.push_back(a.returns.abs_log[i]);
        }
    }
    const auto cov =
        seasonality::encode_covariates(ts, p.config.interval_s, p.config.tz_offset_minutes);
    return seasonality::fit_seasonality(values, cov, p.config.season, kind);
}

void emit_seasonality(Pipeline& p, const LoadedAsset& a, seasonality::ResponseKind kind) {
    const auto profile = fit_profile(p, a, kind);
    const std::string stem = a.symbol + "_" + seasonality::response_name(kind);
    p.add_artifact("seasonal_profile", a.symbol, fs::path("seasonal") / (stem + ".json"),
                   report::profile_to_json(profile).dump(2) + "\n");
    p.add_artifact("seasonal_csv", a.symbol, fs::path("seasonal") / (stem + "_daily.csv"),
                   report::profile_daily_csv(profile));
    p.add_artifact("seasonal_csv", a.symbol, fs::path("seasonal") / (stem + "_weekly.csv"),
                   report::profile_weekly_csv(profile));
    if (p.config.svg) {
        std::vector<double> bins(profile.daily_effect.size());
        for (std::size_t b = 0; b < bins.size(); ++b) bins[b] = static_cast<double>(b);
        p.add_artifact("svg", a.symbol, fs::path("svg") / (stem + "_daily.svg"),
                       report::render_seasonal_svg(bins, profile.daily_effect, profile.daily_lower,
                                                   profile.daily_upper,
                                                   a.symbol + " daily " +
                                                       seasonality::response_name(kind)));
        std::vector<double> days{1, 2, 3, 4, 5, 6, 7};
        p.add_artifact("svg", a.symbol, fs::path("svg") / (stem + "_weekly.svg"),
                       report::render_seasonal_svg(days, profile.weekly_effect,
                                                   profile.weekly_lower, profile.weekly_upper,
                                                   a.symbol + " weekly " +
                                                       seasonality::response_name(kind)));
    }
}

std::vector<double> reference_returns(const Pipeline& p) {
    // The density overlay normal uses BTC when present, else the first
    // asset in symbol order.
    for (const auto& a : p.assets) {
        if (a.symbol == "BTC") return stats_input(a.returns, p.config.exclude_gap_filled);
    }
    return stats_input(p.assets.front().returns, p.config.exclude_gap_filled);
}

void emit_table1(Pipeline& p) {
    std::vector<stats::SummaryStats> rows(p.assets.size());
    parallel_for(p.assets.size(), p.config.jobs, [&](std::size_t i) {
        rows[i] = stats::summarize_returns(
            p.assets[i].symbol, stats_input(p.assets[i].returns, p.config.exclude_gap_filled));
    });
    p.add_artifact("table1", "", fs::path("tables") / "table1.csv", report::table1_to_csv(rows));
    p.add_artifact("table1_json", "", fs::path("tables") / "table1.json",
                   report::table1_to_json(rows).dump(2) + "\n");
}

void emit_corr(Pipeline& p) {
    const auto labels = stats::regime_labels(p.index_grid);
    std::map<std::string, timeseries::ReturnSeries> by_asset;
    for (const auto& a : p.assets) by_asset[a.symbol] = a.returns;
    const auto up = stats::conditional_correlation(by_asset, labels, stats::Regime::Up);
    const auto down = stats::conditional_correlation(by_asset, labels, stats::Regime::Down);
    const auto tables = report::build_corr_tables(up, down);
    p.add_artifact("correlation", "", fs::path("tables") / "corr_up.csv", tables.up_csv);
    p.add_artifact("correlation_json", "", fs::path("tables") / "corr_up.json",
                   tables.up_json.dump(2) + "\n");
    p.add_artifact("correlation", "", fs::path("tables") / "corr_down.csv", tables.down_csv);
    p.add_artifact("correlation_json", "", fs::path("tables") / "corr_down.json",
                   tables.down_json.dump(2) + "\n");
}

}  // namespace

std::string resolve_run_id(const RunConfig& config) {
    std::ostringstream material;
    material << config_to_text(config);
    std::vector<AssetInput> inputs = config.assets;
    if (!config.index.symbol.empty()) inputs.push_back(config.index);
    std::sort(inputs.begin(), inputs.end(),
              [](const AssetInput& a, const AssetInput& b) { return a.symbol < b.symbol; });
    for (const auto& in : inputs) {
        std::string digest;
        try {
            digest = report::sha256_file(in.path);
        } catch (const DataError&) {
            digest = "unreadable";  // load_series will surface the failure
        }
        material << in.symbol << ":" << digest << "\n";
    }
    return report::sha256_hex(material.str()).substr(0, 16);
}

report::ReportBundle cmd_ingest(const RunConfig& config) {
    Pipeline p;
    init_pipeline(p, config, /*need_index=*/false);
    parallel_for(p.assets.size(), config.jobs, [&](std::size_t i) {
        run_asset_task(p, p.assets[i].symbol, [&] { emit_grid(p, p.assets[i]); });
    });
    return p.bundle();
}

report::ReportBundle cmd_stats(const RunConfig& config) {
    Pipeline p;
    init_pipeline(p, config, /*need_index=*/false);
    emit_table1(p);
    return p.bundle();
}

report::ReportBundle cmd_corr(const RunConfig& config) {
    Pipeline p;
    init_pipeline(p, config, /*need_index=*/true);
    emit_corr(p);
    return p.bundle();
}

report::ReportBundle cmd_candles(const RunConfig& config, std::int64_t target_interval_s) {
    if (target_interval_s % config.interval_s != 0) {
        throw ConfigError("candle interval must be a multiple of the base interval");
    }
    Pipeline p;
    init_pipeline(p, config, /*need_index=*/false);
    parallel_for(p.assets.size(), config.jobs, [&](std::size_t i) {
        run_asset_task(p, p.assets[i].symbol,
                       [&] { emit_candles(p, p.assets[i], target_interval_s); });
    });
    return p.bundle();
}

report::ReportBundle cmd_seasonality(const RunConfig& config,
                                     seasonality::ResponseKind response) {
    Pipeline p;
    init_pipeline(p, config, /*need_index=*/false);
    parallel_for(p.assets.size(), config.jobs, [&](std::size_t i) {
        run_asset_task(p, p.assets[i].symbol,
                       [&] { emit_seasonality(p, p.assets[i], response); });
    });
    return p.bundle();
}

report::ReportBundle cmd_report(const RunConfig& config) {
    const bool with_index = !config.index.symbol.empty();
    Pipeline p;
    init_pipeline(p, config, with_index);

    const auto reference = reference_returns(p);
    parallel_for(p.assets.size(), config.jobs, [&](std::size_t i) {
        LoadedAsset& a = p.assets[i];
        run_asset_task(p, a.symbol, [&] {
            emit_grid(p, a);
            emit_returns(p, a);
            emit_candles(p, a, config.candle_interval_s);
            emit_density(p, a, reference);
            if (config.svg) {
                p.add_artifact("svg", a.symbol, fs::path("svg") / (a.symbol + "_returns.svg"),
                               report::render_line_svg(a.returns.timestamps_ms, a.returns.log,
                                                       a.symbol + " log returns"));
                p.add_artifact("svg", a.symbol,
                               fs::path("svg") / (a.symbol + "_volatility.svg"),
                               report::render_line_svg(a.returns.timestamps_ms,
                                                       a.returns.abs_log,
                                                       a.symbol + " volatility"));
            }
        });
    });
    emit_table1(p);
    if (p.has_index) {
        LoadedAsset index_asset;
        index_asset.symbol = p.index_grid.asset;
        index_asset.grid = p.index_grid;
        emit_grid(p, index_asset);
        emit_corr(p);
    }

    // One task per (asset, response) pair.
    const seasonality::ResponseKind kinds[] = {seasonality::ResponseKind::AbsReturn,
                                               seasonality::ResponseKind::Volatility,
                                               seasonality::ResponseKind::Volume};
    parallel_for(p.assets.size() * 3, config.jobs, [&](std::size_t i) {
        run_asset_task(p, p.assets[i / 3].symbol,
                       [&] { emit_seasonality(p, p.assets[i / 3], kinds[i % 3]); });
    });

    report::ReportBundle bundle = p.bundle();
    report::write_text_file((p.run_dir / "manifest.json").string(),
                            report::manifest_text(bundle));
    return bundle;
}

}  // namespace hfseason::cli
