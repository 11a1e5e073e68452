#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hfseason/cli/commands.hpp"
#include "hfseason/cli/config.hpp"
#include "hfseason/errors.hpp"

namespace {

using hfseason::cli::RunConfig;

struct FlagOverrides {
    std::string config_path;
    std::string interval;
    std::string window;
    std::string response;
    std::string candle_interval;
    int tz_offset = 0;
    bool tz_offset_set = false;
    int jobs = -1;
    bool skip_bad_assets = false;
    bool svg = false;
};

void add_common_flags(CLI::App* cmd, FlagOverrides& flags) {
    cmd->add_option("--config", flags.config_path, "key=value configuration file");
    cmd->add_option("--interval", flags.interval, "base bar interval, e.g. 5m");
    cmd->add_option("--window", flags.window, "date window, e.g. 2018-07-01:2018-08-31");
    cmd->add_option("--tz-offset", flags.tz_offset, "display timezone offset in minutes")
        ->each([&](const std::string&) { flags.tz_offset_set = true; });
    cmd->add_option("--jobs", flags.jobs, "worker threads (1 disables parallelism, 0 = auto)");
    cmd->add_flag("--skip-bad-assets", flags.skip_bad_assets,
                  "report and skip per-asset failures instead of aborting");
    cmd->add_flag("--svg", flags.svg, "also render static SVG plots");
}

RunConfig build_config(const FlagOverrides& flags) {
    RunConfig config;
    if (!flags.config_path.empty()) {
        config = hfseason::cli::parse_config_file(flags.config_path);
    }
    if (const char* out = std::getenv("HFSEASON_OUT"); out && *out) {
        config.out_dir = out;
    }
    // Flags win over both the file and the environment.
    auto apply = [&](const std::string& key, const std::string& value) {
        const std::string err = hfseason::cli::apply_config_key(config, key, value);
        if (!err.empty()) throw hfseason::ConfigError("flag --" + key + ": " + err);
    };
    if (!flags.interval.empty()) apply("interval", flags.interval);
    if (!flags.window.empty()) apply("window", flags.window);
    if (!flags.response.empty()) apply("response", flags.response);
    if (!flags.candle_interval.empty()) apply("candle_interval", flags.candle_interval);
    if (flags.tz_offset_set) apply("tz_offset_minutes", std::to_string(flags.tz_offset));
    if (flags.jobs >= 0) apply("jobs", std::to_string(flags.jobs));
    if (flags.skip_bad_assets) config.skip_bad_assets = true;
    if (flags.svg) config.svg = true;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"high-frequency crypto seasonality pipeline"};
    app.require_subcommand(1);

    FlagOverrides flags;
    auto* ingest = app.add_subcommand("ingest", "parse raw CSVs and write grid-aligned series");
    auto* stats = app.add_subcommand("stats", "summary statistics table");
    auto* corr = app.add_subcommand("corr", "regime-conditional correlation tables");
    auto* candles = app.add_subcommand("candles", "aggregate bars to a coarser interval");
    auto* season = app.add_subcommand("seasonality", "daily/weekly GAM seasonality curves");
    auto* rep = app.add_subcommand("report", "full pipeline with manifest");
    for (auto* cmd : {ingest, stats, corr, candles, season, rep}) {
        add_common_flags(cmd, flags);
    }
    candles->add_option("--target-interval", flags.candle_interval,
                        "aggregation target, e.g. 60m");
    season->add_option("--response", flags.response, "abs_return | volatility | volume");
    rep->add_option("--response", flags.response, "abs_return | volatility | volume");

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig config = build_config(flags);
        hfseason::report::ReportBundle bundle;
        if (app.got_subcommand(ingest)) {
            bundle = hfseason::cli::cmd_ingest(config);
        } else if (app.got_subcommand(stats)) {
            bundle = hfseason::cli::cmd_stats(config);
        } else if (app.got_subcommand(corr)) {
            bundle = hfseason::cli::cmd_corr(config);
        } else if (app.got_subcommand(candles)) {
            bundle = hfseason::cli::cmd_candles(config, config.candle_interval_s);
        } else if (app.got_subcommand(season)) {
            bundle = hfseason::cli::cmd_seasonality(config, config.response);
        } else {
            bundle = hfseason::cli::cmd_report(config);
        }
        std::cout << "run " << bundle.run_id << ": " << bundle.artifacts.size()
                  << " artifacts under " << config.out_dir << "/" << bundle.run_id << "\n";
        return 0;
    } catch (const hfseason::ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const hfseason::DataError& e) {
        std::cerr << "error: data: " << e.what() << "\n";
        return 3;
    } catch (const hfseason::NumericError& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
