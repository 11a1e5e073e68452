#pragma once

#include <string>

#include "hfseason/cli/config.hpp"
#include "hfseason/report/manifest.hpp"

namespace hfseason::cli {

/// All commands validate the config, resolve the content-derived run id and
/// write artifacts under <out_dir>/<run_id>/{tables,series,seasonal,svg}.
/// They are idempotent for identical inputs and configuration; nothing
/// outside the run directory is touched.

std::string resolve_run_id(const RunConfig& config);

report::ReportBundle cmd_ingest(const RunConfig& config);
report::ReportBundle cmd_stats(const RunConfig& config);
report::ReportBundle cmd_corr(const RunConfig& config);
report::ReportBundle cmd_candles(const RunConfig& config, std::int64_t target_interval_s);
report::ReportBundle cmd_seasonality(const RunConfig& config, seasonality::ResponseKind response);

/// Full pipeline: ingest, stats, correlations, candles, density, the three
/// seasonality responses, optional SVGs, and the manifest.
report::ReportBundle cmd_report(const RunConfig& config);

}  // namespace hfseason::cli
