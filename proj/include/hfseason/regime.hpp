#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hfseason/ingest.hpp"
#include "hfseason/returns.hpp"

namespace hfseason::stats {

enum class Regime { Up, Down, All };

std::string regime_name(Regime r);

/// One UP/DOWN label per calendar date in the display timezone. A date is UP
/// when its close-to-close simple return on the index is strictly positive;
/// zero-return (and the tie in general) goes DOWN unless zero_is_up is set.
struct RegimeLabels {
    std::vector<std::int64_t> dates;  // local epoch days, ascending
    std::vector<Regime> labels;       // Up or Down, parallel to dates
    int tz_offset_minutes = 60;

    Regime label_for(std::int64_t local_day) const;  // throws DataError when absent
};

RegimeLabels regime_labels(const ingest::GridSeries& index_series, bool zero_is_up = false);

struct CorrelationMatrix {
    std::vector<std::string> assets;                // ordered symbols
    std::vector<std::vector<double>> values;        // symmetric, unit diagonal
    Regime regime = Regime::All;
    std::size_t sample_count = 0;                   // pooled return observations per pair
};

/// Pearson correlations of the pooled 5-minute log returns whose timestamps
/// fall on dates carrying the requested label. All series must share the
/// identical timestamp grid.
CorrelationMatrix conditional_correlation(
    const std::map<std::string, timeseries::ReturnSeries>& returns_by_asset,
    const RegimeLabels& labels, Regime regime);

}  // namespace hfseason::stats
