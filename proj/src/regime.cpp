#include <algorithm>
#include <cmath>
#include <sstream>

#include "hfseason/errors.hpp"
#include "hfseason/regime.hpp"
#include "hfseason/timeutil.hpp"

namespace hfseason::stats {

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::Up: return "UP";
        case Regime::Down: return "DOWN";
        case Regime::All: return "ALL";
    }
    return "?";
}

Regime RegimeLabels::label_for(std::int64_t local_day) const {
    auto it = std::lower_bound(dates.begin(), dates.end(), local_day);
    if (it == dates.end() || *it != local_day) {
        throw DataError("regime labels missing date " + timeutil::format_date(local_day));
    }
    return labels[static_cast<std::size_t>(it - dates.begin())];
}

RegimeLabels regime_labels(const ingest::GridSeries& index_series, bool zero_is_up) {
    if (index_series.bars.empty()) throw DataError("regime_labels: empty index series");
    RegimeLabels out;
    out.tz_offset_minutes = index_series.tz_offset_minutes;

    // Last close per local calendar date, in date order.
    std::vector<std::int64_t> days;
    std::vector<double> last_close;
    std::vector<double> first_close;
    for (const auto& bar : index_series.bars) {
        const std::int64_t day =
            timeutil::local_epoch_day(bar.open_time_ms, index_series.tz_offset_minutes);
        if (days.empty() || day != days.back()) {
            days.push_back(day);
            last_close.push_back(bar.close);
            first_close.push_back(bar.close);
        } else {
            last_close.back() = bar.close;
        }
    }
    for (std::size_t i = 1; i < days.size(); ++i) {
        if (days[i] != days[i - 1] + 1) {
            std::ostringstream msg;
            msg << "regime_labels: missing date coverage between "
                << timeutil::format_date(days[i - 1]) << " and " << timeutil::format_date(days[i]);
            throw DataError(msg.str());
        }
    }

    for (std::size_t i = 0; i < days.size(); ++i) {
        // Close-to-close: previous date's last close, else the date's own
        // first close (first date in sample).
        const double prev = i == 0 ? first_close[i] : last_close[i - 1];
        const double ret = (last_close[i] - prev) / prev;
        const bool up = ret > 0.0 || (zero_is_up && ret == 0.0);
        out.dates.push_back(days[i]);
        out.labels.push_back(up ? Regime::Up : Regime::Down);
    }
    return out;
}

CorrelationMatrix conditional_correlation(
    const std::map<std::string, timeseries::ReturnSeries>& returns_by_asset,
    const RegimeLabels& labels, Regime regime) {
    if (returns_by_asset.empty()) throw DataError("conditional_correlation: no assets");

    const auto& first = returns_by_asset.begin()->second;
    for (const auto& [asset, rs] : returns_by_asset) {
        if (rs.timestamps_ms != first.timestamps_ms) {
            throw DataError("conditional_correlation: misaligned return grids (asset " + asset + ")");
        }
    }

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < first.timestamps_ms.size(); ++i) {
        if (regime == Regime::All) {
            keep.push_back(i);
            continue;
        }
        const std::int64_t day =
            timeutil::local_epoch_day(first.timestamps_ms[i], labels.tz_offset_minutes);
        if (labels.label_for(day) == regime) keep.push_back(i);
    }
    if (keep.size() < 2) {
        throw DataError("conditional_correlation: empty regime " + regime_name(regime));
    }

    CorrelationMatrix out;
    out.regime = regime;
    out.sample_count = keep.size();
    std::vector<std::vector<double>> cols;
    for (const auto& [asset, rs] : returns_by_asset) {
        out.assets.push_back(asset);
        std::vector<double> v(keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) v[i] = rs.log[keep[i]];
        cols.push_back(std::move(v));
    }

    const std::size_t m = out.assets.size();
    std::vector<double> means(m, 0.0), norms(m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
        for (double v : cols[a]) means[a] += v;
        means[a] /= static_cast<double>(cols[a].size());
        for (double v : cols[a]) norms[a] += (v - means[a]) * (v - means[a]);
        if (norms[a] <= 0.0) {
            throw NumericError("conditional_correlation: zero variance for asset " + out.assets[a]);
        }
    }

    out.values.assign(m, std::vector<double>(m, 1.0));
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            double cov = 0.0;
            for (std::size_t i = 0; i < keep.size(); ++i) {
                cov += (cols[a][i] - means[a]) * (cols[b][i] - means[b]);
            }
            const double r = cov / std::sqrt(norms[a] * norms[b]);
            out.values[a][b] = r;
            out.values[b][a] = r;
        }
    }
    return out;
}

}  // namespace hfseason::stats
