#pragma once

#include <string>

#include "hfseason/density.hpp"
#include "hfseason/ingest.hpp"
#include "hfseason/returns.hpp"
#include "hfseason/seasonality.hpp"

namespace hfseason::report {

// Self-contained deterministic SVGs: no timestamps, no generated ids, fixed
// two-decimal pixel coordinates, byte-identical across reruns.

struct SvgLayout {
    double width = 900.0;
    double height = 420.0;
    double margin = 45.0;
};

/// One <g class="candle"> per bar, wick line plus body rect.
std::string render_candles_svg(const ingest::GridSeries& series, const SvgLayout& layout = {});

/// Simple polyline of (timestamp, value) pairs.
std::string render_line_svg(const std::vector<std::int64_t>& timestamps_ms,
                            const std::vector<double>& values, const std::string& label,
                            const SvgLayout& layout = {});

/// Sample density polyline with the same-moments normal reference curve.
std::string render_density_svg(const stats::DensityCurve& curve, const SvgLayout& layout = {});

/// Effect curve with the confidence band drawn as a shaded polygon.
std::string render_seasonal_svg(const std::vector<double>& x, const std::vector<double>& effect,
                                const std::vector<double>& lower,
                                const std::vector<double>& upper, const std::string& label,
                                const SvgLayout& layout = {});

/// The affine data-to-pixel map used by all renderers (exposed so tests can
/// check geometry against the emitted coordinates).
struct AxisMap {
    double data_min = 0.0, data_max = 1.0;
    double px_lo = 0.0, px_hi = 1.0;  // px_lo maps data_min, px_hi maps data_max
    double to_px(double v) const {
        return px_lo + (v - data_min) / (data_max - data_min) * (px_hi - px_lo);
    }
};

}  // namespace hfseason::report
