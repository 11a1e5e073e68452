#include <algorithm>
#include <cmath>

#include "hfseason/density.hpp"
#include "hfseason/errors.hpp"
#include "hfseason/stats.hpp"

namespace hfseason::stats {

namespace {

// Linearly interpolated quantile (the common "type 7" convention).
double quantile(std::vector<double> sorted, double p) {
    const double h = p * (static_cast<double>(sorted.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - std::floor(h);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

DensityCurve density_curve(std::span<const double> x, std::span<const double> reference) {
    constexpr std::size_t kGridSize = 512;
    if (x.size() < 10) throw NumericError("density_curve: need at least 10 observations");

    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const Moments mx = moments(x);  // throws on zero variance
    const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);

    double spread = std::min(mx.sd, iqr / 1.34);
    if (spread <= 0.0) spread = mx.sd;  // IQR can be 0 on heavily tied data
    const double h = 0.9 * spread * std::pow(static_cast<double>(x.size()), -0.2);
    if (!(h > 0.0)) throw NumericError("density_curve: degenerate data (zero bandwidth)");

    DensityCurve out;
    out.bandwidth = h;
    const double lo = sorted.front() - 3.0 * h;
    const double hi = sorted.back() + 3.0 * h;
    const double step = (hi - lo) / static_cast<double>(kGridSize - 1);
    out.grid.resize(kGridSize);
    out.density.resize(kGridSize);
    const double norm = 1.0 / (static_cast<double>(x.size()) * h * std::sqrt(2.0 * M_PI));
    for (std::size_t i = 0; i < kGridSize; ++i) {
        const double g = lo + static_cast<double>(i) * step;
        out.grid[i] = g;
        double acc = 0.0;
        for (double v : x) {
            const double z = (g - v) / h;
            acc += std::exp(-0.5 * z * z);
        }
        out.density[i] = acc * norm;
    }

    const Moments mref = moments(reference);
    out.ref_mean = mref.mean;
    out.ref_sd = mref.sd;
    return out;
}

}  // namespace hfseason::stats
