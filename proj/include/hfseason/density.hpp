#pragma once

#include <span>
#include <vector>

namespace hfseason::stats {

/// Gaussian kernel density evaluated on a regular grid, plus the moments of
/// a reference series for a same-mean/same-sd normal overlay.
struct DensityCurve {
    std::vector<double> grid;     // 512 points spanning [min - 3h, max + 3h]
    std::vector<double> density;  // non-negative, integrates to ~1
    double bandwidth = 0.0;       // Silverman: 0.9 min(sd, IQR/1.34) n^{-1/5}
    double ref_mean = 0.0;
    double ref_sd = 0.0;
};

DensityCurve density_curve(std::span<const double> x, std::span<const double> reference);

}  // namespace hfseason::stats
