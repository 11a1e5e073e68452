#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace hfseason::stats {

/// Lag-1 sample autocorrelation,
/// rho1 = sum_{t=2..n} (x_t - xbar)(x_{t-1} - xbar) / sum_{t=1..n} (x_t - xbar)^2.
/// Throws NumericError on fewer than 3 points or zero sample variance.
double acf_lag1(std::span<const double> x);

struct Moments {
    double mean = 0.0;
    double sd = 0.0;  // sqrt of the unbiased (n-1) sample variance
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

/// Skewness and excess kurtosis from biased (ML) central moments:
/// S = m3 / m2^{3/2}, eKurt = m4 / m2^2 - 3 with m_k = (1/n) sum (x - xbar)^k.
Moments moments(std::span<const double> x);

struct JarqueBeraResult {
    double stat = 0.0;
    double p_value = 1.0;
};

/// JB = n (S^2/6 + eKurt^2/24); p-value is the chi-square(2) survival
/// function, exp(-JB/2) in closed form.
JarqueBeraResult jarque_bera(std::span<const double> x);
JarqueBeraResult jarque_bera_from_moments(std::size_t n, double skewness, double excess_kurtosis);

/// One summary-table row for an asset's 5-minute log returns.
struct SummaryStats {
    std::string asset;
    std::size_t n = 0;
    double rho1_ret = 0.0;      // lag-1 autocorrelation of returns
    double rho1_ret_sq = 0.0;   // ... of squared returns
    double rho1_abs_ret = 0.0;  // ... of absolute returns
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double jb_stat = 0.0;
    double jb_pvalue = 0.0;
};

SummaryStats summarize_returns(const std::string& asset, std::span<const double> log_returns);

}  // namespace hfseason::stats
