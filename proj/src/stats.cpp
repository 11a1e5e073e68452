#include <cmath>
#include <vector>

#include "hfseason/errors.hpp"
#include "hfseason/stats.hpp"

namespace hfseason::stats {

namespace {

double mean_of(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

}  // namespace

double acf_lag1(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 3) throw NumericError("acf_lag1: need at least 3 observations");
    const double m = mean_of(x);
    double num = 0.0, den = 0.0;
    den = (x[0] - m) * (x[0] - m);
    for (std::size_t t = 1; t < n; ++t) {
        num += (x[t] - m) * (x[t - 1] - m);
        den += (x[t] - m) * (x[t] - m);
    }
    if (den <= 0.0) throw NumericError("acf_lag1: degenerate series (zero variance)");
    return num / den;
}

Moments moments(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 4) throw NumericError("moments: need at least 4 observations");
    const double m = mean_of(x);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - m;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double nd = static_cast<double>(n);
    const double var_unbiased = m2 / (nd - 1.0);
    m2 /= nd;
    m3 /= nd;
    m4 /= nd;
    if (m2 <= 0.0) throw NumericError("moments: zero variance");
    Moments out;
    out.mean = m;
    out.sd = std::sqrt(var_unbiased);
    out.skewness = m3 / std::pow(m2, 1.5);
    out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return out;
}

JarqueBeraResult jarque_bera_from_moments(std::size_t n, double skewness, double excess_kurtosis) {
    JarqueBeraResult out;
    out.stat = static_cast<double>(n) *
               (skewness * skewness / 6.0 + excess_kurtosis * excess_kurtosis / 24.0);
    out.p_value = std::exp(-out.stat / 2.0);  // chi-square(2) survival function
    return out;
}

JarqueBeraResult jarque_bera(std::span<const double> x) {
    const Moments m = moments(x);
    return jarque_bera_from_moments(x.size(), m.skewness, m.excess_kurtosis);
}

SummaryStats summarize_returns(const std::string& asset, std::span<const double> log_returns) {
    SummaryStats s;
    s.asset = asset;
    s.n = log_returns.size();

    std::vector<double> sq(log_returns.size()), ab(log_returns.size());
    for (std::size_t i = 0; i < log_returns.size(); ++i) {
        sq[i] = log_returns[i] * log_returns[i];
        ab[i] = std::fabs(log_returns[i]);
    }
    s.rho1_ret = acf_lag1(log_returns);
    s.rho1_ret_sq = acf_lag1(sq);
    s.rho1_abs_ret = acf_lag1(ab);
    const Moments m = moments(log_returns);
    s.skewness = m.skewness;
    s.excess_kurtosis = m.excess_kurtosis;
    const JarqueBeraResult jb = jarque_bera_from_moments(s.n, m.skewness, m.excess_kurtosis);
    s.jb_stat = jb.stat;
    s.jb_pvalue = jb.p_value;
    return s;
}

}  // namespace hfseason::stats
