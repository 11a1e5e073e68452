#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hfseason/errors.hpp"
#include "hfseason/report/artifacts.hpp"

namespace hfseason::report {

using nlohmann::json;

namespace {

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    if (std::strcmp(buf, "-0.00") == 0) return "0.00";
    return buf;
}

std::string full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void sort_rows(std::vector<stats::SummaryStats>& rows) {
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.asset < b.asset; });
}

}  // namespace

std::string table1_to_csv(std::vector<stats::SummaryStats> rows) {
    sort_rows(rows);
    std::ostringstream out;
    out << "asset,rho1_ret,rho1_ret_sq,rho1_abs_ret,skewness,excess_kurtosis,jb,jb_pvalue\n";
    for (const auto& r : rows) {
        out << r.asset << ',' << fixed2(r.rho1_ret) << ',' << fixed2(r.rho1_ret_sq) << ','
            << fixed2(r.rho1_abs_ret) << ',' << fixed2(r.skewness) << ','
            << fixed2(r.excess_kurtosis) << ',' << fixed2(r.jb_stat) << ','
            << fixed2(r.jb_pvalue) << '\n';
    }
    return out.str();
}

json table1_to_json(std::vector<stats::SummaryStats> rows) {
    sort_rows(rows);
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"asset", r.asset},
                       {"n", r.n},
                       {"rho1_ret", r.rho1_ret},
                       {"rho1_ret_sq", r.rho1_ret_sq},
                       {"rho1_abs_ret", r.rho1_abs_ret},
                       {"skewness", r.skewness},
                       {"excess_kurtosis", r.excess_kurtosis},
                       {"jb", r.jb_stat},
                       {"jb_pvalue", r.jb_pvalue}});
    }
    return json{{"kind", "table1"}, {"rows", arr}};
}

std::vector<stats::SummaryStats> table1_from_json(const json& j) {
    std::vector<stats::SummaryStats> rows;
    for (const auto& e : j.at("rows")) {
        stats::SummaryStats r;
        r.asset = e.at("asset").get<std::string>();
        r.n = e.at("n").get<std::size_t>();
        r.rho1_ret = e.at("rho1_ret").get<double>();
        r.rho1_ret_sq = e.at("rho1_ret_sq").get<double>();
        r.rho1_abs_ret = e.at("rho1_abs_ret").get<double>();
        r.skewness = e.at("skewness").get<double>();
        r.excess_kurtosis = e.at("excess_kurtosis").get<double>();
        r.jb_stat = e.at("jb").get<double>();
        r.jb_pvalue = e.at("jb_pvalue").get<double>();
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string corr_to_csv(const stats::CorrelationMatrix& matrix) {
    std::ostringstream out;
    out << stats::regime_name(matrix.regime);
    for (const auto& a : matrix.assets) out << ',' << a;
    out << '\n';
    for (std::size_t i = 0; i < matrix.assets.size(); ++i) {
        out << matrix.assets[i];
        for (std::size_t j = 0; j < matrix.assets.size(); ++j) {
            out << ',';
            if (i != j) out << fixed2(matrix.values[i][j]);
        }
        out << '\n';
    }
    return out.str();
}

json corr_to_json(const stats::CorrelationMatrix& matrix) {
    json values = json::array();
    for (const auto& row : matrix.values) values.push_back(row);
    return json{{"kind", "correlation"},
                {"regime", stats::regime_name(matrix.regime)},
                {"assets", matrix.assets},
                {"sample_count", matrix.sample_count},
                {"values", values}};
}

stats::CorrelationMatrix corr_from_json(const json& j) {
    stats::CorrelationMatrix m;
    const std::string regime = j.at("regime").get<std::string>();
    m.regime = regime == "UP"     ? stats::Regime::Up
               : regime == "DOWN" ? stats::Regime::Down
                                  : stats::Regime::All;
    m.assets = j.at("assets").get<std::vector<std::string>>();
    m.sample_count = j.at("sample_count").get<std::size_t>();
    for (const auto& row : j.at("values")) m.values.push_back(row.get<std::vector<double>>());
    return m;
}

std::string density_to_csv(const stats::DensityCurve& curve) {
    std::ostringstream out;
    out << "grid,density\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        out << full(curve.grid[i]) << ',' << full(curve.density[i]) << '\n';
    }
    return out.str();
}

json density_to_json(const stats::DensityCurve& curve) {
    return json{{"kind", "density"},
                {"bandwidth", curve.bandwidth},
                {"reference_normal", {{"mean", curve.ref_mean}, {"sd", curve.ref_sd}}},
                {"grid", curve.grid},
                {"density", curve.density}};
}

stats::DensityCurve density_from_json(const json& j) {
    stats::DensityCurve c;
    c.bandwidth = j.at("bandwidth").get<double>();
    c.ref_mean = j.at("reference_normal").at("mean").get<double>();
    c.ref_sd = j.at("reference_normal").at("sd").get<double>();
    c.grid = j.at("grid").get<std::vector<double>>();
    c.density = j.at("density").get<std::vector<double>>();
    return c;
}

std::string profile_daily_csv(const seasonality::SeasonalProfile& profile) {
    std::ostringstream out;
    out << "bin,local_time,effect,lower,upper\n";
    const int minutes_per_bin = static_cast<int>(profile.interval_s / 60);
    for (std::size_t b = 0; b < profile.daily_effect.size(); ++b) {
        const int minutes = static_cast<int>(b) * minutes_per_bin;
        char t[16];
        std::snprintf(t, sizeof(t), "%02d:%02d", minutes / 60, minutes % 60);
        out << b << ',' << t << ',' << full(profile.daily_effect[b]) << ','
            << full(profile.daily_lower[b]) << ',' << full(profile.daily_upper[b]) << '\n';
    }
    return out.str();
}

std::string profile_weekly_csv(const seasonality::SeasonalProfile& profile) {
    std::ostringstream out;
    out << "day,effect,lower,upper\n";
    for (std::size_t d = 0; d < profile.weekly_effect.size(); ++d) {
        out << (d + 1) << ',' << full(profile.weekly_effect[d]) << ','
            << full(profile.weekly_lower[d]) << ',' << full(profile.weekly_upper[d]) << '\n';
    }
    return out.str();
}

json profile_to_json(const seasonality::SeasonalProfile& profile) {
    return json{{"kind", "seasonal_profile"},
                {"response", seasonality::response_name(profile.response)},
                {"bins_per_day", profile.bins_per_day},
                {"tz_offset_minutes", profile.tz_offset_minutes},
                {"interval_s", profile.interval_s},
                {"degenerate", profile.degenerate},
                {"fit_summary",
                 {{"lambda_daily", profile.lambda_daily},
                  {"lambda_weekly", profile.lambda_weekly},
                  {"edf_daily", profile.edf_daily},
                  {"edf_weekly", profile.edf_weekly},
                  {"edf_total", profile.edf_total},
                  {"gcv", profile.gcv},
                  {"r_squared", profile.r_squared}}},
                {"daily",
                 {{"effect", profile.daily_effect},
                  {"lower", profile.daily_lower},
                  {"upper", profile.daily_upper}}},
                {"weekly",
                 {{"effect", profile.weekly_effect},
                  {"lower", profile.weekly_lower},
                  {"upper", profile.weekly_upper}}}};
}

seasonality::SeasonalProfile profile_from_json(const json& j) {
    seasonality::SeasonalProfile p;
    p.response = seasonality::response_from_name(j.at("response").get<std::string>());
    p.bins_per_day = j.at("bins_per_day").get<int>();
    p.tz_offset_minutes = j.at("tz_offset_minutes").get<int>();
    p.interval_s = j.at("interval_s").get<std::int64_t>();
    p.degenerate = j.at("degenerate").get<bool>();
    const auto& s = j.at("fit_summary");
    p.lambda_daily = s.at("lambda_daily").get<double>();
    p.lambda_weekly = s.at("lambda_weekly").get<double>();
    p.edf_daily = s.at("edf_daily").get<double>();
    p.edf_weekly = s.at("edf_weekly").get<double>();
    p.edf_total = s.at("edf_total").get<double>();
    p.gcv = s.at("gcv").get<double>();
    p.r_squared = s.at("r_squared").get<double>();
    p.daily_effect = j.at("daily").at("effect").get<std::vector<double>>();
    p.daily_lower = j.at("daily").at("lower").get<std::vector<double>>();
    p.daily_upper = j.at("daily").at("upper").get<std::vector<double>>();
    p.weekly_effect = j.at("weekly").at("effect").get<std::vector<double>>();
    p.weekly_lower = j.at("weekly").at("lower").get<std::vector<double>>();
    p.weekly_upper = j.at("weekly").at("upper").get<std::vector<double>>();
    return p;
}

json gamfit_to_json(const gam::GamFit& fit) {
    json terms = json::array();
    for (const auto& t : fit.terms) {
        json term{{"name", t.name},
                  {"lambda", t.lambda},
                  {"edf", t.edf},
                  {"k", t.smooth.size()},
                  {"cyclic", t.smooth.cyclic()},
                  {"coefficients", std::vector<double>(t.coef.data(),
                                                       t.coef.data() + t.coef.size())}};
        if (t.smooth.kind() == gam::BasisKind::CubicRegression) {
            term["basis"] = "cubic_regression";
            term["knots"] = t.smooth.knots();
        } else {
            term["basis"] = "pspline";
            term["degree"] = t.smooth.degree();
            term["penalty_order"] = t.smooth.penalty_order();
            term["domain"] = {t.smooth.domain_min(), t.smooth.domain_max()};
        }
        terms.push_back(std::move(term));
    }
    return json{{"kind", "gam_fit"},
                {"n", fit.n},
                {"intercept", fit.intercept},
                {"edf_total", fit.edf_total},
                {"gcv", fit.gcv},
                {"r_squared", fit.r_squared},
                {"sigma2", fit.sigma2},
                {"terms", terms}};
}

std::string effect_curve_csv(const gam::EffectCurve& curve) {
    std::ostringstream out;
    out << "x,effect,lower,upper\n";
    for (Eigen::Index i = 0; i < curve.x.size(); ++i) {
        out << full(curve.x(i)) << ',' << full(curve.effect(i)) << ',' << full(curve.lower(i))
            << ',' << full(curve.upper(i)) << '\n';
    }
    return out.str();
}

CorrTablePair build_corr_tables(const stats::CorrelationMatrix& up,
                                const stats::CorrelationMatrix& down) {
    if (up.assets != down.assets) {
        throw DataError("correlation tables: UP and DOWN asset sets differ");
    }
    CorrTablePair out;
    out.up_csv = corr_to_csv(up);
    out.down_csv = corr_to_csv(down);
    out.up_json = corr_to_json(up);
    out.down_json = corr_to_json(down);
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << content;
    if (!out) throw DataError("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace hfseason::report
