#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hfseason/density.hpp"
#include "hfseason/errors.hpp"
#include "hfseason/gam/select.hpp"
#include "hfseason/ingest.hpp"
#include "hfseason/returns.hpp"
#include "hfseason/seasonality.hpp"
#include "hfseason/stats.hpp"
#include "hfseason/timeutil.hpp"

namespace py = pybind11;
using namespace hfseason;

namespace {

Eigen::VectorXd to_vec(const std::vector<double>& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

std::vector<double> from_vec(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

ingest::GridSeries grid_from_arrays(const std::vector<std::int64_t>& timestamps_ms,
                                    const std::vector<double>& prices,
                                    const std::vector<double>& volumes, std::int64_t interval_s,
                                    bool forward_fill) {
    if (timestamps_ms.size() != prices.size() || prices.size() != volumes.size()) {
        throw DataError("build_grid: arrays must have equal length");
    }
    std::vector<ingest::RawRecord> records(timestamps_ms.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        records[i] = {timestamps_ms[i], prices[i], volumes[i], ""};
    }
    return ingest::build_grid(records, interval_s,
                              forward_fill ? ingest::GapPolicy::ForwardFill
                                           : ingest::GapPolicy::Drop)
        .series;
}

gam::TermData make_term(const std::string& kind, const std::vector<double>& x, int k,
                        const std::string& name) {
    gam::TermData term;
    if (kind == "cubic") {
        term.smooth = gam::Smooth::cubic_regression(name, gam::quantile_knots(x, k));
    } else if (kind == "pspline") {
        const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
        term.smooth = gam::Smooth::pspline(name, k, *lo, *hi);
    } else {
        throw ConfigError("term kind must be 'cubic' or 'pspline'");
    }
    term.x = to_vec(x);
    return term;
}

py::dict fit_gam(const std::vector<double>& y,
                 const std::vector<std::tuple<std::vector<double>, std::string, int>>& terms) {
    std::vector<gam::TermData> data;
    for (std::size_t q = 0; q < terms.size(); ++q) {
        const auto& [x, kind, k] = terms[q];
        data.push_back(make_term(kind, x, k, "s" + std::to_string(q)));
    }
    const auto sel = gam::select_lambda(to_vec(y), data);

    py::dict out;
    out["lambdas"] = from_vec(sel.lambdas);
    out["edf_total"] = sel.fit.edf_total;
    out["gcv"] = sel.fit.gcv;
    out["r_squared"] = sel.fit.r_squared;
    out["fitted"] = from_vec(sel.fit.fitted);
    py::list curves;
    for (std::size_t q = 0; q < data.size(); ++q) {
        const auto& smooth = sel.fit.terms[q].smooth;
        Eigen::VectorXd grid(101);
        for (int i = 0; i <= 100; ++i) {
            grid(i) = smooth.domain_min() +
                      (smooth.domain_max() - smooth.domain_min()) * i / 100.0;
        }
        const auto curve = gam::predict_with_bands(sel.fit, sel.fit.terms[q].name, grid);
        py::dict c;
        c["x"] = from_vec(curve.x);
        c["effect"] = from_vec(curve.effect);
        c["lower"] = from_vec(curve.lower);
        c["upper"] = from_vec(curve.upper);
        c["edf"] = sel.fit.terms[q].edf;
        curves.append(c);
    }
    out["terms"] = curves;
    return out;
}

py::dict fit_seasonality_py(const std::vector<double>& response,
                            const std::vector<std::int64_t>& timestamps_ms,
                            std::int64_t interval_s, int tz_offset_minutes, int daily_knots,
                            bool daily_cyclic, int weekly_knots, const std::string& kind) {
    const auto cov =
        seasonality::encode_covariates(timestamps_ms, interval_s, tz_offset_minutes);
    seasonality::SeasonalityConfig config;
    config.daily_knots = daily_knots;
    config.daily_cyclic = daily_cyclic;
    config.weekly_knots = weekly_knots;
    const auto profile = seasonality::fit_seasonality(response, cov, config,
                                                      seasonality::response_from_name(kind));
    py::dict out;
    out["response"] = seasonality::response_name(profile.response);
    out["daily_effect"] = profile.daily_effect;
    out["daily_lower"] = profile.daily_lower;
    out["daily_upper"] = profile.daily_upper;
    out["weekly_effect"] = profile.weekly_effect;
    out["weekly_lower"] = profile.weekly_lower;
    out["weekly_upper"] = profile.weekly_upper;
    out["lambda_daily"] = profile.lambda_daily;
    out["lambda_weekly"] = profile.lambda_weekly;
    out["edf_total"] = profile.edf_total;
    out["gcv"] = profile.gcv;
    out["r_squared"] = profile.r_squared;
    out["degenerate"] = profile.degenerate;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "High-frequency crypto seasonality pipeline: grid alignment, "
              "return statistics, and penalized-spline GAM seasonality fits.";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<DataError>(m, "DataError");
    py::register_exception<NumericError>(m, "NumericError");

    py::class_<ingest::Bar>(m, "Bar")
        .def_readonly("open_time_ms", &ingest::Bar::open_time_ms)
        .def_readonly("interval_s", &ingest::Bar::interval_s)
        .def_readonly("open", &ingest::Bar::open)
        .def_readonly("high", &ingest::Bar::high)
        .def_readonly("low", &ingest::Bar::low)
        .def_readonly("close", &ingest::Bar::close)
        .def_readonly("volume", &ingest::Bar::volume)
        .def_readonly("gap_filled", &ingest::Bar::gap_filled)
        .def("__repr__", [](const ingest::Bar& b) {
            return "Bar(" + timeutil::format_utc(b.open_time_ms) + ", o=" + std::to_string(b.open) +
                   ", c=" + std::to_string(b.close) + ")";
        });

    py::class_<ingest::GridSeries>(m, "GridSeries")
        .def_readonly("asset", &ingest::GridSeries::asset)
        .def_readonly("interval_s", &ingest::GridSeries::interval_s)
        .def_readonly("bars", &ingest::GridSeries::bars)
        .def("__len__", [](const ingest::GridSeries& s) { return s.bars.size(); });

    m.def("build_grid", &grid_from_arrays, py::arg("timestamps_ms"), py::arg("prices"),
          py::arg("volumes"), py::arg("interval_s") = 300, py::arg("forward_fill") = true,
          "Bucket irregular (timestamp, price, volume) observations onto a "
          "regular OHLCV grid.");
    m.def("aggregate_bars", &timeseries::aggregate_bars, py::arg("series"),
          py::arg("target_interval_s"));

    m.def("simple_returns", &timeseries::simple_returns, py::arg("series"));
    m.def("log_returns", &timeseries::log_returns, py::arg("series"));
    m.def(
        "abs_volatility",
        [](const std::vector<double>& rets) { return timeseries::abs_volatility(rets); },
        py::arg("log_returns"));

    m.def(
        "acf_lag1", [](const std::vector<double>& x) { return stats::acf_lag1(x); },
        py::arg("x"), "Lag-1 sample autocorrelation.");
    m.def(
        "moments",
        [](const std::vector<double>& x) {
            const auto mo = stats::moments(x);
            return py::make_tuple(mo.mean, mo.sd, mo.skewness, mo.excess_kurtosis);
        },
        py::arg("x"), "(mean, sd, skewness, excess_kurtosis) with ML central moments.");
    m.def(
        "jarque_bera",
        [](const std::vector<double>& x) {
            const auto jb = stats::jarque_bera(x);
            return py::make_tuple(jb.stat, jb.p_value);
        },
        py::arg("x"), "(statistic, p_value); p from the chi-square(2) tail.");
    m.def(
        "density_curve",
        [](const std::vector<double>& x, const std::vector<double>& reference) {
            const auto c = stats::density_curve(x, reference);
            py::dict out;
            out["grid"] = c.grid;
            out["density"] = c.density;
            out["bandwidth"] = c.bandwidth;
            out["ref_mean"] = c.ref_mean;
            out["ref_sd"] = c.ref_sd;
            return out;
        },
        py::arg("x"), py::arg("reference"),
        "Gaussian KDE with Silverman bandwidth on a 512-point grid.");

    m.def(
        "encode_covariates",
        [](const std::vector<std::int64_t>& ts, std::int64_t interval_s, int tz) {
            const auto cov = seasonality::encode_covariates(ts, interval_s, tz);
            return py::make_tuple(cov.time_of_day_bin, cov.day_of_week);
        },
        py::arg("timestamps_ms"), py::arg("interval_s") = 300,
        py::arg("tz_offset_minutes") = 60,
        "(time_of_day_bins, iso_day_of_week) in the display timezone.");

    m.def("fit_gam", &fit_gam, py::arg("y"), py::arg("terms"),
          "Penalized additive fit with GCV-selected lambdas. Each term is a "
          "(x, kind, k) tuple with kind 'cubic' or 'pspline'.");
    m.def("fit_seasonality", &fit_seasonality_py, py::arg("response"), py::arg("timestamps_ms"),
          py::arg("interval_s") = 300, py::arg("tz_offset_minutes") = 60,
          py::arg("daily_knots") = 24, py::arg("daily_cyclic") = false,
          py::arg("weekly_knots") = 7, py::arg("kind") = "abs_return",
          "Daily + weekly seasonality profile for a grid-aligned response.");

    m.def("parse_timestamp", [](const std::string& s) -> py::object {
        const auto v = timeutil::parse_timestamp(s);
        if (!v) return py::none();
        return py::int_(*v);
    });
    m.def("format_utc", &timeutil::format_utc, py::arg("epoch_ms"));

    m.attr("__version__") = "0.1.0";
}
