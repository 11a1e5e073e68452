#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hfseason/errors.hpp"
#include "hfseason/report/svg.hpp"

namespace hfseason::report {

namespace {

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

struct Frame {
    AxisMap x, y;
    SvgLayout layout;
};

Frame make_frame(double xmin, double xmax, double ymin, double ymax, const SvgLayout& layout) {
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) {
        ymax = ymin + 1.0;
        ymin -= 1.0;
    }
    Frame f;
    f.layout = layout;
    f.x = {xmin, xmax, layout.margin, layout.width - layout.margin};
    // y axis inverted: data max at the top margin
    f.y = {ymin, ymax, layout.height - layout.margin, layout.margin};
    return f;
}

void open_svg(std::ostringstream& out, const SvgLayout& layout) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(layout.width)
        << "\" height=\"" << px(layout.height) << "\" viewBox=\"0 0 " << px(layout.width) << " "
        << px(layout.height) << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << px(layout.width) << "\" height=\""
        << px(layout.height) << "\" fill=\"white\"/>\n";
}

void draw_axes(std::ostringstream& out, const Frame& f, const std::string& label) {
    const auto& l = f.layout;
    out << "<g class=\"axes\" stroke=\"#333333\" stroke-width=\"1\">\n";
    out << "<line x1=\"" << px(l.margin) << "\" y1=\"" << px(l.height - l.margin) << "\" x2=\""
        << px(l.width - l.margin) << "\" y2=\"" << px(l.height - l.margin) << "\"/>\n";
    out << "<line x1=\"" << px(l.margin) << "\" y1=\"" << px(l.margin) << "\" x2=\""
        << px(l.margin) << "\" y2=\"" << px(l.height - l.margin) << "\"/>\n";
    out << "</g>\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", f.y.data_max);
    out << "<text x=\"4\" y=\"" << px(l.margin + 4) << "\" font-size=\"11\">" << buf
        << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.6g", f.y.data_min);
    out << "<text x=\"4\" y=\"" << px(l.height - l.margin) << "\" font-size=\"11\">" << buf
        << "</text>\n";
    if (!label.empty()) {
        out << "<text x=\"" << px(l.margin) << "\" y=\"" << px(l.margin - 8)
            << "\" font-size=\"12\">" << label << "</text>\n";
    }
}

void polyline(std::ostringstream& out, const Frame& f, const std::vector<double>& xs,
              const std::vector<double>& ys, const std::string& stroke) {
    out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out << ' ';
        out << px(f.x.to_px(xs[i])) << ',' << px(f.y.to_px(ys[i]));
    }
    out << "\"/>\n";
}

}  // namespace

std::string render_candles_svg(const ingest::GridSeries& series, const SvgLayout& layout) {
    if (series.bars.empty()) throw DataError("render_candles_svg: empty series");
    double ymin = series.bars.front().low, ymax = series.bars.front().high;
    for (const auto& b : series.bars) {
        ymin = std::min(ymin, b.low);
        ymax = std::max(ymax, b.high);
    }
    const double n = static_cast<double>(series.bars.size());
    Frame f = make_frame(0.0, n, ymin, ymax, layout);
    const double slot = (f.x.px_hi - f.x.px_lo) / n;
    const double body_w = std::max(1.0, slot * 0.6);

    std::ostringstream out;
    open_svg(out, layout);
    draw_axes(out, f, series.asset);
    for (std::size_t i = 0; i < series.bars.size(); ++i) {
        const auto& b = series.bars[i];
        const double cx = f.x.to_px(static_cast<double>(i) + 0.5);
        const bool up = b.close >= b.open;
        const std::string color = up ? "#1a9850" : "#d73027";
        const double body_top = f.y.to_px(std::max(b.open, b.close));
        const double body_bot = f.y.to_px(std::min(b.open, b.close));
        out << "<g class=\"candle\">";
        out << "<line x1=\"" << px(cx) << "\" y1=\"" << px(f.y.to_px(b.high)) << "\" x2=\""
            << px(cx) << "\" y2=\"" << px(f.y.to_px(b.low)) << "\" stroke=\"" << color
            << "\" stroke-width=\"1\"/>";
        out << "<rect x=\"" << px(cx - body_w / 2) << "\" y=\"" << px(body_top) << "\" width=\""
            << px(body_w) << "\" height=\"" << px(std::max(1.0, body_bot - body_top))
            << "\" fill=\"" << color << "\"/>";
        out << "</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_line_svg(const std::vector<std::int64_t>& timestamps_ms,
                            const std::vector<double>& values, const std::string& label,
                            const SvgLayout& layout) {
    if (values.empty() || timestamps_ms.size() != values.size()) {
        throw DataError("render_line_svg: empty or mismatched data");
    }
    std::vector<double> xs(values.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = static_cast<double>(timestamps_ms[i] - timestamps_ms.front()) / 86'400'000.0;
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    Frame f = make_frame(xs.front(), xs.back(), *lo, *hi, layout);
    std::ostringstream out;
    open_svg(out, layout);
    draw_axes(out, f, label);
    polyline(out, f, xs, values, "#2166ac");
    out << "</svg>\n";
    return out.str();
}

std::string render_density_svg(const stats::DensityCurve& curve, const SvgLayout& layout) {
    if (curve.grid.empty()) throw DataError("render_density_svg: empty curve");
    std::vector<double> ref(curve.grid.size());
    const double sd = curve.ref_sd;
    double ymax = 0.0;
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        const double z = (curve.grid[i] - curve.ref_mean) / sd;
        ref[i] = std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
        ymax = std::max({ymax, ref[i], curve.density[i]});
    }
    Frame f = make_frame(curve.grid.front(), curve.grid.back(), 0.0, ymax, layout);
    std::ostringstream out;
    open_svg(out, layout);
    draw_axes(out, f, "density");
    polyline(out, f, curve.grid, ref, "#999999");
    polyline(out, f, curve.grid, curve.density, "#2166ac");
    out << "</svg>\n";
    return out.str();
}

std::string render_seasonal_svg(const std::vector<double>& x, const std::vector<double>& effect,
                                const std::vector<double>& lower,
                                const std::vector<double>& upper, const std::string& label,
                                const SvgLayout& layout) {
    if (x.empty() || x.size() != effect.size() || x.size() != lower.size() ||
        x.size() != upper.size()) {
        throw DataError("render_seasonal_svg: empty or mismatched data");
    }
    double ymin = lower[0], ymax = upper[0];
    for (std::size_t i = 0; i < x.size(); ++i) {
        ymin = std::min(ymin, lower[i]);
        ymax = std::max(ymax, upper[i]);
    }
    Frame f = make_frame(x.front(), x.back(), ymin, ymax, layout);
    std::ostringstream out;
    open_svg(out, layout);
    draw_axes(out, f, label);
    // Band polygon: upper curve left-to-right, lower curve back.
    out << "<polygon class=\"band\" fill=\"#c6dbef\" stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) out << ' ';
        out << px(f.x.to_px(x[i])) << ',' << px(f.y.to_px(upper[i]));
    }
    for (std::size_t i = x.size(); i-- > 0;) {
        out << ' ' << px(f.x.to_px(x[i])) << ',' << px(f.y.to_px(lower[i]));
    }
    out << "\"/>\n";
    polyline(out, f, x, effect, "#2166ac");
    out << "</svg>\n";
    return out.str();
}

}  // namespace hfseason::report
