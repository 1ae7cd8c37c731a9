#include "lldpd/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

namespace lldpd {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 11> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                               "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                               "#bcbd22", "#17becf", "#000000"};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

bool over_n(PlotKind k) {
    return k == PlotKind::level_vs_n || k == PlotKind::power_vs_n;
}

}  // namespace

PlotKind parse_plot_kind(const std::string& text) {
    if (text == "level-vs-n") {
        return PlotKind::level_vs_n;
    }
    if (text == "level-vs-eps") {
        return PlotKind::level_vs_eps;
    }
    if (text == "power-vs-n") {
        return PlotKind::power_vs_n;
    }
    if (text == "power-vs-eps") {
        return PlotKind::power_vs_eps;
    }
    throw std::invalid_argument("unknown plot kind '" + text +
                                "' (expected level-vs-n, level-vs-eps, power-vs-n or power-vs-eps)");
}

std::string to_string(PlotKind kind) {
    switch (kind) {
    case PlotKind::level_vs_n:
        return "level-vs-n";
    case PlotKind::level_vs_eps:
        return "level-vs-eps";
    case PlotKind::power_vs_n:
        return "power-vs-n";
    case PlotKind::power_vs_eps:
        return "power-vs-eps";
    }
    return "";
}

std::string render_svg(const RejectionTable& table, PlotKind kind, const PlotSelection& sel) {
    if (table.rows.empty()) {
        throw std::invalid_argument("plot: rejection table is empty");
    }
    std::set<double> eps_values;
    std::set<std::size_t> n_values;
    std::set<double> at_values;
    for (const RejectionRow& r : table.rows) {
        if (r.family == sel.family) {
            eps_values.insert(r.eps);
            n_values.insert(r.n);
            at_values.insert(r.alpha_tilde);
        }
    }
    if (eps_values.empty()) {
        throw std::invalid_argument("plot: no rows for family '" + sel.family + "'");
    }
    const double eps = sel.eps.value_or(*eps_values.begin());
    const std::size_t n = sel.n.value_or(*n_values.rbegin());
    const double at = sel.alpha_tilde.value_or(*at_values.begin());
    const bool by_n = over_n(kind);

    std::map<double, std::vector<std::pair<double, double>>> series;
    for (const RejectionRow& r : table.rows) {
        if (r.family != sel.family || r.alpha_tilde != at) {
            continue;
        }
        if (by_n ? r.eps != eps : r.n != n) {
            continue;
        }
        series[r.tau].emplace_back(by_n ? static_cast<double>(r.n) : r.eps, r.rate);
    }
    if (series.empty()) {
        throw std::invalid_argument("plot: no rows match the selection");
    }
    double x_lo = series.begin()->second.front().first;
    double x_hi = x_lo;
    for (auto& [tau, pts] : series) {
        std::sort(pts.begin(), pts.end());
        x_lo = std::min(x_lo, pts.front().first);
        x_hi = std::max(x_hi, pts.back().first);
    }
    if (x_hi == x_lo) {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto sy = [&](double y) { return kTop + (1.0 - y) * ph; };

    const std::string measure = kind == PlotKind::level_vs_n || kind == PlotKind::level_vs_eps ? "level" : "power";
    std::string title = sel.family + " empirical " + measure + ", alpha_tilde=" + fmt("%g", at);
    title += by_n ? ", eps=" + fmt("%g", eps) : ", n=" + std::to_string(n);

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", kLeft) + "\" y=\"30\" font-family=\"sans-serif\" font-size=\"16\">" + title +
           "</text>\n";
    svg += "<g stroke=\"#000000\" stroke-width=\"1\">\n";
    svg += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", sy(0.0)) + "\" x2=\"" +
           fmt("%.2f", kLeft + pw) + "\" y2=\"" + fmt("%.2f", sy(0.0)) + "\"/>\n";
    svg += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", sy(0.0)) + "\" x2=\"" + fmt("%.2f", kLeft) +
           "\" y2=\"" + fmt("%.2f", sy(1.0)) + "\"/>\n";
    svg += "</g>\n";
    svg += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (int i = 0; i <= 10; ++i) {
        const double y = i / 10.0;
        svg += "<text x=\"" + fmt("%.2f", kLeft - 8.0) + "\" y=\"" + fmt("%.2f", sy(y) + 4.0) +
               "\" text-anchor=\"end\">" + fmt("%.1f", y) + "</text>\n";
    }
    std::set<double> xs;
    for (const auto& [tau, pts] : series) {
        for (const auto& pt : pts) {
            xs.insert(pt.first);
        }
    }
    for (double x : xs) {
        svg += "<text x=\"" + fmt("%.2f", sx(x)) + "\" y=\"" + fmt("%.2f", sy(0.0) + 18.0) +
               "\" text-anchor=\"middle\">" + (by_n ? fmt("%.0f", x) : fmt("%.2f", x)) + "</text>\n";
    }
    svg += "<text x=\"" + fmt("%.2f", kLeft + pw / 2.0) + "\" y=\"" + fmt("%.2f", kHeight - 15.0) +
           "\" text-anchor=\"middle\">" + (by_n ? "n" : "eps") + "</text>\n";
    svg += "</g>\n";
    svg += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", sy(sel.nominal_level)) + "\" x2=\"" +
           fmt("%.2f", kLeft + pw) + "\" y2=\"" + fmt("%.2f", sy(sel.nominal_level)) +
           "\" stroke=\"#808080\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n";
    std::size_t index = 0;
    for (const auto& [tau, pts] : series) {
        const char* color = kPalette[index % kPalette.size()];
        std::string points;
        for (const auto& [x, y] : pts) {
            points += (points.empty() ? "" : " ") + fmt("%.2f", sx(x)) + "," + fmt("%.2f", sy(y));
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" +
               points + "\"/>\n";
        const double ly = kTop + 20.0 * static_cast<double>(index);
        svg += "<line x1=\"" + fmt("%.2f", kWidth - kRight + 15.0) + "\" y1=\"" + fmt("%.2f", ly) + "\" x2=\"" +
               fmt("%.2f", kWidth - kRight + 40.0) + "\" y2=\"" + fmt("%.2f", ly) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt("%.2f", kWidth - kRight + 45.0) + "\" y=\"" + fmt("%.2f", ly + 4.0) +
               "\" font-family=\"sans-serif\" font-size=\"12\">tau=" + fmt("%g", tau) + "</text>\n";
        ++index;
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace lldpd
