#include "causaldo/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>

#include "causaldo/error.hpp"
#include "causaldo/io.hpp"

namespace causaldo {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 170, kTop = 20, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis {
    double lo, hi;
    bool log;
    double map(double v, double pixel_lo, double pixel_hi) const {
        const double a = log ? std::log10(v) : v;
        const double l = log ? std::log10(lo) : lo;
        const double h = log ? std::log10(hi) : hi;
        const double t = h > l ? (a - l) / (h - l) : 0.5;
        return pixel_lo + t * (pixel_hi - pixel_lo);
    }
};

}  // namespace

std::string render_summary_svg(const std::vector<SummaryRow>& rows) {
    CAUSALDO_REQUIRE(!rows.empty(), ErrorKind::EmptyInput, "no summary rows to plot");

    std::set<std::string> scenarios;
    for (const auto& r : rows) scenarios.insert(r.scenario);
    const bool tag_scenario = scenarios.size() > 1;
    std::map<std::string, std::vector<const SummaryRow*>> series;
    for (const auto& r : rows) {
        std::string label(to_string(r.method));
        if (tag_scenario) label = r.scenario + " " + label;
        series[label].push_back(&r);
    }
    for (auto& [_, pts] : series)
        std::sort(pts.begin(), pts.end(), [](const SummaryRow* a, const SummaryRow* b) { return a->n < b->n; });

    // Nonpositive values cannot sit on a log axis; clamp them below the data.
    double min_pos = std::numeric_limits<double>::infinity(), max_y = 0.0;
    std::size_t min_n = std::numeric_limits<std::size_t>::max(), max_n = 0;
    for (const auto& r : rows) {
        if (r.mean_kl > 0.0) min_pos = std::min(min_pos, r.mean_kl - std::min(r.stderr_kl, 0.5 * r.mean_kl));
        max_y = std::max(max_y, r.mean_kl + r.stderr_kl);
        min_n = std::min(min_n, r.n);
        max_n = std::max(max_n, r.n);
    }
    if (!std::isfinite(min_pos)) min_pos = 1e-6;
    const double floor_y = min_pos;
    const Axis ya{std::pow(10.0, std::floor(std::log10(floor_y))), std::pow(10.0, std::ceil(std::log10(std::max(max_y, floor_y * 10)))), true};
    const bool log_x = min_n > 0 && max_n > min_n;
    const Axis xa{static_cast<double>(min_n), static_cast<double>(max_n), log_x};
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    auto px = [&](double n) { return xa.map(n, x0, x1); };
    auto py = [&](double v) { return ya.map(std::max(v, floor_y), y0, y1); };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n";
    svg += "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
    svg += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(y0) + "\"/>\n";
    svg += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(y1) + "\"/>\n";
    svg += "</g>\n";

    // y ticks at decades, x ticks at each distinct n
    for (double t = ya.lo; t <= ya.hi * 1.0001; t *= 10.0) {
        const double y = py(t);
        char label[32];
        std::snprintf(label, sizeof label, "%g", t);
        svg += "<line x1=\"" + num(x0 - 4) + "\" y1=\"" + num(y) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(y) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + num(x0 - 6) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" + label + "</text>\n";
    }
    std::set<std::size_t> ns;
    for (const auto& r : rows) ns.insert(r.n);
    for (std::size_t n : ns) {
        const double x = px(static_cast<double>(n));
        svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x) + "\" y2=\"" + num(y0 + 4) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + num(x) + "\" y=\"" + num(y0 + 16) + "\" text-anchor=\"middle\">" + std::to_string(n) +
               "</text>\n";
    }
    svg += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 12) + "\" text-anchor=\"middle\">n</text>\n";
    svg += "<text x=\"16\" y=\"" + num((y0 + y1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           num((y0 + y1) / 2) + ")\">mean KL</text>\n";

    std::size_t colour = 0;
    double legend_y = kTop + 10;
    for (const auto& [label, pts] : series) {
        const char* c = kPalette[colour++ % std::size(kPalette)];
        svg += "<g class=\"series\" stroke=\"" + std::string(c) + "\" fill=\"" + std::string(c) + "\">\n";
        std::string poly;
        for (const auto* r : pts) poly += num(px(static_cast<double>(r->n))) + "," + num(py(r->mean_kl)) + " ";
        if (!poly.empty()) poly.pop_back();
        svg += "<polyline fill=\"none\" points=\"" + poly + "\"/>\n";
        for (const auto* r : pts) {
            const double x = px(static_cast<double>(r->n));
            svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(py(r->mean_kl - r->stderr_kl)) + "\" x2=\"" + num(x) +
                   "\" y2=\"" + num(py(r->mean_kl + r->stderr_kl)) + "\"/>\n";
            svg += "<circle cx=\"" + num(x) + "\" cy=\"" + num(py(r->mean_kl)) + "\" r=\"3\"/>\n";
        }
        svg += "</g>\n";
        svg += "<g class=\"legend\">\n";
        svg += "<line x1=\"" + num(x1 + 15) + "\" y1=\"" + num(legend_y) + "\" x2=\"" + num(x1 + 35) + "\" y2=\"" +
               num(legend_y) + "\" stroke=\"" + std::string(c) + "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + num(x1 + 40) + "\" y=\"" + num(legend_y + 4) + "\">" + escape(label) + "</text>\n";
        svg += "</g>\n";
        legend_y += 18;
    }
    svg += "</svg>\n";
    return svg;
}

void plot_emit(const std::vector<SummaryRow>& rows, const std::filesystem::path& out) {
    io::write_file(out, render_summary_svg(rows));
}

}  // namespace causaldo
