#pragma once

#include "tabpipe/error.hpp"
#include "tabpipe/stats.hpp"
#include "tabpipe/svg.hpp"
#include "tabpipe/value.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace tabpipe::plot {

/// Affine data->pixel mapping; y axes invert so larger values sit higher.
struct AxisScale {
    double dataLo = 0.0, dataHi = 1.0;
    double pixLo = 0.0, pixHi = 1.0;

    double map(double v) const {
        if (dataHi == dataLo) return (pixLo + pixHi) / 2.0;
        return pixLo + (v - dataLo) / (dataHi - dataLo) * (pixHi - pixLo);
    }
};

struct Canvas {
    double width = 800.0;
    double height = 600.0;
    double marginLeft = 70.0;
    double marginRight = 30.0;
    double marginTop = 40.0;
    double marginBottom = 50.0;

    double plotLeft() const { return marginLeft; }
    double plotRight() const { return width - marginRight; }
    double plotTop() const { return marginTop; }
    double plotBottom() const { return height - marginBottom; }
};

namespace plot_detail {

inline void drawFrame(svg::Document& doc, const Canvas& cv, const std::string& title,
                      const std::string& xLabel, const std::string& yLabel) {
    doc.rect(0, 0, cv.width, cv.height).attr("fill", "white");
    doc.line(cv.plotLeft(), cv.plotBottom(), cv.plotRight(), cv.plotBottom())
        .attr("stroke", "black").attr("stroke-width", "1");
    doc.line(cv.plotLeft(), cv.plotTop(), cv.plotLeft(), cv.plotBottom())
        .attr("stroke", "black").attr("stroke-width", "1");
    doc.label(cv.width / 2.0, cv.marginTop / 2.0 + 4.0, title, 14.0, "middle");
    doc.label((cv.plotLeft() + cv.plotRight()) / 2.0, cv.height - 12.0, xLabel, 12.0, "middle");
    auto y = doc.label(16.0, (cv.plotTop() + cv.plotBottom()) / 2.0, yLabel, 12.0, "middle");
    y.attr("transform", "rotate(-90 16 " + svg::px((cv.plotTop() + cv.plotBottom()) / 2.0) + ")");
}

inline void drawYExtent(svg::Document& doc, const Canvas& cv, const AxisScale& y) {
    doc.label(cv.plotLeft() - 6.0, y.map(y.dataLo) + 4.0, formatDouble(y.dataLo), 10.0, "end");
    doc.label(cv.plotLeft() - 6.0, y.map(y.dataHi) + 4.0, formatDouble(y.dataHi), 10.0, "end");
}

inline void drawXExtent(svg::Document& doc, const Canvas& cv, const AxisScale& x) {
    doc.label(x.map(x.dataLo), cv.plotBottom() + 16.0, formatDouble(x.dataLo), 10.0, "middle");
    doc.label(x.map(x.dataHi), cv.plotBottom() + 16.0, formatDouble(x.dataHi), 10.0, "middle");
}

// pad a degenerate or tight range so marks do not sit on the frame
inline std::pair<double, double> padded(double lo, double hi) {
    if (lo == hi) return {lo - 0.5, hi + 0.5};
    const double pad = (hi - lo) * 0.05;
    return {lo - pad, hi + pad};
}

} // namespace plot_detail

struct CategoryBox {
    std::string label;
    stats::BoxStats box;
};

/// One box per category, categories on the x axis in the given order. The
/// five box statistics and every outlier carry their value in data-value.
inline std::string renderBoxplot(const std::string& numericName, const std::string& categoricalName,
                                 const std::vector<CategoryBox>& groups) {
    Canvas cv;
    svg::Document doc(cv.width, cv.height);
    plot_detail::drawFrame(doc, cv, numericName + " by " + categoricalName, categoricalName,
                           numericName);

    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (const auto& g : groups) {
        lo = std::min({lo, g.box.whiskerLow, g.box.q1});
        hi = std::max({hi, g.box.whiskerHigh, g.box.q3});
        for (double o : g.box.outliers) {
            lo = std::min(lo, o);
            hi = std::max(hi, o);
        }
    }
    auto [plo, phi] = plot_detail::padded(lo, hi);
    AxisScale y{plo, phi, cv.plotBottom(), cv.plotTop()};
    plot_detail::drawYExtent(doc, cv, y);

    const double span = (cv.plotRight() - cv.plotLeft()) / static_cast<double>(groups.size());
    for (size_t i = 0; i < groups.size(); ++i) {
        const auto& g = groups[i];
        const double cx = cv.plotLeft() + span * (static_cast<double>(i) + 0.5);
        const double half = span * 0.3;
        const std::string color = svg::paletteColor(i);

        doc.rect(cx - half, y.map(g.box.q3), 2.0 * half, y.map(g.box.q1) - y.map(g.box.q3))
            .attr("fill", color).attr("fill-opacity", "0.5").attr("stroke", "black")
            .attr("class", "box");
        auto mark = [&](const char* cls, double v, double w) {
            doc.line(cx - w, y.map(v), cx + w, y.map(v))
                .attr("stroke", "black").attr("stroke-width", "1.5").attr("class", cls)
                .attr("data-value", formatDouble(v));
        };
        mark("q1", g.box.q1, half);
        mark("q3", g.box.q3, half);
        mark("median", g.box.median, half);
        mark("whisker-low", g.box.whiskerLow, half * 0.6);
        mark("whisker-high", g.box.whiskerHigh, half * 0.6);
        doc.line(cx, y.map(g.box.whiskerLow), cx, y.map(g.box.q1))
            .attr("stroke", "black").attr("stroke-width", "1");
        doc.line(cx, y.map(g.box.q3), cx, y.map(g.box.whiskerHigh))
            .attr("stroke", "black").attr("stroke-width", "1");
        for (double o : g.box.outliers)
            doc.circle(cx, y.map(o), 2.5)
                .attr("fill", "none").attr("stroke", "black").attr("class", "outlier")
                .attr("data-value", formatDouble(o));
        doc.label(cx, cv.plotBottom() + 16.0, g.label, 10.0, "middle");
    }
    return doc.str();
}

struct ScatterSeries {
    std::string hueLabel; // empty when no hue column
    std::vector<std::pair<double, double>> points;
};

/// Series are colored by the fixed palette in the given (sorted) order; a
/// legend appears whenever a hue label is present.
inline std::string renderScatter(const std::string& xName, const std::string& yName,
                                 const std::vector<ScatterSeries>& series,
                                 const std::string& hueName = "") {
    Canvas cv;
    svg::Document doc(cv.width, cv.height);
    plot_detail::drawFrame(doc, cv, yName + " vs " + xName, xName, yName);

    double xlo = std::numeric_limits<double>::max(), xhi = std::numeric_limits<double>::lowest();
    double ylo = xlo, yhi = xhi;
    bool any = false;
    for (const auto& s : series)
        for (const auto& [px, py] : s.points) {
            xlo = std::min(xlo, px); xhi = std::max(xhi, px);
            ylo = std::min(ylo, py); yhi = std::max(yhi, py);
            any = true;
        }
    if (!any) { xlo = ylo = 0.0; xhi = yhi = 1.0; }
    auto [pxlo, pxhi] = plot_detail::padded(xlo, xhi);
    auto [pylo, pyhi] = plot_detail::padded(ylo, yhi);
    AxisScale x{pxlo, pxhi, cv.plotLeft(), cv.plotRight()};
    AxisScale y{pylo, pyhi, cv.plotBottom(), cv.plotTop()};
    if (any) {
        plot_detail::drawXExtent(doc, cv, x);
        plot_detail::drawYExtent(doc, cv, y);
    }

    for (size_t s = 0; s < series.size(); ++s) {
        const std::string color = svg::paletteColor(s);
        const std::string dash = svg::paletteDash(s);
        for (const auto& [px, py] : series[s].points) {
            auto c = doc.circle(x.map(px), y.map(py), 2.5);
            c.attr("fill", color).attr("fill-opacity", "0.7").attr("class", "point");
            if (!dash.empty()) c.attr("stroke", color).attr("stroke-dasharray", dash);
            c.attr("data-x", formatDouble(px)).attr("data-y", formatDouble(py));
        }
    }

    if (!hueName.empty()) {
        const double lx = cv.plotRight() - 150.0;
        double ly = cv.plotTop() + 8.0;
        doc.label(lx, ly, hueName, 11.0);
        for (size_t s = 0; s < series.size(); ++s) {
            ly += 16.0;
            doc.rect(lx, ly - 9.0, 10.0, 10.0)
                .attr("fill", svg::paletteColor(s)).attr("class", "legend-swatch");
            doc.label(lx + 14.0, ly, series[s].hueLabel, 10.0).attr("class", "legend-label");
        }
    }
    return doc.str();
}

struct HistogramBins {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<size_t> counts;

    double binWidth() const {
        return counts.empty() ? 0.0 : (hi - lo) / static_cast<double>(counts.size());
    }
};

/// Equal-width bins over [min, max]; the max value lands in the last bin. A
/// zero-width range puts everything into bin 0.
inline HistogramBins computeHistogram(const std::vector<double>& values, int bins) {
    if (values.empty()) throw Error(ErrorCode::InsufficientData, "histogram of empty sample");
    if (bins < 1) throw Error(ErrorCode::BadParam, "bins must be >= 1");
    HistogramBins h;
    h.lo = *std::min_element(values.begin(), values.end());
    h.hi = *std::max_element(values.begin(), values.end());
    h.counts.assign(static_cast<size_t>(bins), 0);
    const double width = (h.hi - h.lo) / static_cast<double>(bins);
    for (double v : values) {
        size_t idx = 0;
        if (width > 0.0)
            idx = std::min(static_cast<size_t>(bins - 1),
                           static_cast<size_t>(std::floor((v - h.lo) / width)));
        ++h.counts[idx];
    }
    return h;
}

inline int sturgesBins(size_t n) {
    if (n <= 1) return 1;
    return static_cast<int>(std::ceil(1.0 + std::log2(static_cast<double>(n))));
}

inline std::string renderHistogram(const std::string& columnName, const HistogramBins& h) {
    Canvas cv;
    svg::Document doc(cv.width, cv.height);
    plot_detail::drawFrame(doc, cv, "Histogram of " + columnName, columnName, "count");

    const size_t maxCount = *std::max_element(h.counts.begin(), h.counts.end());
    AxisScale y{0.0, static_cast<double>(std::max<size_t>(maxCount, 1)), cv.plotBottom(),
                cv.plotTop()};
    auto [pxlo, pxhi] = plot_detail::padded(h.lo, h.hi);
    AxisScale x{pxlo, pxhi, cv.plotLeft(), cv.plotRight()};
    plot_detail::drawXExtent(doc, cv, x);
    doc.label(cv.plotLeft() - 6.0, y.map(static_cast<double>(maxCount)) + 4.0,
              std::to_string(maxCount), 10.0, "end");

    const double width = h.binWidth();
    for (size_t i = 0; i < h.counts.size(); ++i) {
        const double b0 = h.lo + width * static_cast<double>(i);
        const double b1 = h.lo + width * static_cast<double>(i + 1);
        const double top = y.map(static_cast<double>(h.counts[i]));
        doc.rect(x.map(b0), top, std::max(x.map(b1) - x.map(b0), 1.0), cv.plotBottom() - top)
            .attr("fill", svg::paletteColor(0)).attr("stroke", "black").attr("class", "bin")
            .attr("data-bin-start", formatDouble(b0))
            .attr("data-bin-end", formatDouble(b1))
            .attr("data-count", std::to_string(h.counts[i]));
    }
    return doc.str();
}

/// d x d grid: histograms on the diagonal, scatter off it. One document.
inline std::string renderPairplot(const std::vector<std::string>& names,
                                  const std::vector<std::vector<double>>& columns) {
    const size_t d = names.size();
    const double cell = 180.0;
    const double margin = 40.0;
    const double width = margin * 2 + cell * static_cast<double>(d);
    svg::Document doc(width, width);
    doc.rect(0, 0, width, width).attr("fill", "white");

    std::vector<std::pair<double, double>> ranges(d);
    for (size_t i = 0; i < d; ++i) {
        const auto [lo, hi] = columns[i].empty()
                                  ? std::pair<double, double>{0.0, 1.0}
                                  : std::pair<double, double>{
                                        *std::min_element(columns[i].begin(), columns[i].end()),
                                        *std::max_element(columns[i].begin(), columns[i].end())};
        ranges[i] = plot_detail::padded(lo, hi);
    }

    for (size_t row = 0; row < d; ++row) {
        for (size_t col = 0; col < d; ++col) {
            const double x0 = margin + cell * static_cast<double>(col);
            const double y0 = margin + cell * static_cast<double>(row);
            const double pad = 12.0;
            doc.rect(x0 + pad, y0 + pad, cell - 2 * pad, cell - 2 * pad)
                .attr("fill", "none").attr("stroke", "#999999").attr("class", "cell");
            AxisScale x{ranges[col].first, ranges[col].second, x0 + pad, x0 + cell - pad};
            if (row == col) {
                if (columns[col].empty()) continue;
                auto h = computeHistogram(columns[col], sturgesBins(columns[col].size()));
                const size_t maxCount =
                    std::max<size_t>(*std::max_element(h.counts.begin(), h.counts.end()), 1);
                AxisScale y{0.0, static_cast<double>(maxCount), y0 + cell - pad, y0 + pad};
                const double bw = h.binWidth();
                for (size_t i = 0; i < h.counts.size(); ++i) {
                    const double b0 = h.lo + bw * static_cast<double>(i);
                    const double b1 = h.lo + bw * static_cast<double>(i + 1);
                    const double top = y.map(static_cast<double>(h.counts[i]));
                    doc.rect(x.map(b0), top, std::max(x.map(b1) - x.map(b0), 0.5),
                             y0 + cell - pad - top)
                        .attr("fill", svg::paletteColor(0)).attr("class", "bin")
                        .attr("data-count", std::to_string(h.counts[i]));
                }
            } else {
                AxisScale y{ranges[row].first, ranges[row].second, y0 + cell - pad, y0 + pad};
                const size_t n = std::min(columns[col].size(), columns[row].size());
                for (size_t i = 0; i < n; ++i) {
                    doc.circle(x.map(columns[col][i]), y.map(columns[row][i]), 1.5)
                        .attr("fill", svg::paletteColor(0)).attr("fill-opacity", "0.6")
                        .attr("class", "point")
                        .attr("data-x", formatDouble(columns[col][i]))
                        .attr("data-y", formatDouble(columns[row][i]));
                }
            }
            if (row == d - 1)
                doc.label(x0 + cell / 2.0, margin + cell * static_cast<double>(d) + 16.0,
                          names[col], 10.0, "middle");
        }
        doc.label(margin - 6.0, margin + cell * static_cast<double>(row) + cell / 2.0, names[row],
                  10.0, "end");
    }
    return doc.str();
}

inline void writeTextFile(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

} // namespace tabpipe::plot
