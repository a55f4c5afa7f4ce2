#pragma once

#include "tabpipe/plot.hpp"
#include "tabpipe/stage.hpp"
#include "tabpipe/stages_eda.hpp"

#include <map>
#include <set>

namespace tabpipe::stages {

/// Columns of any dtype whose distinct non-null value count is at most the
/// cutoff.
inline std::vector<std::string> detectCategoricals(const Frame& f, int64_t cutoff) {
    std::vector<std::string> out;
    for (const auto& c : f.columns()) {
        std::set<std::string> distinct;
        bool over = false;
        for (const auto& v : c.values) {
            if (isNull(v)) continue;
            distinct.insert(renderValue(v));
            if (static_cast<int64_t>(distinct.size()) > cutoff) {
                over = true;
                break;
            }
        }
        if (!over) out.push_back(c.name);
    }
    return out;
}

namespace plot_stage_detail {

inline std::filesystem::path plotDir(const StageRun& run) {
    if (run.param.has("outDir")) return run.ctx.resolveOutput(run.param.requireString("outDir"));
    return run.ctx.outputDir;
}

/// numeric column resolution honoring the processAllNumeric override
inline std::vector<std::string> resolveNumeric(const StageRun& run, const Frame& f,
                                               const char* listKey) {
    if (run.param.optBool("processAllNumeric", false)) {
        run.param.optStringList(listKey); // consumed; override ignores the list
        return numericColumnNames(f);
    }
    auto list = run.param.optStringList(listKey);
    if (!list) return {};
    for (const auto& n : *list) requireNumeric(f, n);
    return *list;
}

struct ValueOrder {
    bool operator()(const Value& a, const Value& b) const { return valueLess(a, b); }
};

} // namespace plot_stage_detail

/// One SVG per (categorical x numeric) combination, category values on the
/// x axis sorted ascending. Rows null in either column are dropped per plot.
inline void stageEdaBoxplot(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const auto dir = plot_stage_detail::plotDir(run);
    const int64_t cutoff = run.param.optInt("categoricalCutoff", 15);

    const auto numerics = plot_stage_detail::resolveNumeric(run, f, "numericColumnNames");
    std::vector<std::string> categoricals;
    if (run.param.optBool("processAllCategorical", false)) {
        run.param.optStringList("categoricalColumnNames");
        categoricals = detectCategoricals(f, cutoff);
    } else if (auto list = run.param.optStringList("categoricalColumnNames")) {
        for (const auto& n : *list) f.columnIndex(n);
        categoricals = *list;
    }
    if (numerics.empty()) throw Error(ErrorCode::NoNumericColumns, "no numeric columns to plot");
    if (categoricals.empty())
        throw Error(ErrorCode::NoCategoricalColumns, "no categorical columns to plot");

    for (const auto& cat : categoricals) {
        for (const auto& num : numerics) {
            const Column& cc = f.column(cat);
            const Column& nc = f.column(num);
            std::map<Value, std::vector<double>, plot_stage_detail::ValueOrder> groups;
            size_t dropped = 0;
            for (size_t r = 0; r < f.nrows(); ++r) {
                if (isNull(cc.values[r]) || isNull(nc.values[r])) {
                    ++dropped;
                    continue;
                }
                groups[cc.values[r]].push_back(asDouble(nc.values[r]));
            }
            if (dropped)
                run.ctx.log.debug("boxplot " + num + " by " + cat + ": dropped " +
                                  std::to_string(dropped) + " null rows");
            std::vector<plot::CategoryBox> boxes;
            for (const auto& [value, xs] : groups)
                boxes.push_back({renderValue(value), stats::computeBoxStats(xs)});
            const auto path = dir / ("boxplot_" + sanitizeFilenamePart(num) + "_by_" +
                                     sanitizeFilenamePart(cat) + ".svg");
            plot::writeTextFile(path, plot::renderBoxplot(num, cat, boxes));
            run.addArtifact(path);
        }
    }
}

/// One SVG per y column against the fixed x column; an optional hue column
/// colors points by its distinct values with a legend.
inline void stageEdaScatterplot(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const auto dir = plot_stage_detail::plotDir(run);
    const std::string x = run.param.requireString("x");
    requireNumeric(f, x);

    std::vector<std::string> ys;
    if (run.param.optBool("processAllNumeric", false)) {
        run.param.optStringList("yColumns");
        for (const auto& n : numericColumnNames(f))
            if (n != x) ys.push_back(n); // x itself only via the explicit list
    } else if (auto list = run.param.optStringList("yColumns")) {
        for (const auto& n : *list) requireNumeric(f, n);
        ys = *list;
    }
    if (ys.empty()) throw Error(ErrorCode::NoNumericColumns, "no y columns to plot");

    const std::string hue = run.param.optString("hueColumn", "");
    const Column* hc = hue.empty() ? nullptr : &f.column(hue);
    const Column& xc = f.column(x);

    for (const auto& y : ys) {
        const Column& yc = f.column(y);
        std::map<Value, plot::ScatterSeries, plot_stage_detail::ValueOrder> byHue;
        plot::ScatterSeries plain;
        size_t dropped = 0;
        for (size_t r = 0; r < f.nrows(); ++r) {
            if (isNull(xc.values[r]) || isNull(yc.values[r]) || (hc && isNull(hc->values[r]))) {
                ++dropped;
                continue;
            }
            const auto point = std::make_pair(asDouble(xc.values[r]), asDouble(yc.values[r]));
            if (hc) {
                auto& series = byHue[hc->values[r]];
                series.hueLabel = renderValue(hc->values[r]);
                series.points.push_back(point);
            } else {
                plain.points.push_back(point);
            }
        }
        if (dropped)
            run.ctx.log.debug("scatter " + y + " vs " + x + ": dropped " +
                              std::to_string(dropped) + " null rows");
        std::vector<plot::ScatterSeries> series;
        if (hc)
            for (auto& [value, s] : byHue) series.push_back(std::move(s));
        else
            series.push_back(std::move(plain));
        const auto path = dir / ("scatter_" + sanitizeFilenamePart(y) + "_vs_" +
                                 sanitizeFilenamePart(x) + ".svg");
        plot::writeTextFile(path, plot::renderScatter(x, y, series, hue));
        run.addArtifact(path);
    }
}

/// One SVG per column; bins default to Sturges on the non-null count.
inline void stageEdaHistogram(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const auto dir = plot_stage_detail::plotDir(run);
    const auto columns = plot_stage_detail::resolveNumeric(run, f, "columns");
    if (columns.empty()) throw Error(ErrorCode::NoNumericColumns, "no columns to plot");
    std::optional<int64_t> bins;
    if (run.param.has("bins")) {
        bins = run.param.requireInt("bins");
        if (*bins < 1) throw Error(ErrorCode::BadParam, "bins must be >= 1");
    }

    for (const auto& name : columns) {
        const auto xs = nonNullDoubles(f.column(name));
        if (xs.empty()) {
            run.warn("histogram " + name + ": no non-null values, skipped");
            continue;
        }
        const int b = bins ? static_cast<int>(*bins) : plot::sturgesBins(xs.size());
        const auto h = plot::computeHistogram(xs, b);
        const auto path = dir / ("histogram_" + sanitizeFilenamePart(name) + ".svg");
        plot::writeTextFile(path, plot::renderHistogram(name, h));
        run.addArtifact(path);
    }
}

/// Single SVG grid, scatter off-diagonal and histograms on the diagonal.
/// Rows with a null in any plotted column are dropped so cells stay aligned.
inline void stageEdaPairplot(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const auto dir = plot_stage_detail::plotDir(run);
    const auto columns = plot_stage_detail::resolveNumeric(run, f, "columns");
    if (columns.empty()) throw Error(ErrorCode::NoNumericColumns, "no columns to plot");
    const int64_t maxColumns = run.param.optInt("maxColumns", 8);
    if (static_cast<int64_t>(columns.size()) > maxColumns)
        throw Error(ErrorCode::PairplotTooLarge,
                    std::to_string(columns.size()) + " columns exceeds maxColumns=" +
                        std::to_string(maxColumns));

    std::vector<std::vector<double>> data(columns.size());
    size_t dropped = 0;
    for (size_t r = 0; r < f.nrows(); ++r) {
        bool anyNull = false;
        for (const auto& name : columns)
            if (isNull(f.column(name).values[r])) {
                anyNull = true;
                break;
            }
        if (anyNull) {
            ++dropped;
            continue;
        }
        for (size_t c = 0; c < columns.size(); ++c)
            data[c].push_back(asDouble(f.column(columns[c]).values[r]));
    }
    if (dropped)
        run.ctx.log.debug("pairplot: dropped " + std::to_string(dropped) + " null rows");

    const auto path = dir / ("pairplot_" + sanitizeFilenamePart(run.name) + ".svg");
    plot::writeTextFile(path, plot::renderPairplot(columns, data));
    run.addArtifact(path);
}

inline void registerPlotStages(StageRegistry& reg) {
    reg["edaBoxplot"] = StageDef{
        .type = "edaBoxplot",
        .params = {{"numericColumnNames", ParamType::StringList, false},
                   {"categoricalColumnNames", ParamType::StringList, false},
                   {"processAllNumeric", ParamType::Bool, false},
                   {"processAllCategorical", ParamType::Bool, false},
                   {"categoricalCutoff", ParamType::Int, false},
                   {"outDir", ParamType::String, false}},
        .run = stageEdaBoxplot};
    reg["edaScatterplot"] = StageDef{
        .type = "edaScatterplot",
        .params = {{"x", ParamType::String, true},
                   {"yColumns", ParamType::StringList, false},
                   {"processAllNumeric", ParamType::Bool, false},
                   {"hueColumn", ParamType::String, false},
                   {"outDir", ParamType::String, false}},
        .run = stageEdaScatterplot};
    reg["edaHistogram"] = StageDef{
        .type = "edaHistogram",
        .params = {{"columns", ParamType::StringList, false},
                   {"processAllNumeric", ParamType::Bool, false},
                   {"bins", ParamType::Int, false},
                   {"outDir", ParamType::String, false}},
        .run = stageEdaHistogram};
    reg["edaPairplot"] = StageDef{
        .type = "edaPairplot",
        .params = {{"columns", ParamType::StringList, false},
                   {"processAllNumeric", ParamType::Bool, false},
                   {"maxColumns", ParamType::Int, false},
                   {"outDir", ParamType::String, false}},
        .run = stageEdaPairplot};
}

} // namespace tabpipe::stages
