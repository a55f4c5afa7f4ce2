#pragma once

#include "tabpipe/plot.hpp"
#include "tabpipe/stage.hpp"
#include "tabpipe/stages_feature.hpp"
#include "tabpipe/stats.hpp"

#include <cstdio>
#include <set>
#include <sstream>

namespace tabpipe::stages {

// report floats carry 6 significant digits
inline std::string formatReportNumber(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::vector<std::string> numericColumnNames(const Frame& f) {
    std::vector<std::string> out;
    for (const auto& c : f.columns())
        if (isNumeric(c.dtype)) out.push_back(c.name);
    return out;
}

inline std::vector<double> nonNullDoubles(const Column& c) {
    std::vector<double> out;
    out.reserve(c.values.size());
    for (const auto& v : c.values)
        if (!isNull(v)) out.push_back(asDouble(v));
    return out;
}

/// min/max/mean/stddev/skewness/kurtosis per numeric column. The column
/// headers pin the estimator variants (sample stddev, population-moment g1,
/// excess g2).
inline void stageEdaFeatureExtents(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    std::vector<std::string> columns;
    if (auto list = run.param.optStringList("columns")) {
        for (const auto& n : *list) requireNumeric(f, n);
        columns = *list;
    } else {
        columns = numericColumnNames(f);
    }

    std::ostringstream os;
    os << "column,min,max,mean,stddev_sample,skewness_g1,kurtosis_excess_g2,n_nonnull\n";
    for (const auto& name : columns) {
        const auto xs = nonNullDoubles(f.column(name));
        const auto m = stats::computeMoments(xs);
        os << name << ",";
        if (m.n > 0)
            os << formatReportNumber(m.min) << "," << formatReportNumber(m.max) << ","
               << formatReportNumber(m.mean) << ",";
        else
            os << ",,,";
        os << (m.stddev ? formatReportNumber(*m.stddev) : "") << ","
           << (m.skewness ? formatReportNumber(*m.skewness) : "") << ","
           << (m.kurtosis ? formatReportNumber(*m.kurtosis) : "") << "," << m.n << "\n";
        run.ctx.log.info("extents " + name + ": n=" + std::to_string(m.n) +
                         (m.n ? " min=" + formatReportNumber(m.min) +
                                    " max=" + formatReportNumber(m.max) +
                                    " mean=" + formatReportNumber(m.mean)
                              : ""));
    }
    const auto path = run.reportPath();
    plot::writeTextFile(path, os.str());
    run.addArtifact(path);
}

/// Per-column type profile: non-null count, distinct count, percent filled,
/// all-integer flag and the categorical flag (distinct <= cutoff).
inline void stageEdaFeatureTypes(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const int64_t cutoff = run.param.optInt("categoricalCutoff", 15);

    std::ostringstream os;
    os << "column,inferred_type,total_count,distinct_count,percent_filled,is_all_integer,"
          "is_categorical\n";
    for (const auto& c : f.columns()) {
        size_t nonNull = 0;
        size_t filled = 0; // non-null and, for strings, non-blank
        std::set<std::string> distinct;
        bool allInteger = isNumeric(c.dtype);
        for (const auto& v : c.values) {
            if (isNull(v)) continue;
            ++nonNull;
            if (!(std::holds_alternative<std::string>(v) && std::get<std::string>(v).empty()))
                ++filled;
            distinct.insert(renderValue(v));
            if (allInteger && std::holds_alternative<double>(v)) {
                const double x = std::get<double>(v);
                if (x != std::floor(x)) allInteger = false;
            }
        }
        if (nonNull == 0) allInteger = false;
        const double percentFilled =
            f.nrows() == 0 ? 0.0 : 100.0 * static_cast<double>(filled) / static_cast<double>(f.nrows());
        const bool categorical = static_cast<int64_t>(distinct.size()) <= cutoff;
        os << c.name << "," << dtypeName(c.dtype) << "," << nonNull << "," << distinct.size()
           << "," << formatReportNumber(percentFilled) << "," << (allInteger ? "true" : "false")
           << "," << (categorical ? "true" : "false") << "\n";
    }
    const auto path = run.reportPath();
    plot::writeTextFile(path, os.str());
    run.addArtifact(path);
}

/// Null/blank percentages per column plus the complete-row summary. A complete
/// observation has no nulls and no blank strings anywhere.
inline void stageEdaCompleteObservations(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();

    std::ostringstream os;
    os << "column,percent_null,percent_blank\n";
    std::vector<bool> complete(f.nrows(), true);
    for (const auto& c : f.columns()) {
        size_t nulls = 0, blanks = 0;
        for (size_t r = 0; r < f.nrows(); ++r) {
            const Value& v = c.values[r];
            if (isNull(v)) {
                ++nulls;
                complete[r] = false;
            } else if (std::holds_alternative<std::string>(v) &&
                       std::get<std::string>(v).empty()) {
                ++blanks;
                complete[r] = false;
            }
        }
        const double denom = f.nrows() == 0 ? 1.0 : static_cast<double>(f.nrows());
        os << c.name << "," << formatReportNumber(100.0 * static_cast<double>(nulls) / denom)
           << "," << formatReportNumber(100.0 * static_cast<double>(blanks) / denom) << "\n";
    }
    size_t completeRows = 0;
    for (bool b : complete) completeRows += b;
    const double completePercent =
        f.nrows() == 0 ? 100.0
                       : 100.0 * static_cast<double>(completeRows) / static_cast<double>(f.nrows());
    os << "completeRowCount=" << completeRows << "\n";
    os << "completeRowPercent=" << formatReportNumber(completePercent) << "\n";

    const auto path = run.reportPath();
    plot::writeTextFile(path, os.str());
    run.addArtifact(path);
    run.ctx.log.info("complete observations: " + std::to_string(completeRows) + " of " +
                     std::to_string(f.nrows()) + " rows");
}

/// Pearson r over pairwise-complete observations.
inline double pearsonColumns(const Column& x, const Column& y) {
    std::vector<double> xs, ys;
    for (size_t r = 0; r < x.values.size(); ++r) {
        if (isNull(x.values[r]) || isNull(y.values[r])) continue;
        xs.push_back(asDouble(x.values[r]));
        ys.push_back(asDouble(y.values[r]));
    }
    return stats::pearson(xs, ys);
}

inline void stageEdaColumnCorrelation(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const auto columns = run.param.requireStringList("columns");
    const std::string target = run.param.requireString("target");
    const Column& tc = requireNumeric(f, target);

    std::ostringstream os;
    os << "column,target,r\n";
    for (const auto& name : columns) {
        const Column& c = requireNumeric(f, name);
        os << name << "," << target << "," << formatReportNumber(pearsonColumns(c, tc)) << "\n";
    }
    const auto path = run.reportPath();
    plot::writeTextFile(path, os.str());
    run.addArtifact(path);
}

/// Symmetric matrix over all column pairs, unit diagonal; undefined cells
/// (constant column or < 2 pairwise-complete rows) stay empty.
inline void stageEdaPairwiseCorrelation(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const auto columns = run.param.requireStringList("columns");
    for (const auto& name : columns) requireNumeric(f, name);

    const size_t n = columns.size();
    std::vector<std::vector<std::string>> cells(n, std::vector<std::string>(n));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i; j < n; ++j) {
            std::string cell;
            if (i == j) {
                // unit diagonal for nonconstant columns
                try {
                    pearsonColumns(f.column(columns[i]), f.column(columns[i]));
                    cell = "1";
                } catch (const Error&) {
                    cell = "";
                }
            } else {
                try {
                    cell = formatReportNumber(
                        pearsonColumns(f.column(columns[i]), f.column(columns[j])));
                } catch (const Error&) {
                    cell = "";
                }
            }
            cells[i][j] = cell;
            cells[j][i] = cell;
        }
    }

    std::ostringstream os;
    os << "column";
    for (const auto& name : columns) os << "," << name;
    os << "\n";
    for (size_t i = 0; i < n; ++i) {
        os << columns[i];
        for (size_t j = 0; j < n; ++j) os << "," << cells[i][j];
        os << "\n";
    }
    const auto path = run.reportPath();
    plot::writeTextFile(path, os.str());
    run.addArtifact(path);
}

inline void registerEdaStages(StageRegistry& reg) {
    reg["edaFeatureExtents"] = StageDef{
        .type = "edaFeatureExtents",
        .params = {{"columns", ParamType::StringList, false}, {"outPath", ParamType::String, false}},
        .run = stageEdaFeatureExtents};
    reg["edaFeatureTypes"] = StageDef{
        .type = "edaFeatureTypes",
        .params = {{"categoricalCutoff", ParamType::Int, false},
                   {"outPath", ParamType::String, false}},
        .run = stageEdaFeatureTypes};
    reg["edaCompleteObservations"] = StageDef{
        .type = "edaCompleteObservations",
        .params = {{"outPath", ParamType::String, false}},
        .run = stageEdaCompleteObservations};
    reg["edaColumnCorrelation"] = StageDef{
        .type = "edaColumnCorrelation",
        .params = {{"columns", ParamType::StringList, true},
                   {"target", ParamType::String, true},
                   {"outPath", ParamType::String, false}},
        .run = stageEdaColumnCorrelation};
    reg["edaPairwiseCorrelation"] = StageDef{
        .type = "edaPairwiseCorrelation",
        .params = {{"columns", ParamType::StringList, true}, {"outPath", ParamType::String, false}},
        .run = stageEdaPairwiseCorrelation};
}

} // namespace tabpipe::stages
