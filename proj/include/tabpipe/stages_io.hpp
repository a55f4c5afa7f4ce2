#pragma once

#include "tabpipe/csv.hpp"
#include "tabpipe/rng.hpp"
#include "tabpipe/stage.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace tabpipe {

/// First n rows as an aligned text table; used by the show stage.
inline std::string renderTextTable(const Frame& f, size_t n) {
    const size_t rows = std::min(n, f.nrows());
    std::vector<size_t> widths(f.ncols());
    std::vector<std::vector<std::string>> cells(rows, std::vector<std::string>(f.ncols()));
    for (size_t c = 0; c < f.ncols(); ++c) {
        widths[c] = f.column(c).name.size();
        for (size_t r = 0; r < rows; ++r) {
            cells[r][c] = renderValue(f.column(c).values[r]);
            widths[c] = std::max(widths[c], cells[r][c].size());
        }
    }
    std::ostringstream os;
    auto rule = [&]() {
        os << "+";
        for (size_t c = 0; c < f.ncols(); ++c) os << std::string(widths[c] + 2, '-') << "+";
        os << "\n";
    };
    rule();
    os << "|";
    for (size_t c = 0; c < f.ncols(); ++c)
        os << " " << std::setw(static_cast<int>(widths[c])) << std::left << f.column(c).name
           << " |";
    os << "\n";
    rule();
    for (size_t r = 0; r < rows; ++r) {
        os << "|";
        for (size_t c = 0; c < f.ncols(); ++c)
            os << " " << std::setw(static_cast<int>(widths[c])) << std::left << cells[r][c] << " |";
        os << "\n";
    }
    rule();
    os << "showing " << rows << " of " << f.nrows() << " rows";
    return os.str();
}

namespace stages {

inline CsvDialect dialectFromParams(const ParamReader& p) {
    CsvDialect d;
    const std::string delim = p.optString("delimiter", ",");
    if (delim.size() != 1)
        throw Error(ErrorCode::BadParam, "delimiter must be a single character");
    d.delimiter = delim[0];
    d.header = p.optBool("header", true);
    if (auto tokens = p.optStringList("nullTokens")) d.nullTokens = *tokens;
    if (d.delimiter == d.quote)
        throw Error(ErrorCode::BadParam, "delimiter must differ from the quote character");
    return d;
}

inline void stageInputCsv(StageRun& run) {
    const std::string path = run.param.requireString("path");
    const CsvDialect dialect = dialectFromParams(run.param);
    const bool inferSchema = run.param.optBool("inferSchema", true);
    run.ctx.current = readCsvFile(path, dialect, inferSchema);
    run.ctx.log.debug("read " + std::to_string(run.ctx.current->nrows()) + " rows from " + path);
}

inline void stageOutputCsv(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const std::string path = run.param.requireString("path");
    CsvDialect dialect = dialectFromParams(run.param);
    const std::string mode = run.param.optString("writeMode", "error");
    if (mode != "overwrite" && mode != "error")
        throw Error(ErrorCode::BadParam, "writeMode must be \"overwrite\" or \"error\"");
    const auto resolved = run.ctx.resolveOutput(path);
    writeCsvFile(f, resolved, dialect, mode == "overwrite");
    run.addArtifact(resolved);
}

inline void stageShow(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const int64_t n = run.param.optInt("n", 20);
    if (n < 0) throw Error(ErrorCode::BadParam, "n must be >= 0");
    run.ctx.log.info("\n" + renderTextTable(f, static_cast<size_t>(n)));
}

/// Bernoulli per-row sampling: each row kept independently with probability
/// `fraction`, driven by the stage seed (falling back to the context seed).
/// The kept subset is a pure function of (row count, fraction, seed).
inline void stageSample(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const double fraction = run.param.requireNumber("fraction");
    if (fraction < 0.0 || fraction > 1.0)
        throw Error(ErrorCode::BadFraction, "fraction must be within [0, 1]");
    const uint64_t seed =
        static_cast<uint64_t>(run.param.optInt("seed", static_cast<int64_t>(run.ctx.rngSeed)));
    Rng rng(seed);
    std::vector<bool> mask(f.nrows());
    size_t kept = 0;
    for (size_t i = 0; i < mask.size(); ++i) {
        mask[i] = rng.uniform() < fraction;
        kept += mask[i];
    }
    run.ctx.log.debug("sample kept " + std::to_string(kept) + " of " + std::to_string(f.nrows()));
    run.ctx.current = filterByMask(f, mask);
}

inline void registerIoStages(StageRegistry& reg) {
    reg["inputCsv"] = StageDef{
        .type = "inputCsv",
        .isInput = true,
        .params = {{"path", ParamType::String, true},
                   {"delimiter", ParamType::String, false},
                   {"header", ParamType::Bool, false},
                   {"inferSchema", ParamType::Bool, false},
                   {"nullTokens", ParamType::StringList, false}},
        .run = stageInputCsv};
    reg["outputCsv"] = StageDef{
        .type = "outputCsv",
        .params = {{"path", ParamType::String, true},
                   {"delimiter", ParamType::String, false},
                   {"header", ParamType::Bool, false},
                   {"writeMode", ParamType::String, false}},
        .run = stageOutputCsv};
    reg["show"] = StageDef{.type = "show", .params = {{"n", ParamType::Int, false}}, .run = stageShow};
    reg["sample"] = StageDef{
        .type = "sample",
        .params = {{"fraction", ParamType::Number, true}, {"seed", ParamType::Int, false}},
        .run = stageSample};
}

} // namespace stages
} // namespace tabpipe
