#pragma once

#include "tabpipe/filter_expr.hpp"
#include "tabpipe/stage.hpp"

#include <algorithm>

namespace tabpipe::stages {

/// keep retains rows where the predicate is True; remove drops exactly those
/// rows. Null comparisons are Unknown, so such rows never count as matches.
inline void stageFilter(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const std::string mode = run.param.optString("mode", "keep");
    if (mode != "keep" && mode != "remove")
        throw Error(ErrorCode::BadParam, "mode must be \"keep\" or \"remove\"");

    const bool hasValues = run.param.has("values");
    const bool hasExpression = run.param.has("expression");
    const bool hasLike = run.param.has("likePattern");
    if (hasValues + hasExpression + hasLike != 1)
        throw Error(ErrorCode::AmbiguousPredicate,
                    "exactly one of values/expression/likePattern must be given");

    FilterExpr expr{FilterExpr::Kind::Compare};
    if (hasValues) {
        const std::string column = run.param.requireString("column");
        const Json& list = run.param.requireRaw("values");
        if (!list.is_array())
            throw Error(ErrorCode::BadParam, "values must be an array of scalars");
        std::vector<Value> items;
        for (const auto& v : list) items.push_back(jsonScalarToValue(v));
        f.columnIndex(column);
        expr = FilterExpr::in(column, std::move(items));
    } else if (hasLike) {
        const std::string column = run.param.requireString("column");
        f.columnIndex(column);
        expr = FilterExpr::like(column, run.param.requireString("likePattern"));
    } else {
        expr = parseFilterExpr(run.param.requireString("expression"));
    }

    std::vector<bool> mask(f.nrows());
    for (size_t r = 0; r < f.nrows(); ++r) {
        const bool matched = evalFilterExpr(expr, f, r) == Tri::True;
        mask[r] = mode == "keep" ? matched : !matched;
    }
    run.ctx.current = filterByMask(f, mask);
}

inline void stageDropNulls(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const auto columns = run.param.optStringList("columns");
    const bool blanksAsNull = run.param.optBool("treatBlanksAsNull", false);

    std::vector<size_t> checked;
    if (columns) {
        for (const auto& n : *columns) checked.push_back(f.columnIndex(n));
    } else {
        for (size_t c = 0; c < f.ncols(); ++c) checked.push_back(c);
    }

    std::vector<bool> mask(f.nrows(), true);
    for (size_t c : checked) {
        const auto& vals = f.column(c).values;
        for (size_t r = 0; r < vals.size(); ++r) {
            if (isNull(vals[r]) ||
                (blanksAsNull && std::holds_alternative<std::string>(vals[r]) &&
                 std::get<std::string>(vals[r]).empty()))
                mask[r] = false;
        }
    }
    run.ctx.current = filterByMask(f, mask);
}

inline void stageAddLiteral(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const std::string name = run.param.requireString("column");
    const Value value = jsonScalarToValue(run.param.requireRaw("value"));
    const auto dtype = valueDType(value);
    if (!dtype) throw Error(ErrorCode::BadParam, "literal value must not be null");
    Column col{name, *dtype, std::vector<Value>(f.nrows(), value)};
    run.ctx.current = f.withColumn(std::move(col));
}

/// Int64 ids 0..nrows-1 in row order: strictly increasing and unique, and in
/// this single-node engine also consecutive.
inline void stageAddUniqueId(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const std::string name = run.param.optString("column", "unique_id");
    const bool asFirst = run.param.optBool("asFirstColumn", true);
    Column col{name, DType::Int64, {}};
    col.values.reserve(f.nrows());
    for (size_t i = 0; i < f.nrows(); ++i) col.values.push_back(static_cast<int64_t>(i));
    run.ctx.current = f.withColumn(std::move(col), asFirst);
}

inline void stageSplitColumn(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const std::string name = run.param.requireString("column");
    const std::string delimiter = run.param.requireString("delimiter");
    const int64_t index = run.param.requireInt("index");
    const std::string newName = run.param.requireString("newColumn");
    if (delimiter.empty()) throw Error(ErrorCode::BadParam, "delimiter must be non-empty");
    if (index < 0) throw Error(ErrorCode::BadParam, "index must be >= 0");

    const Column& src = f.column(name);
    if (src.dtype != DType::Str)
        throw Error(ErrorCode::NotAStringColumn, "column '" + name + "' is " + dtypeName(src.dtype));

    Column out{newName, DType::Str, {}};
    out.values.reserve(f.nrows());
    for (const auto& v : src.values) {
        if (isNull(v)) {
            out.values.emplace_back(std::monostate{});
            continue;
        }
        const std::string& s = std::get<std::string>(v);
        // index-th delimiter-separated piece; out of range yields Null
        size_t start = 0;
        int64_t piece = 0;
        std::optional<std::string> found;
        while (true) {
            const size_t pos = s.find(delimiter, start);
            const std::string part =
                pos == std::string::npos ? s.substr(start) : s.substr(start, pos - start);
            if (piece == index) {
                found = part;
                break;
            }
            if (pos == std::string::npos) break;
            start = pos + delimiter.size();
            ++piece;
        }
        if (found)
            out.values.emplace_back(*found);
        else
            out.values.emplace_back(std::monostate{});
    }
    run.ctx.current = f.withColumn(std::move(out));
}

inline void stageSelectColumns(StageRun& run) {
    run.ctx.current = selectColumns(run.ctx.currentFrame(), run.param.requireStringList("columns"));
}

inline void stageRenameColumn(StageRun& run) {
    run.ctx.current = renameColumn(run.ctx.currentFrame(), run.param.requireString("column"),
                                   run.param.requireString("newColumn"));
}

inline void stageSaveDataFrame(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const std::string name = run.param.requireString("name");
    if (run.ctx.store.count(name))
        run.warn("overwriting stored frame '" + name + "'");
    run.ctx.store.insert_or_assign(name, f);
}

inline void stageRecallDataFrame(StageRun& run) {
    const std::string name = run.param.requireString("name");
    auto it = run.ctx.store.find(name);
    if (it == run.ctx.store.end())
        throw Error(ErrorCode::UnknownStoredFrame, "no stored frame named '" + name + "'");
    run.ctx.current = it->second;
}

/// Stored frame on top, current frame below, schemas matched by name.
inline void stageUnionDataframes(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const std::string name = run.param.requireString("name");
    auto it = run.ctx.store.find(name);
    if (it == run.ctx.store.end())
        throw Error(ErrorCode::UnknownStoredFrame, "no stored frame named '" + name + "'");
    run.ctx.current = unionByName(it->second, f);
}

inline void registerBasicStages(StageRegistry& reg) {
    reg["filter"] = StageDef{
        .type = "filter",
        .params = {{"mode", ParamType::String, false},
                   {"column", ParamType::String, false},
                   {"values", ParamType::Array, false},
                   {"expression", ParamType::String, false},
                   {"likePattern", ParamType::String, false}},
        .run = stageFilter,
        .validateExtra =
            [](const Json& p, std::vector<std::string>& diags) {
                const int selectors =
                    p.contains("values") + p.contains("expression") + p.contains("likePattern");
                if (selectors != 1)
                    diags.push_back("exactly one of values/expression/likePattern must be given");
                if ((p.contains("values") || p.contains("likePattern")) && !p.contains("column"))
                    diags.push_back("column is required with values/likePattern");
                if (p.contains("mode") && p["mode"].is_string()) {
                    const auto m = p["mode"].get<std::string>();
                    if (m != "keep" && m != "remove")
                        diags.push_back("mode must be \"keep\" or \"remove\"");
                }
                if (p.contains("expression") && p["expression"].is_string()) {
                    try {
                        parseFilterExpr(p["expression"].get<std::string>());
                    } catch (const Error& e) {
                        diags.push_back(e.what());
                    }
                }
            }};
    reg["dropNulls"] = StageDef{
        .type = "dropNulls",
        .params = {{"columns", ParamType::StringList, false},
                   {"treatBlanksAsNull", ParamType::Bool, false}},
        .run = stageDropNulls};
    reg["addLiteral"] = StageDef{
        .type = "addLiteral",
        .params = {{"column", ParamType::String, true}, {"value", ParamType::Scalar, true}},
        .run = stageAddLiteral};
    reg["addUniqueId"] = StageDef{
        .type = "addUniqueId",
        .params = {{"column", ParamType::String, false}, {"asFirstColumn", ParamType::Bool, false}},
        .run = stageAddUniqueId};
    reg["splitColumn"] = StageDef{
        .type = "splitColumn",
        .params = {{"column", ParamType::String, true},
                   {"delimiter", ParamType::String, true},
                   {"index", ParamType::Int, true},
                   {"newColumn", ParamType::String, true}},
        .run = stageSplitColumn};
    reg["selectColumns"] = StageDef{
        .type = "selectColumns",
        .params = {{"columns", ParamType::StringList, true}},
        .run = stageSelectColumns};
    reg["renameColumn"] = StageDef{
        .type = "renameColumn",
        .params = {{"column", ParamType::String, true}, {"newColumn", ParamType::String, true}},
        .run = stageRenameColumn};
    reg["saveDataFrame"] = StageDef{
        .type = "saveDataFrame",
        .savesFrame = true,
        .params = {{"name", ParamType::String, true}},
        .run = stageSaveDataFrame};
    reg["recallDataFrame"] = StageDef{
        .type = "recallDataFrame",
        .usesStoredFrame = true,
        .params = {{"name", ParamType::String, true}},
        .run = stageRecallDataFrame};
    reg["unionDataframes"] = StageDef{
        .type = "unionDataframes",
        .usesStoredFrame = true,
        .params = {{"name", ParamType::String, true}},
        .run = stageUnionDataframes};
}

} // namespace tabpipe::stages
