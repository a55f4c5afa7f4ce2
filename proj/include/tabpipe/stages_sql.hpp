#pragma once

#include "tabpipe/sql.hpp"
#include "tabpipe/stage.hpp"

namespace tabpipe::stages {

/// Run a SELECT against the current frame exposed as MyTempView; the result
/// replaces the current frame.
inline void stageSql(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const SqlQuery query = parseSql(run.param.requireString("query"));
    SqlEvalStats stats;
    run.ctx.current = evaluateSql(query, f, &stats);
    if (stats.divisionsByZero)
        run.warn(std::to_string(stats.divisionsByZero) + " divisions by zero produced Null");
}

inline void registerSqlStages(StageRegistry& reg) {
    reg["sql"] = StageDef{
        .type = "sql",
        .params = {{"query", ParamType::String, true}},
        .run = stageSql,
        .validateExtra =
            [](const Json& p, std::vector<std::string>& diags) {
                if (p.contains("query") && p["query"].is_string()) {
                    try {
                        parseSql(p["query"].get<std::string>());
                    } catch (const Error& e) {
                        diags.push_back(e.what());
                    }
                }
            }};
}

} // namespace tabpipe::stages
