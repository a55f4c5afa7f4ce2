#pragma once

#include "tabpipe/registry.hpp"
#include "tabpipe/stage.hpp"

#include <chrono>
#include <set>
#include <sstream>

namespace tabpipe {

/// Parse pipeline JSON: {"stages":[{"stageName"?,"stageType","stageParam"?},..]}.
/// Unknown top-level keys are collected as warnings, not errors.
inline PipelineSpec parsePipeline(const std::string& jsonText) {
    Json doc;
    try {
        doc = Json::parse(jsonText);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::JsonSyntax, e.what());
    }
    if (!doc.is_object() || !doc.contains("stages") || !doc["stages"].is_array())
        throw Error(ErrorCode::MissingStagesKey, "top-level object must hold a \"stages\" array");

    PipelineSpec spec;
    for (const auto& [key, v] : doc.items())
        if (key != "stages")
            spec.parseWarnings.push_back("ignoring unknown top-level key \"" + key + "\"");

    const Json& stages = doc["stages"];
    if (stages.empty()) throw Error(ErrorCode::EmptyPipeline, "stages array must be non-empty");

    for (size_t i = 0; i < stages.size(); ++i) {
        const Json& s = stages[i];
        if (!s.is_object())
            throw Error(ErrorCode::StageNotObject, "stage " + std::to_string(i) + " is not an object");
        StageSpec stage;
        if (!s.contains("stageType") || !s["stageType"].is_string() ||
            s["stageType"].get<std::string>().empty())
            throw Error(ErrorCode::MissingStageType,
                        "stage " + std::to_string(i) + " lacks a stageType string");
        stage.stageType = s["stageType"].get<std::string>();
        if (s.contains("stageName")) {
            if (!s["stageName"].is_string())
                throw Error(ErrorCode::StageNotObject,
                            "stage " + std::to_string(i) + " stageName must be a string");
            stage.stageName = s["stageName"].get<std::string>();
        }
        if (s.contains("stageParam")) {
            if (!s["stageParam"].is_object())
                throw Error(ErrorCode::StageNotObject,
                            "stage " + std::to_string(i) + " stageParam must be an object");
            stage.stageParam = s["stageParam"];
        }
        for (const auto& [key, v] : s.items())
            if (key != "stageType" && key != "stageName" && key != "stageParam")
                spec.parseWarnings.push_back("stage " + std::to_string(i) +
                                             ": ignoring unknown key \"" + key + "\"");
        spec.stages.push_back(std::move(stage));
    }
    return spec;
}

inline std::string effectiveStageName(const StageSpec& s, size_t index) {
    if (!s.stageName.empty()) return s.stageName;
    return s.stageType + "#" + std::to_string(index);
}

/// Dry-run checks: unknown stage types, input-first rule, stageParam schemas,
/// and store/recall plus features-vector dataflow. An empty result means the
/// pipeline is schedulable.
inline std::vector<std::string> validatePipeline(const PipelineSpec& spec) {
    std::vector<std::string> diags;
    const StageRegistry& registry = stageRegistry();

    std::set<std::string> savedNames;
    bool featuresAvailable = false;
    for (size_t i = 0; i < spec.stages.size(); ++i) {
        const StageSpec& s = spec.stages[i];
        const std::string label = "stage " + std::to_string(i) + " (" + s.stageType + ")";

        auto it = registry.find(s.stageType);
        if (it == registry.end()) {
            diags.push_back(label + ": unknown stage type");
            continue;
        }
        const StageDef& def = it->second;
        if (i == 0 && !def.isInput)
            diags.push_back(label + ": first stage must be an input stage");

        for (const auto& field : def.params) {
            if (!s.stageParam.contains(field.name)) {
                if (field.required)
                    diags.push_back(label + ": stageParam." + field.name + " is required");
                continue;
            }
            if (!jsonMatchesParamType(s.stageParam[field.name], field.type))
                diags.push_back(label + ": stageParam." + field.name + " must be " +
                                paramTypeName(field.type));
        }
        if (def.validateExtra) {
            std::vector<std::string> extra;
            def.validateExtra(s.stageParam, extra);
            for (auto& d : extra) diags.push_back(label + ": " + d);
        }

        if (def.usesStoredFrame && s.stageParam.contains("name") &&
            s.stageParam["name"].is_string()) {
            const std::string name = s.stageParam["name"].get<std::string>();
            if (!savedNames.count(name))
                diags.push_back(label + ": no frame named '" + name + "' saved earlier");
        }
        if (def.savesFrame && s.stageParam.contains("name") && s.stageParam["name"].is_string())
            savedNames.insert(s.stageParam["name"].get<std::string>());

        if (def.requiresFeatures && !featuresAvailable)
            diags.push_back(label + ": requires an earlier addFeaturesVector stage");
        if (def.producesFeatures) featuresAvailable = true;
    }
    return diags;
}

/// Execute stages strictly in order, fail-fast. Each outcome is logged as
/// `[index] stageName stageType rows_in->rows_out elapsed_ms artifacts...`.
inline std::vector<StageOutcome> runPipeline(const PipelineSpec& spec, ExecutionContext& ctx) {
    const StageRegistry& registry = stageRegistry();
    std::vector<StageOutcome> outcomes;

    for (const auto& w : spec.parseWarnings) ctx.log.warn(w);

    for (size_t i = 0; i < spec.stages.size(); ++i) {
        const StageSpec& s = spec.stages[i];
        auto it = registry.find(s.stageType);
        if (it == registry.end())
            throw Error(ErrorCode::UnknownStageType,
                        "stage " + std::to_string(i) + ": unknown stage type '" + s.stageType + "'");
        const StageDef& def = it->second;

        StageOutcome outcome;
        outcome.stageIndex = i;
        outcome.stageName = effectiveStageName(s, i);
        outcome.stageType = s.stageType;
        outcome.rowsBefore = ctx.current ? ctx.current->nrows() : 0;

        StageRun run{ctx, s, i, outcome.stageName, ParamReader(s.stageParam), {}};
        const auto start = std::chrono::steady_clock::now();
        try {
            def.run(run);
        } catch (const Error& e) {
            throw Error(ErrorCode::StageError, "stage " + std::to_string(i) + " (" +
                                                   outcome.stageName + "): " + e.what());
        } catch (const std::exception& e) {
            throw Error(ErrorCode::StageError, "stage " + std::to_string(i) + " (" +
                                                   outcome.stageName + "): " + e.what());
        }
        const auto end = std::chrono::steady_clock::now();

        for (const auto& k : run.param.unusedKeys())
            run.warn("ignoring unknown stageParam key \"" + k + "\"");

        outcome.rowsAfter = ctx.current ? ctx.current->nrows() : 0;
        outcome.elapsedMs = std::chrono::duration<double, std::milli>(end - start).count();
        outcome.artifacts = run.artifacts;

        std::ostringstream line;
        line << "[" << i << "] " << outcome.stageName << " " << outcome.stageType << " "
             << outcome.rowsBefore << "→" << outcome.rowsAfter << " "
             << static_cast<long long>(outcome.elapsedMs + 0.5) << "ms";
        for (const auto& a : outcome.artifacts) line << " " << a;
        ctx.log.info(line.str());
        outcomes.push_back(std::move(outcome));
    }
    return outcomes;
}

} // namespace tabpipe
