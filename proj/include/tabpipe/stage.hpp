#pragma once

#include "tabpipe/context.hpp"
#include "tabpipe/params.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace tabpipe {

struct StageSpec {
    std::string stageName; // log label only; defaults to "<stageType>#<index>"
    std::string stageType; // registry key
    Json stageParam = Json::object();
};

struct PipelineSpec {
    std::vector<StageSpec> stages;
    std::vector<std::string> parseWarnings;
};

/// Filename-safe fragment: anything outside [A-Za-z0-9_.-] becomes '_'.
inline std::string sanitizeFilenamePart(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
        out += ok ? c : '_';
    }
    return out;
}

/// Handler-side view of one executing stage.
struct StageRun {
    ExecutionContext& ctx;
    const StageSpec& spec;
    size_t index;
    std::string name; // effective stage name, "<stageType>#<index>" when unset
    ParamReader param;
    std::vector<std::string> artifacts;

    void addArtifact(const std::filesystem::path& p) { artifacts.push_back(p.string()); }
    void warn(const std::string& m) const {
        ctx.log.warn("stage " + std::to_string(index) + " (" + spec.stageType + "): " + m);
    }

    /// Report destination: outPath param if given, else outputDir/<name>.csv.
    std::filesystem::path reportPath(const std::string& defaultExt = ".csv") const {
        if (param.has("outPath")) return ctx.resolveOutput(param.requireString("outPath"));
        return ctx.outputDir / (sanitizeFilenamePart(name) + defaultExt);
    }
};

/// Declarative stageParam schema, shared by validation and the unknown-key
/// warning at run time.
enum class ParamType { String, Int, Number, Bool, StringList, Object, Array, Scalar, Any };

struct ParamField {
    std::string name;
    ParamType type = ParamType::Any;
    bool required = false;
};

struct StageDef {
    std::string type;
    bool isInput = false;
    bool savesFrame = false;        // registers a name in the frame store
    bool usesStoredFrame = false;   // reads a name from the frame store
    bool producesFeatures = false;  // addFeaturesVector
    bool requiresFeatures = false;  // simpleCluster
    std::vector<ParamField> params;
    std::function<void(StageRun&)> run;
    // optional extra structural checks beyond ParamField presence/types
    std::function<void(const Json&, std::vector<std::string>&)> validateExtra;
};

inline bool jsonMatchesParamType(const Json& v, ParamType t) {
    switch (t) {
        case ParamType::String: return v.is_string();
        case ParamType::Int: return v.is_number_integer();
        case ParamType::Number: return v.is_number();
        case ParamType::Bool: return v.is_boolean();
        case ParamType::StringList: {
            if (!v.is_array()) return false;
            for (const auto& e : v)
                if (!e.is_string()) return false;
            return true;
        }
        case ParamType::Object: return v.is_object();
        case ParamType::Array: return v.is_array();
        case ParamType::Scalar: return v.is_primitive() && !v.is_null();
        case ParamType::Any: return true;
    }
    return false;
}

inline const char* paramTypeName(ParamType t) {
    switch (t) {
        case ParamType::String: return "string";
        case ParamType::Int: return "integer";
        case ParamType::Number: return "number";
        case ParamType::Bool: return "boolean";
        case ParamType::StringList: return "array of strings";
        case ParamType::Object: return "object";
        case ParamType::Array: return "array";
        case ParamType::Scalar: return "scalar";
        case ParamType::Any: return "any";
    }
    return "?";
}

using StageRegistry = std::map<std::string, StageDef>;

} // namespace tabpipe
