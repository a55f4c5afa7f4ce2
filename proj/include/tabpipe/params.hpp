#pragma once

#include "tabpipe/error.hpp"
#include "tabpipe/value.hpp"

#include <json.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tabpipe {

// Pipeline JSON is parsed with ordered_json: stageParam maps such as
// encodeRanges bounds and replaceStrings rules are order-sensitive.
using Json = nlohmann::ordered_json;

/// Typed accessor over a stageParam object. Tracks which keys were read so the
/// runner can warn about unknown ones.
class ParamReader {
public:
    explicit ParamReader(const Json& param) : param_(param) {}

    bool has(const std::string& key) const { return param_.contains(key); }

    std::string requireString(const std::string& key) const {
        touch(key);
        if (!param_.contains(key) || !param_[key].is_string())
            throw Error(ErrorCode::BadParam, "stageParam." + key + " must be a string");
        return param_[key].get<std::string>();
    }

    std::string optString(const std::string& key, const std::string& def) const {
        touch(key);
        if (!param_.contains(key)) return def;
        if (!param_[key].is_string())
            throw Error(ErrorCode::BadParam, "stageParam." + key + " must be a string");
        return param_[key].get<std::string>();
    }

    int64_t requireInt(const std::string& key) const {
        touch(key);
        if (!param_.contains(key) || !param_[key].is_number_integer())
            throw Error(ErrorCode::BadParam, "stageParam." + key + " must be an integer");
        return param_[key].get<int64_t>();
    }

    int64_t optInt(const std::string& key, int64_t def) const {
        touch(key);
        if (!param_.contains(key)) return def;
        if (!param_[key].is_number_integer())
            throw Error(ErrorCode::BadParam, "stageParam." + key + " must be an integer");
        return param_[key].get<int64_t>();
    }

    double requireNumber(const std::string& key) const {
        touch(key);
        if (!param_.contains(key) || !param_[key].is_number())
            throw Error(ErrorCode::BadParam, "stageParam." + key + " must be a number");
        return param_[key].get<double>();
    }

    bool optBool(const std::string& key, bool def) const {
        touch(key);
        if (!param_.contains(key)) return def;
        if (!param_[key].is_boolean())
            throw Error(ErrorCode::BadParam, "stageParam." + key + " must be a boolean");
        return param_[key].get<bool>();
    }

    std::vector<std::string> requireStringList(const std::string& key) const {
        touch(key);
        if (!param_.contains(key) || !param_[key].is_array())
            throw Error(ErrorCode::BadParam, "stageParam." + key + " must be an array of strings");
        std::vector<std::string> out;
        for (const auto& v : param_[key]) {
            if (!v.is_string())
                throw Error(ErrorCode::BadParam,
                            "stageParam." + key + " must contain only strings");
            out.push_back(v.get<std::string>());
        }
        return out;
    }

    std::optional<std::vector<std::string>> optStringList(const std::string& key) const {
        if (!param_.contains(key)) {
            touch(key);
            return std::nullopt;
        }
        return requireStringList(key);
    }

    const Json* optRaw(const std::string& key) const {
        touch(key);
        if (!param_.contains(key)) return nullptr;
        return &param_[key];
    }

    const Json& requireRaw(const std::string& key) const {
        touch(key);
        if (!param_.contains(key))
            throw Error(ErrorCode::BadParam, "stageParam." + key + " is required");
        return param_[key];
    }

    std::vector<std::string> unusedKeys() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : param_.items())
            if (!touched_.count(k)) out.push_back(k);
        return out;
    }

private:
    void touch(const std::string& key) const { touched_.insert(key); }

    const Json& param_;
    mutable std::set<std::string> touched_;
};

/// JSON scalar -> Value; integers stay Int64, doubles Float64.
inline Value jsonScalarToValue(const Json& j) {
    if (j.is_null()) return std::monostate{};
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer()) return j.get<int64_t>();
    if (j.is_number_float()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    throw Error(ErrorCode::BadParam, "expected a JSON scalar");
}

} // namespace tabpipe
