#pragma once

#include "tabpipe/calendar.hpp"
#include "tabpipe/levenshtein.hpp"
#include "tabpipe/stage.hpp"
#include "tabpipe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

namespace tabpipe::stages {

inline const Column& requireNumeric(const Frame& f, const std::string& name) {
    const Column& c = f.column(name);
    if (!isNumeric(c.dtype))
        throw Error(ErrorCode::NonNumericColumn,
                    "column '" + name + "' is " + dtypeName(c.dtype) + ", expected numeric");
    return c;
}

// ---------------------------------------------------------------------------
// combineColumns
// ---------------------------------------------------------------------------

inline void stageCombineColumns(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const std::string newName = run.param.requireString("newColumn");
    const std::string separator = run.param.optString("separator", "");
    const bool dropOriginals = run.param.optBool("dropOriginals", false);

    std::vector<std::string> names;
    if (run.param.has("columns")) {
        names = run.param.requireStringList("columns");
        for (const auto& n : names) f.columnIndex(n);
    } else if (run.param.has("range")) {
        const Json& range = run.param.requireRaw("range");
        if (!range.is_object() || !range.contains("from") || !range.contains("to"))
            throw Error(ErrorCode::BadParam, "range must be an object with from/to");
        // contiguous span of the current column order, inclusive
        const size_t from = f.columnIndex(range["from"].get<std::string>());
        const size_t to = f.columnIndex(range["to"].get<std::string>());
        if (from > to) throw Error(ErrorCode::BadParam, "range from comes after to");
        for (size_t i = from; i <= to; ++i) names.push_back(f.column(i).name);
    } else {
        throw Error(ErrorCode::BadParam, "either columns or range is required");
    }
    if (names.empty()) throw Error(ErrorCode::BadParam, "no columns selected");

    Column out{newName, DType::Str, {}};
    out.values.reserve(f.nrows());
    for (size_t r = 0; r < f.nrows(); ++r) {
        std::string s;
        for (size_t i = 0; i < names.size(); ++i) {
            if (i) s += separator;
            s += renderValue(f.column(names[i]).values[r]); // Null renders empty
        }
        out.values.emplace_back(std::move(s));
    }
    Frame result = f.withColumn(std::move(out));
    if (dropOriginals) result = result.dropColumns(names);
    run.ctx.current = std::move(result);
}

// ---------------------------------------------------------------------------
// addMathExpression
// ---------------------------------------------------------------------------

namespace math_detail {

struct Operand {
    const Column* column = nullptr; // null => literal
    Value literal;

    Value at(size_t row) const { return column ? column->values[row] : literal; }
};

// Int64 stays Int64 until it overflows or meets a Float; division always
// yields Float64. Division by zero produces Null and bumps the counter.
inline Value applyNumeric(char op, const Value& a, const Value& b, size_t& divByZero) {
    if (isNull(a) || isNull(b)) return std::monostate{};
    if (op == '/') {
        const double denom = asDouble(b);
        if (denom == 0.0) {
            ++divByZero;
            return std::monostate{};
        }
        return asDouble(a) / denom;
    }
    if (std::holds_alternative<int64_t>(a) && std::holds_alternative<int64_t>(b)) {
        const int64_t x = std::get<int64_t>(a), y = std::get<int64_t>(b);
        int64_t r = 0;
        bool overflow = false;
        switch (op) {
            case '+': overflow = __builtin_add_overflow(x, y, &r); break;
            case '-': overflow = __builtin_sub_overflow(x, y, &r); break;
            case '*': overflow = __builtin_mul_overflow(x, y, &r); break;
        }
        if (!overflow) return r;
    }
    const double x = asDouble(a), y = asDouble(b);
    switch (op) {
        case '+': return x + y;
        case '-': return x - y;
        case '*': return x * y;
    }
    throw Error(ErrorCode::BadParam, "unknown operator");
}

inline double roundTo(double v, int64_t decimals) {
    const double p = std::pow(10.0, static_cast<double>(decimals));
    return std::round(v * p) / p;
}

/// Append `values` as a column, as Int64 when every non-null cell stayed
/// integral, else as Float64 with integral cells widened.
inline Column finishNumericColumn(std::string name, std::vector<Value> values,
                                  std::optional<int64_t> decimals) {
    bool anyFloat = false;
    for (auto& v : values) {
        if (std::holds_alternative<double>(v)) {
            if (decimals) v = roundTo(std::get<double>(v), *decimals);
            anyFloat = true;
        }
    }
    Column col{std::move(name), anyFloat ? DType::Float64 : DType::Int64, std::move(values)};
    if (anyFloat)
        for (auto& v : col.values)
            if (std::holds_alternative<int64_t>(v)) v = static_cast<double>(std::get<int64_t>(v));
    return col;
}

} // namespace math_detail

/// Tokens alternate operand, operator, operand, ... and are evaluated strictly
/// left to right with NO operator precedence: ["col1","+","col2","*","col3"]
/// is (col1 + col2) * col3. A string operand naming an existing column reads
/// that column; otherwise it must parse as a number.
inline void stageAddMathExpression(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const std::string newName = run.param.requireString("newColumn");
    const Json& tokens = run.param.requireRaw("tokens");
    std::optional<int64_t> decimals;
    if (run.param.has("decimals")) decimals = run.param.requireInt("decimals");

    if (!tokens.is_array() || tokens.empty() || tokens.size() % 2 == 0)
        throw Error(ErrorCode::MalformedTokenList,
                    "tokens must be operand, (operator, operand)*");

    std::vector<math_detail::Operand> operands;
    std::vector<char> ops;
    for (size_t i = 0; i < tokens.size(); ++i) {
        const Json& t = tokens[i];
        if (i % 2 == 1) {
            const std::string op = t.is_string() ? t.get<std::string>() : "";
            if (op != "+" && op != "-" && op != "*" && op != "/")
                throw Error(ErrorCode::MalformedTokenList,
                            "token " + std::to_string(i) + " must be one of + - * /");
            ops.push_back(op[0]);
            continue;
        }
        math_detail::Operand operand;
        if (t.is_number_integer()) {
            operand.literal = t.get<int64_t>();
        } else if (t.is_number_float()) {
            operand.literal = t.get<double>();
        } else if (t.is_string()) {
            const std::string s = t.get<std::string>();
            if (f.hasColumn(s)) {
                operand.column = &requireNumeric(f, s);
            } else if (auto iv = detail::parseIntStrict(s)) {
                operand.literal = *iv;
            } else if (auto fv = detail::parseFloatStrict(s)) {
                operand.literal = *fv;
            } else {
                throw Error(ErrorCode::UnknownColumn,
                            "token '" + s + "' is neither a column nor a number");
            }
        } else {
            throw Error(ErrorCode::MalformedTokenList,
                        "token " + std::to_string(i) + " must be a string or number");
        }
        operands.push_back(operand);
    }

    size_t divByZero = 0;
    std::vector<Value> values;
    values.reserve(f.nrows());
    for (size_t r = 0; r < f.nrows(); ++r) {
        Value acc = operands[0].at(r);
        for (size_t i = 0; i < ops.size(); ++i)
            acc = math_detail::applyNumeric(ops[i], acc, operands[i + 1].at(r), divByZero);
        values.push_back(std::move(acc));
    }
    if (divByZero) run.warn(std::to_string(divByZero) + " divisions by zero produced Null");
    run.ctx.current =
        f.withColumn(math_detail::finishNumericColumn(newName, std::move(values), decimals));
}

// ---------------------------------------------------------------------------
// addColumnMath
// ---------------------------------------------------------------------------

inline double (*unaryFunction(const std::string& name))(double) {
    if (name == "sin") return static_cast<double (*)(double)>(std::sin);
    if (name == "cos") return static_cast<double (*)(double)>(std::cos);
    if (name == "tan") return static_cast<double (*)(double)>(std::tan);
    if (name == "log") return static_cast<double (*)(double)>(std::log);
    if (name == "log10") return static_cast<double (*)(double)>(std::log10);
    if (name == "exp") return static_cast<double (*)(double)>(std::exp);
    if (name == "sqrt") return static_cast<double (*)(double)>(std::sqrt);
    if (name == "abs") return static_cast<double (*)(double)>(std::fabs);
    if (name == "floor") return static_cast<double (*)(double)>(std::floor);
    if (name == "ceil") return static_cast<double (*)(double)>(std::ceil);
    if (name == "round") return static_cast<double (*)(double)>(std::round);
    throw Error(ErrorCode::UnknownFunction, "unknown math function '" + name + "'");
}

/// fn(c) row-wise for each listed numeric column; domain violations (log of
/// non-positive, sqrt of negative) become Null with a warning.
inline void stageAddColumnMath(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const auto columns = run.param.requireStringList("columns");
    const std::string fnName = run.param.requireString("function");
    const std::string prefix = run.param.optString("prefix", fnName + "_");
    std::optional<int64_t> decimals;
    if (run.param.has("decimals")) decimals = run.param.requireInt("decimals");

    auto fn = unaryFunction(fnName);
    for (const auto& name : columns) requireNumeric(f, name);

    Frame result = f;
    size_t domainNulls = 0;
    for (const auto& name : columns) {
        const Column& src = f.column(name);
        Column out{prefix + name, DType::Float64, {}};
        out.values.reserve(f.nrows());
        for (const auto& v : src.values) {
            if (isNull(v)) {
                out.values.emplace_back(std::monostate{});
                continue;
            }
            const double x = asDouble(v);
            double y = fn(x);
            // out-of-domain inputs (log of <= 0, sqrt of < 0) and overflow
            if (!std::isfinite(y)) {
                ++domainNulls;
                out.values.emplace_back(std::monostate{});
                continue;
            }
            if (decimals) y = math_detail::roundTo(y, *decimals);
            out.values.emplace_back(y);
        }
        result = result.withColumn(std::move(out));
    }
    if (domainNulls)
        run.warn(std::to_string(domainNulls) + " out-of-domain inputs produced Null");
    run.ctx.current = std::move(result);
}

// ---------------------------------------------------------------------------
// applyColumnMath
// ---------------------------------------------------------------------------

inline const char* operatorTag(char op) {
    switch (op) {
        case '+': return "add";
        case '-': return "sub";
        case '*': return "mul";
        case '/': return "div";
    }
    return "?";
}

/// c op otherColumn for every selected numeric column c. Selection is one of
/// include (exact list), exclude (all numeric minus list) or startswith.
inline void stageApplyColumnMath(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const Json& select = run.param.requireRaw("select");
    const std::string opStr = run.param.requireString("operator");
    const std::string otherName = run.param.requireString("otherColumn");
    if (opStr.size() != 1 || std::string("+-*/").find(opStr) == std::string::npos)
        throw Error(ErrorCode::BadParam, "operator must be one of + - * /");
    const char op = opStr[0];
    const std::string suffix = run.param.optString("suffix", "_" + std::string(operatorTag(op)));

    if (!select.is_object() ||
        select.contains("include") + select.contains("exclude") + select.contains("startswith") !=
            1)
        throw Error(ErrorCode::BadParam,
                    "select must contain exactly one of include/exclude/startswith");

    std::vector<std::string> selected;
    if (select.contains("include")) {
        for (const auto& v : select["include"]) {
            const std::string name = v.get<std::string>();
            requireNumeric(f, name);
            selected.push_back(name);
        }
    } else if (select.contains("exclude")) {
        std::vector<std::string> excluded;
        for (const auto& v : select["exclude"]) excluded.push_back(v.get<std::string>());
        for (const auto& c : f.columns()) {
            if (!isNumeric(c.dtype)) continue;
            if (std::find(excluded.begin(), excluded.end(), c.name) == excluded.end())
                selected.push_back(c.name);
        }
    } else {
        const std::string prefix = select["startswith"].get<std::string>();
        for (const auto& c : f.columns())
            if (isNumeric(c.dtype) && c.name.rfind(prefix, 0) == 0) selected.push_back(c.name);
    }
    if (selected.empty())
        throw Error(ErrorCode::EmptySelection, "selection matched no numeric columns");

    const Column& other = requireNumeric(f, otherName);
    size_t divByZero = 0;
    Frame result = f;
    for (const auto& name : selected) {
        const Column& src = f.column(name);
        std::vector<Value> values;
        values.reserve(f.nrows());
        for (size_t r = 0; r < f.nrows(); ++r)
            values.push_back(math_detail::applyNumeric(op, src.values[r], other.values[r], divByZero));
        result = result.withColumn(
            math_detail::finishNumericColumn(name + suffix, std::move(values), std::nullopt));
    }
    if (divByZero) run.warn(std::to_string(divByZero) + " divisions by zero produced Null");
    run.ctx.current = std::move(result);
}

// ---------------------------------------------------------------------------
// replaceStrings
// ---------------------------------------------------------------------------

/// Regex replacements applied in document order, each globally within the
/// cell; later rules see earlier rules' output.
inline void stageReplaceStrings(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const auto columns = run.param.requireStringList("columns");
    const Json& repl = run.param.requireRaw("replacements");
    if (!repl.is_object())
        throw Error(ErrorCode::BadParam, "replacements must be an object of pattern -> text");

    std::vector<std::pair<std::regex, std::string>> rules;
    for (const auto& [pattern, replacement] : repl.items()) {
        if (!replacement.is_string())
            throw Error(ErrorCode::BadParam, "replacement for '" + pattern + "' must be a string");
        try {
            rules.emplace_back(std::regex(pattern), replacement.get<std::string>());
        } catch (const std::regex_error&) {
            throw Error(ErrorCode::BadRegex, "invalid pattern '" + pattern + "'");
        }
    }

    Frame result = f;
    for (const auto& name : columns) {
        const Column& src = f.column(name);
        if (src.dtype != DType::Str)
            throw Error(ErrorCode::NotAStringColumn,
                        "column '" + name + "' is " + dtypeName(src.dtype));
        Column out{name, DType::Str, {}};
        out.values.reserve(f.nrows());
        for (const auto& v : src.values) {
            if (isNull(v)) {
                out.values.emplace_back(std::monostate{});
                continue;
            }
            std::string s = std::get<std::string>(v);
            for (const auto& [re, text] : rules) s = std::regex_replace(s, re, text);
            out.values.emplace_back(std::move(s));
        }
        result = result.replacingColumn(name, std::move(out));
    }
    run.ctx.current = std::move(result);
}

// ---------------------------------------------------------------------------
// enrichDateTime
// ---------------------------------------------------------------------------

/// dayofweek follows the 1=Sunday..7=Saturday convention; weekofyear is the
/// ISO-8601 week number.
inline int64_t dateTimeField(const DateTime& dt, const std::string& fn) {
    using namespace calendar;
    if (fn == "dayofweek") return weekdaySundayBased(daysFromCivil(dt.year, dt.month, dt.day)) + 1;
    if (fn == "dayofmonth") return dt.day;
    if (fn == "dayofyear") return dayOfYear(dt.year, dt.month, dt.day);
    if (fn == "hour") return dt.hour;
    if (fn == "minute") return dt.minute;
    if (fn == "second") return dt.second;
    if (fn == "month") return dt.month;
    if (fn == "year") return dt.year;
    if (fn == "weekofyear") return isoWeekOfYear(dt.year, dt.month, dt.day);
    throw Error(ErrorCode::UnknownFunction, "unknown datetime function '" + fn + "'");
}

inline void stageEnrichDateTime(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const auto columns = run.param.requireStringList("columns");
    const std::string fn = run.param.requireString("function");
    const std::string suffix = run.param.optString("suffix", "_" + fn);
    dateTimeField(DateTime{}, fn); // validates the function name

    Frame result = f;
    for (const auto& name : columns) {
        const Column& src = f.column(name);
        if (src.dtype != DType::DateTime)
            throw Error(ErrorCode::NotADateTimeColumn,
                        "column '" + name + "' is " + dtypeName(src.dtype));
        Column out{name + suffix, DType::Int64, {}};
        out.values.reserve(f.nrows());
        for (const auto& v : src.values) {
            if (isNull(v))
                out.values.emplace_back(std::monostate{});
            else
                out.values.emplace_back(dateTimeField(std::get<DateTime>(v), fn));
        }
        result = result.withColumn(std::move(out));
    }
    run.ctx.current = std::move(result);
}

// ---------------------------------------------------------------------------
// addLevenshtein
// ---------------------------------------------------------------------------

/// Distances for all pair combinations of the valid (string-typed) columns in
/// the list; non-string entries are skipped with a warning.
inline void stageAddLevenshtein(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const auto columns = run.param.requireStringList("columns");

    std::vector<std::string> valid;
    for (const auto& name : columns) {
        const Column& c = f.column(name);
        if (c.dtype == DType::Str)
            valid.push_back(name);
        else
            run.warn("skipping non-string column '" + name + "'");
    }
    if (valid.size() < 2) {
        run.warn("fewer than 2 string columns; nothing to compare");
        return;
    }
    // pair columns in current frame order
    std::sort(valid.begin(), valid.end(), [&](const std::string& a, const std::string& b) {
        return f.columnIndex(a) < f.columnIndex(b);
    });

    Frame result = f;
    for (size_t i = 0; i < valid.size(); ++i) {
        for (size_t j = i + 1; j < valid.size(); ++j) {
            const Column& a = f.column(valid[i]);
            const Column& b = f.column(valid[j]);
            Column out{"lev_" + valid[i] + "_" + valid[j], DType::Int64, {}};
            out.values.reserve(f.nrows());
            for (size_t r = 0; r < f.nrows(); ++r) {
                if (isNull(a.values[r]) || isNull(b.values[r]))
                    out.values.emplace_back(std::monostate{});
                else
                    out.values.emplace_back(levenshtein(std::get<std::string>(a.values[r]),
                                                        std::get<std::string>(b.values[r])));
            }
            result = result.withColumn(std::move(out));
        }
    }
    run.ctx.current = std::move(result);
}

// ---------------------------------------------------------------------------
// scaling stages
// ---------------------------------------------------------------------------

namespace scaling_detail {

struct NumericView {
    std::vector<double> nonNull;
};

inline NumericView numericView(const Frame& f, const std::string& name) {
    const Column& c = requireNumeric(f, name);
    NumericView v;
    for (const auto& val : c.values)
        if (!isNull(val)) v.nonNull.push_back(asDouble(val));
    return v;
}

/// z = (x - mean) / sample stddev; Null passes through.
inline Column zscoreColumn(const Frame& f, const std::string& src, const std::string& dst) {
    auto view = numericView(f, src);
    if (view.nonNull.size() < 2)
        throw Error(ErrorCode::InsufficientData,
                    "column '" + src + "' needs >= 2 non-null values");
    const double mu = stats::mean(view.nonNull);
    const double sigma = stats::sampleStddev(view.nonNull);
    if (sigma == 0.0)
        throw Error(ErrorCode::ConstantColumn, "column '" + src + "' is constant (stddev 0)");
    const Column& c = f.column(src);
    Column out{dst, DType::Float64, {}};
    out.values.reserve(f.nrows());
    for (const auto& v : c.values) {
        if (isNull(v))
            out.values.emplace_back(std::monostate{});
        else
            out.values.emplace_back((asDouble(v) - mu) / sigma);
    }
    return out;
}

/// (x - min) / (max - min); Null passes through.
inline Column minMaxColumn(const Frame& f, const std::string& src, const std::string& dst) {
    auto view = numericView(f, src);
    if (view.nonNull.empty())
        throw Error(ErrorCode::InsufficientData, "column '" + src + "' has no non-null values");
    const double lo = *std::min_element(view.nonNull.begin(), view.nonNull.end());
    const double hi = *std::max_element(view.nonNull.begin(), view.nonNull.end());
    if (lo == hi)
        throw Error(ErrorCode::ConstantColumn, "column '" + src + "' is constant (min == max)");
    const Column& c = f.column(src);
    Column out{dst, DType::Float64, {}};
    out.values.reserve(f.nrows());
    for (const auto& v : c.values) {
        if (isNull(v))
            out.values.emplace_back(std::monostate{});
        else
            out.values.emplace_back((asDouble(v) - lo) / (hi - lo));
    }
    return out;
}

using ColumnMaker = Column (*)(const Frame&, const std::string&, const std::string&);

inline void multiColumnScaling(StageRun& run, ColumnMaker make, const std::string& defaultSuffix) {
    const Frame& f = run.ctx.currentFrame();
    const auto columns = run.param.requireStringList("columns");
    const std::string suffix = run.param.optString("suffix", defaultSuffix);
    Frame result = f;
    for (const auto& name : columns) result = result.withColumn(make(f, name, name + suffix));
    run.ctx.current = std::move(result);
}

// single-column variant: writing to the source name replaces it in place
inline void singleColumnScaling(StageRun& run, ColumnMaker make) {
    const Frame& f = run.ctx.currentFrame();
    const std::string column = run.param.requireString("column");
    const std::string newColumn = run.param.optString("newColumn", column);
    Column out = make(f, column, newColumn);
    if (newColumn == column)
        run.ctx.current = f.replacingColumn(column, std::move(out));
    else
        run.ctx.current = f.withColumn(std::move(out));
}

} // namespace scaling_detail

inline void stageAddZscores(StageRun& run) {
    scaling_detail::multiColumnScaling(run, scaling_detail::zscoreColumn, "_z");
}
inline void stageAddZscore(StageRun& run) {
    scaling_detail::singleColumnScaling(run, scaling_detail::zscoreColumn);
}
inline void stageAddMinMaxScalings(StageRun& run) {
    scaling_detail::multiColumnScaling(run, scaling_detail::minMaxColumn, "_mm");
}
inline void stageAddMinMaxScaling(StageRun& run) {
    scaling_detail::singleColumnScaling(run, scaling_detail::minMaxColumn);
}

// ---------------------------------------------------------------------------
// encodeRanges
// ---------------------------------------------------------------------------

struct RangeEntry {
    std::string key;
    std::optional<double> upperBound; // absent only for Maximum
    Value label;
};

/// Entries come from an ordered JSON object: "Minimum" first (with a bound),
/// then intermediates with strictly increasing bounds, "Maximum" last (no
/// bound). Labels must share one scalar type.
inline std::vector<RangeEntry> parseRangeEntries(const Json& ranges) {
    if (!ranges.is_object() || ranges.size() < 2)
        throw Error(ErrorCode::BadRangeSpec, "ranges must be an object with Minimum and Maximum");
    std::vector<RangeEntry> entries;
    for (const auto& [key, body] : ranges.items()) {
        RangeEntry e;
        e.key = key;
        if (!body.is_object() || !body.contains("label"))
            throw Error(ErrorCode::BadRangeSpec, "range '" + key + "' must be {bound?, label}");
        e.label = jsonScalarToValue(body["label"]);
        if (isNull(e.label))
            throw Error(ErrorCode::BadRangeSpec, "range '" + key + "' label must not be null");
        if (body.contains("bound")) {
            if (!body["bound"].is_number())
                throw Error(ErrorCode::BadRangeSpec, "range '" + key + "' bound must be a number");
            e.upperBound = body["bound"].get<double>();
        }
        entries.push_back(std::move(e));
    }

    if (entries.front().key != "Minimum" || !entries.front().upperBound)
        throw Error(ErrorCode::BadRangeSpec, "first range key must be Minimum with a bound");
    if (entries.back().key != "Maximum" || entries.back().upperBound)
        throw Error(ErrorCode::BadRangeSpec, "last range key must be Maximum without a bound");
    for (size_t i = 1; i + 1 < entries.size(); ++i) {
        if (entries[i].key == "Minimum" || entries[i].key == "Maximum")
            throw Error(ErrorCode::BadRangeSpec, "Minimum/Maximum may appear only once");
        if (!entries[i].upperBound)
            throw Error(ErrorCode::BadRangeSpec, "range '" + entries[i].key + "' needs a bound");
        if (*entries[i].upperBound <= *entries[i - 1].upperBound)
            throw Error(ErrorCode::BadRangeSpec, "bounds must be strictly increasing");
    }

    // one label dtype for the whole output column; Int64 widens to Float64
    bool anyFloat = false, anyInt = false;
    for (const auto& e : entries) {
        const DType t = *valueDType(e.label);
        if (t == DType::Float64) anyFloat = true;
        else if (t == DType::Int64) anyInt = true;
    }
    for (const auto& e : entries) {
        DType t = *valueDType(e.label);
        if ((anyFloat || anyInt) && !isNumeric(t))
            throw Error(ErrorCode::BadRangeSpec, "labels must share one scalar type");
        if (!anyFloat && !anyInt && *valueDType(entries.front().label) != t)
            throw Error(ErrorCode::BadRangeSpec, "labels must share one scalar type");
    }
    if (anyFloat)
        for (auto& e : entries)
            if (std::holds_alternative<int64_t>(e.label))
                e.label = static_cast<double>(std::get<int64_t>(e.label));
    return entries;
}

/// x <= bound(Minimum) -> Minimum's label; bound(prev) < x <= bound(this) ->
/// this label; anything above the last bound -> Maximum's label.
inline Value encodeRangeValue(const std::vector<RangeEntry>& entries, double x) {
    for (size_t i = 0; i + 1 < entries.size(); ++i)
        if (x <= *entries[i].upperBound) return entries[i].label;
    return entries.back().label;
}

inline void stageEncodeRanges(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const std::string column = run.param.requireString("column");
    const std::string newColumn = run.param.requireString("newColumn");
    const auto entries = parseRangeEntries(run.param.requireRaw("ranges"));

    const Column& src = requireNumeric(f, column);
    Column out{newColumn, *valueDType(entries.front().label), {}};
    out.values.reserve(f.nrows());
    for (const auto& v : src.values) {
        if (isNull(v))
            out.values.emplace_back(std::monostate{});
        else
            out.values.push_back(encodeRangeValue(entries, asDouble(v)));
    }
    run.ctx.current = f.withColumn(std::move(out));
}

// ---------------------------------------------------------------------------

inline void registerFeatureStages(StageRegistry& reg) {
    reg["combineColumns"] = StageDef{
        .type = "combineColumns",
        .params = {{"columns", ParamType::StringList, false},
                   {"range", ParamType::Object, false},
                   {"newColumn", ParamType::String, true},
                   {"separator", ParamType::String, false},
                   {"dropOriginals", ParamType::Bool, false}},
        .run = stageCombineColumns,
        .validateExtra =
            [](const Json& p, std::vector<std::string>& diags) {
                if (p.contains("columns") == p.contains("range"))
                    diags.push_back("exactly one of columns/range must be given");
            }};
    reg["addMathExpression"] = StageDef{
        .type = "addMathExpression",
        .params = {{"tokens", ParamType::Array, true},
                   {"newColumn", ParamType::String, true},
                   {"decimals", ParamType::Int, false}},
        .run = stageAddMathExpression};
    reg["addColumnMath"] = StageDef{
        .type = "addColumnMath",
        .params = {{"columns", ParamType::StringList, true},
                   {"function", ParamType::String, true},
                   {"prefix", ParamType::String, false},
                   {"decimals", ParamType::Int, false}},
        .run = stageAddColumnMath};
    reg["applyColumnMath"] = StageDef{
        .type = "applyColumnMath",
        .params = {{"select", ParamType::Object, true},
                   {"operator", ParamType::String, true},
                   {"otherColumn", ParamType::String, true},
                   {"suffix", ParamType::String, false}},
        .run = stageApplyColumnMath};
    reg["replaceStrings"] = StageDef{
        .type = "replaceStrings",
        .params = {{"columns", ParamType::StringList, true},
                   {"replacements", ParamType::Object, true}},
        .run = stageReplaceStrings};
    reg["enrichDateTime"] = StageDef{
        .type = "enrichDateTime",
        .params = {{"columns", ParamType::StringList, true},
                   {"function", ParamType::String, true},
                   {"suffix", ParamType::String, false}},
        .run = stageEnrichDateTime};
    reg["addLevenshtein"] = StageDef{
        .type = "addLevenshtein",
        .params = {{"columns", ParamType::StringList, true}},
        .run = stageAddLevenshtein};
    reg["addZscores"] = StageDef{
        .type = "addZscores",
        .params = {{"columns", ParamType::StringList, true}, {"suffix", ParamType::String, false}},
        .run = stageAddZscores};
    reg["addZscore"] = StageDef{
        .type = "addZscore",
        .params = {{"column", ParamType::String, true}, {"newColumn", ParamType::String, false}},
        .run = stageAddZscore};
    reg["addMinMaxScalings"] = StageDef{
        .type = "addMinMaxScalings",
        .params = {{"columns", ParamType::StringList, true}, {"suffix", ParamType::String, false}},
        .run = stageAddMinMaxScalings};
    reg["addMinMaxScaling"] = StageDef{
        .type = "addMinMaxScaling",
        .params = {{"column", ParamType::String, true}, {"newColumn", ParamType::String, false}},
        .run = stageAddMinMaxScaling};
    reg["encodeRanges"] = StageDef{
        .type = "encodeRanges",
        .params = {{"column", ParamType::String, true},
                   {"newColumn", ParamType::String, true},
                   {"ranges", ParamType::Object, true}},
        .run = stageEncodeRanges};
}

} // namespace tabpipe::stages
