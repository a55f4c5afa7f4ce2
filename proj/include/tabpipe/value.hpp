#pragma once

#include "tabpipe/calendar.hpp"
#include "tabpipe/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tabpipe {

enum class DType { Int64, Float64, Bool, Str, DateTime };

inline const char* dtypeName(DType t) {
    switch (t) {
        case DType::Int64: return "Int64";
        case DType::Float64: return "Float64";
        case DType::Bool: return "Bool";
        case DType::Str: return "Str";
        case DType::DateTime: return "DateTime";
    }
    return "?";
}

inline bool isNumeric(DType t) { return t == DType::Int64 || t == DType::Float64; }

/// Calendar date + time of day, second resolution, no timezone.
struct DateTime {
    int year = 1970;
    int month = 1;
    int day = 1;
    int hour = 0;
    int minute = 0;
    int second = 0;

    // Seconds since 1970-01-01 00:00:00, used for ordering and arithmetic.
    int64_t toSerial() const {
        return calendar::daysFromCivil(year, month, day) * 86400 + hour * 3600 + minute * 60 + second;
    }

    friend bool operator==(const DateTime& a, const DateTime& b) {
        return a.toSerial() == b.toSerial();
    }
    friend auto operator<=>(const DateTime& a, const DateTime& b) {
        return a.toSerial() <=> b.toSerial();
    }
};

// Null | Int | Float | Bool | Str | DateTime
using Value = std::variant<std::monostate, int64_t, double, bool, std::string, DateTime>;

inline bool isNull(const Value& v) { return std::holds_alternative<std::monostate>(v); }

inline std::optional<DType> valueDType(const Value& v) {
    switch (v.index()) {
        case 0: return std::nullopt;
        case 1: return DType::Int64;
        case 2: return DType::Float64;
        case 3: return DType::Bool;
        case 4: return DType::Str;
        case 5: return DType::DateTime;
    }
    return std::nullopt;
}

inline std::string formatDouble(double d) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), d);
    (void)ec;
    return std::string(buf, ptr);
}

inline std::string formatDateTime(const DateTime& dt) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d %02d:%02d:%02d",
                  dt.year, dt.month, dt.day, dt.hour, dt.minute, dt.second);
    return buf;
}

/// Text rendering shared by CSV output, combineColumns, show and plots.
/// Null renders as the empty string.
inline std::string renderValue(const Value& v) {
    switch (v.index()) {
        case 0: return "";
        case 1: return std::to_string(std::get<int64_t>(v));
        case 2: return formatDouble(std::get<double>(v));
        case 3: return std::get<bool>(v) ? "true" : "false";
        case 4: return std::get<std::string>(v);
        case 5: return formatDateTime(std::get<DateTime>(v));
    }
    return "";
}

namespace detail {

inline bool allDigits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

inline std::optional<int64_t> parseIntStrict(std::string_view s) {
    std::string_view body = s;
    if (!body.empty() && (body.front() == '+' || body.front() == '-')) body.remove_prefix(1);
    if (!allDigits(body)) return std::nullopt;
    int64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return out;
}

// Plain decimal / scientific notation only; rejects inf, nan and hex floats.
inline std::optional<double> parseFloatStrict(std::string_view s) {
    size_t i = 0;
    const size_t n = s.size();
    if (i < n && (s[i] == '+' || s[i] == '-')) ++i;
    size_t intDigits = 0;
    while (i < n && s[i] >= '0' && s[i] <= '9') { ++i; ++intDigits; }
    size_t fracDigits = 0;
    if (i < n && s[i] == '.') {
        ++i;
        while (i < n && s[i] >= '0' && s[i] <= '9') { ++i; ++fracDigits; }
    }
    if (intDigits + fracDigits == 0) return std::nullopt;
    if (i < n && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < n && (s[i] == '+' || s[i] == '-')) ++i;
        size_t expDigits = 0;
        while (i < n && s[i] >= '0' && s[i] <= '9') { ++i; ++expDigits; }
        if (expDigits == 0) return std::nullopt;
    }
    if (i != n) return std::nullopt;
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return out;
}

inline bool equalsIgnoreCase(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        char x = a[i], y = b[i];
        if (x >= 'A' && x <= 'Z') x = static_cast<char>(x - 'A' + 'a');
        if (y >= 'A' && y <= 'Z') y = static_cast<char>(y - 'A' + 'a');
        if (x != y) return false;
    }
    return true;
}

} // namespace detail

/// "YYYY-MM-DD" or "YYYY-MM-DD HH:MM:SS"; field ranges are validated against
/// the calendar (leap years included).
inline std::optional<DateTime> parseDateTime(std::string_view s) {
    auto digits = [&](size_t pos, size_t len, int& out) {
        if (pos + len > s.size()) return false;
        int v = 0;
        for (size_t i = pos; i < pos + len; ++i) {
            if (s[i] < '0' || s[i] > '9') return false;
            v = v * 10 + (s[i] - '0');
        }
        out = v;
        return true;
    };
    if (s.size() != 10 && s.size() != 19) return std::nullopt;
    DateTime dt;
    if (!digits(0, 4, dt.year) || s[4] != '-' || !digits(5, 2, dt.month) || s[7] != '-' ||
        !digits(8, 2, dt.day))
        return std::nullopt;
    if (s.size() == 19) {
        if (s[10] != ' ' || !digits(11, 2, dt.hour) || s[13] != ':' || !digits(14, 2, dt.minute) ||
            s[16] != ':' || !digits(17, 2, dt.second))
            return std::nullopt;
    }
    if (dt.month < 1 || dt.month > 12) return std::nullopt;
    if (dt.day < 1 || dt.day > calendar::daysInMonth(dt.year, dt.month)) return std::nullopt;
    if (dt.hour > 23 || dt.minute > 59 || dt.second > 59) return std::nullopt;
    return dt;
}

inline const std::vector<std::string>& defaultNullTokens() {
    static const std::vector<std::string> tokens = {"", "NA", "null", "NULL", "?"};
    return tokens;
}

/// Total function used by CSV schema inference. Tried in order: null token,
/// integer, real, boolean, datetime, falling back to Str.
inline Value inferCellType(const std::string& text,
                           const std::vector<std::string>& nullTokens = defaultNullTokens()) {
    for (const auto& t : nullTokens)
        if (text == t) return std::monostate{};
    if (auto i = detail::parseIntStrict(text)) return *i;
    if (auto f = detail::parseFloatStrict(text)) return *f;
    if (detail::equalsIgnoreCase(text, "true")) return true;
    if (detail::equalsIgnoreCase(text, "false")) return false;
    if (auto dt = parseDateTime(text)) return *dt;
    return text;
}

/// Numeric view of a value; Int widens to double. Errors on non-numeric.
inline double asDouble(const Value& v) {
    if (std::holds_alternative<int64_t>(v)) return static_cast<double>(std::get<int64_t>(v));
    if (std::holds_alternative<double>(v)) return std::get<double>(v);
    throw Error(ErrorCode::TypeError, "value is not numeric");
}

inline bool valuesEqual(const Value& a, const Value& b) {
    if (a.index() != b.index()) {
        // Int and Float compare numerically across the two numeric tags.
        if ((a.index() == 1 || a.index() == 2) && (b.index() == 1 || b.index() == 2))
            return asDouble(a) == asDouble(b);
        return false;
    }
    return a == b;
}

/// Ordering for sorts, group keys and MIN/MAX: numeric values compare
/// numerically across Int/Float, otherwise same-kind values compare naturally
/// and different kinds fall back to the tag index. Not for nulls.
inline bool valueLess(const Value& a, const Value& b) {
    const bool aNum = a.index() == 1 || a.index() == 2;
    const bool bNum = b.index() == 1 || b.index() == 2;
    if (aNum && bNum) return asDouble(a) < asDouble(b);
    if (a.index() != b.index()) return a.index() < b.index();
    switch (a.index()) {
        case 3: return static_cast<int>(std::get<bool>(a)) < static_cast<int>(std::get<bool>(b));
        case 4: return std::get<std::string>(a) < std::get<std::string>(b);
        case 5: return std::get<DateTime>(a).toSerial() < std::get<DateTime>(b).toSerial();
        default: return false;
    }
}

} // namespace tabpipe
