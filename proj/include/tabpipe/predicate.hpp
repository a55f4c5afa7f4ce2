#pragma once

#include "tabpipe/value.hpp"

#include <string>
#include <string_view>

namespace tabpipe {

/// Kleene three-valued logic. Null operands yield Unknown; WHERE/filter keeps
/// a row only when the predicate is True.
enum class Tri { False, True, Unknown };

inline Tri triNot(Tri t) {
    if (t == Tri::Unknown) return Tri::Unknown;
    return t == Tri::True ? Tri::False : Tri::True;
}
inline Tri triAnd(Tri a, Tri b) {
    if (a == Tri::False || b == Tri::False) return Tri::False;
    if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
    return Tri::True;
}
inline Tri triOr(Tri a, Tri b) {
    if (a == Tri::True || b == Tri::True) return Tri::True;
    if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
    return Tri::False;
}
inline Tri triOf(bool b) { return b ? Tri::True : Tri::False; }

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

inline const char* compareOpName(CompareOp op) {
    switch (op) {
        case CompareOp::Eq: return "==";
        case CompareOp::Ne: return "!=";
        case CompareOp::Lt: return "<";
        case CompareOp::Le: return "<=";
        case CompareOp::Gt: return ">";
        case CompareOp::Ge: return ">=";
    }
    return "?";
}

namespace predicate_detail {

template <typename T>
inline Tri applyOrdering(CompareOp op, const T& a, const T& b) {
    switch (op) {
        case CompareOp::Eq: return triOf(a == b);
        case CompareOp::Ne: return triOf(a != b);
        case CompareOp::Lt: return triOf(a < b);
        case CompareOp::Le: return triOf(a <= b);
        case CompareOp::Gt: return triOf(a > b);
        case CompareOp::Ge: return triOf(a >= b);
    }
    return Tri::Unknown;
}

} // namespace predicate_detail

/// Compare two values. Null → Unknown; non-null values of incompatible types
/// compare False (never an error). Int and Float compare numerically; a Str
/// operand against a DateTime is parsed as a datetime first.
inline Tri compareValues(CompareOp op, const Value& a, const Value& b) {
    using predicate_detail::applyOrdering;
    if (isNull(a) || isNull(b)) return Tri::Unknown;

    const bool aNum = a.index() == 1 || a.index() == 2;
    const bool bNum = b.index() == 1 || b.index() == 2;
    if (aNum && bNum) return applyOrdering(op, asDouble(a), asDouble(b));

    if (std::holds_alternative<std::string>(a) && std::holds_alternative<std::string>(b))
        return applyOrdering(op, std::get<std::string>(a), std::get<std::string>(b));

    if (std::holds_alternative<bool>(a) && std::holds_alternative<bool>(b))
        return applyOrdering(op, std::get<bool>(a), std::get<bool>(b));

    if (std::holds_alternative<DateTime>(a) && std::holds_alternative<DateTime>(b))
        return applyOrdering(op, std::get<DateTime>(a).toSerial(), std::get<DateTime>(b).toSerial());

    // String literals against datetime columns are parsed, mirroring casts.
    if (std::holds_alternative<DateTime>(a) && std::holds_alternative<std::string>(b)) {
        if (auto dt = parseDateTime(std::get<std::string>(b)))
            return applyOrdering(op, std::get<DateTime>(a).toSerial(), dt->toSerial());
        return Tri::False;
    }
    if (std::holds_alternative<std::string>(a) && std::holds_alternative<DateTime>(b)) {
        if (auto dt = parseDateTime(std::get<std::string>(a)))
            return applyOrdering(op, dt->toSerial(), std::get<DateTime>(b).toSerial());
        return Tri::False;
    }

    return Tri::False;
}

/// SQL LIKE with wildcards % (any run, including empty) and _ (exactly one
/// character). Case-sensitive, anchored over the full string.
inline bool likeMatch(std::string_view pattern, std::string_view text) {
    size_t p = 0, t = 0;
    size_t starP = std::string_view::npos, starT = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == '_' || pattern[p] == text[t])) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '%') {
            starP = p++;
            starT = t;
        } else if (starP != std::string_view::npos) {
            p = starP + 1;
            t = ++starT;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '%') ++p;
    return p == pattern.size();
}

} // namespace tabpipe
