#pragma once

#include "tabpipe/error.hpp"
#include "tabpipe/frame.hpp"
#include "tabpipe/predicate.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tabpipe {

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

enum class AggregateFn { Count, Sum, Avg, Min, Max };

inline const char* aggregateFnName(AggregateFn f) {
    switch (f) {
        case AggregateFn::Count: return "COUNT";
        case AggregateFn::Sum: return "SUM";
        case AggregateFn::Avg: return "AVG";
        case AggregateFn::Min: return "MIN";
        case AggregateFn::Max: return "MAX";
    }
    return "?";
}

struct SqlExpr {
    enum class Kind { Column, Literal, Neg, Binary, Aggregate, Compare, And, Or, Not, Like, IsNull };

    SqlExpr() = default;
    explicit SqlExpr(Kind k) : kind(k) {}

    Kind kind = Kind::Literal;
    std::string column;      // Column
    Value literal;           // Literal
    char binOp = 0;          // Binary: + - * /
    CompareOp cmpOp = CompareOp::Eq;
    AggregateFn agg = AggregateFn::Count;
    bool countStar = false;  // COUNT(*)
    bool nullNegated = false; // IS NOT NULL
    std::string pattern;     // Like
    std::vector<std::unique_ptr<SqlExpr>> args;

    const SqlExpr& arg(size_t i) const { return *args[i]; }
};

using SqlExprPtr = std::unique_ptr<SqlExpr>;

struct SqlProjection {
    SqlExprPtr expr;
    std::optional<std::string> alias;
};

struct SqlOrderKey {
    std::string column;
    bool ascending = true;
};

struct SqlQuery {
    bool selectStar = false;
    std::vector<SqlProjection> projections;
    SqlExprPtr where;
    std::vector<std::string> groupBy;
    std::vector<SqlOrderKey> orderBy;
    std::optional<int64_t> limit;
};

/// Canonical rendering; names unaliased projection columns.
inline std::string renderSqlExpr(const SqlExpr& e) {
    switch (e.kind) {
        case SqlExpr::Kind::Column: return e.column;
        case SqlExpr::Kind::Literal:
            if (std::holds_alternative<std::string>(e.literal))
                return "'" + std::get<std::string>(e.literal) + "'";
            return renderValue(e.literal);
        case SqlExpr::Kind::Neg: return "-" + renderSqlExpr(e.arg(0));
        case SqlExpr::Kind::Binary:
            return renderSqlExpr(e.arg(0)) + " " + std::string(1, e.binOp) + " " +
                   renderSqlExpr(e.arg(1));
        case SqlExpr::Kind::Aggregate:
            if (e.countStar) return "COUNT(*)";
            return std::string(aggregateFnName(e.agg)) + "(" + renderSqlExpr(e.arg(0)) + ")";
        case SqlExpr::Kind::Compare:
            return renderSqlExpr(e.arg(0)) + " " + compareOpName(e.cmpOp) + " " +
                   renderSqlExpr(e.arg(1));
        case SqlExpr::Kind::And:
            return renderSqlExpr(e.arg(0)) + " AND " + renderSqlExpr(e.arg(1));
        case SqlExpr::Kind::Or:
            return renderSqlExpr(e.arg(0)) + " OR " + renderSqlExpr(e.arg(1));
        case SqlExpr::Kind::Not: return "NOT " + renderSqlExpr(e.arg(0));
        case SqlExpr::Kind::Like:
            return renderSqlExpr(e.arg(0)) + " LIKE '" + e.pattern + "'";
        case SqlExpr::Kind::IsNull:
            return renderSqlExpr(e.arg(0)) + (e.nullNegated ? " IS NOT NULL" : " IS NULL");
    }
    return "?";
}

inline bool sqlExprContainsAggregate(const SqlExpr& e) {
    if (e.kind == SqlExpr::Kind::Aggregate) return true;
    for (const auto& a : e.args)
        if (sqlExprContainsAggregate(*a)) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace sql_detail {

struct Token {
    enum class Kind { Ident, QuotedIdent, Number, String, Symbol, End };
    Kind kind;
    std::string text;
    size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
        const size_t start = i_;
        if (i_ >= text_.size()) return {Token::Kind::End, "", start};
        const char c = text_[i_];

        if (c == '\'') {
            ++i_;
            std::string s;
            while (i_ < text_.size()) {
                if (text_[i_] == '\'') {
                    if (i_ + 1 < text_.size() && text_[i_ + 1] == '\'') {
                        s += '\'';
                        i_ += 2;
                        continue;
                    }
                    ++i_;
                    return {Token::Kind::String, s, start};
                }
                s += text_[i_++];
            }
            throw Error(ErrorCode::SqlSyntax,
                        "unterminated string literal at position " + std::to_string(start));
        }
        if (c == '"') {
            ++i_;
            std::string s;
            while (i_ < text_.size() && text_[i_] != '"') s += text_[i_++];
            if (i_ >= text_.size())
                throw Error(ErrorCode::SqlSyntax,
                            "unterminated quoted identifier at position " + std::to_string(start));
            ++i_;
            return {Token::Kind::QuotedIdent, s, start};
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[i_ + 1])))) {
            std::string num;
            while (i_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[i_])) || text_[i_] == '.' ||
                    text_[i_] == 'e' || text_[i_] == 'E' ||
                    ((text_[i_] == '+' || text_[i_] == '-') && i_ > start &&
                     (text_[i_ - 1] == 'e' || text_[i_ - 1] == 'E'))))
                num += text_[i_++];
            return {Token::Kind::Number, num, start};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (i_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i_])) ||
                                         text_[i_] == '_'))
                id += text_[i_++];
            return {Token::Kind::Ident, id, start};
        }
        // multi-char operators first
        for (std::string_view op : {"<=", ">=", "!=", "<>", "=="}) {
            if (text_.substr(i_, 2) == op) {
                i_ += 2;
                return {Token::Kind::Symbol, std::string(op), start};
            }
        }
        if (std::string_view("+-*/(),=<>").find(c) != std::string_view::npos) {
            ++i_;
            return {Token::Kind::Symbol, std::string(1, c), start};
        }
        throw Error(ErrorCode::SqlSyntax, "unexpected character '" + std::string(1, c) +
                                              "' at position " + std::to_string(start));
    }

private:
    std::string_view text_;
    size_t i_ = 0;
};

inline bool isKeyword(const Token& t, std::string_view kw) {
    return t.kind == Token::Kind::Ident && detail::equalsIgnoreCase(t.text, kw);
}

inline std::optional<AggregateFn> aggregateFromName(std::string_view name) {
    if (detail::equalsIgnoreCase(name, "COUNT")) return AggregateFn::Count;
    if (detail::equalsIgnoreCase(name, "SUM")) return AggregateFn::Sum;
    if (detail::equalsIgnoreCase(name, "AVG")) return AggregateFn::Avg;
    if (detail::equalsIgnoreCase(name, "MIN")) return AggregateFn::Min;
    if (detail::equalsIgnoreCase(name, "MAX")) return AggregateFn::Max;
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { advance(); }

    SqlQuery parse() {
        SqlQuery q;
        expectKeyword("SELECT");
        if (tok_.kind == Token::Kind::Symbol && tok_.text == "*") {
            q.selectStar = true;
            advance();
        } else {
            q.projections.push_back(parseProjection());
            while (accept(",")) q.projections.push_back(parseProjection());
        }
        expectKeyword("FROM");
        if (tok_.kind != Token::Kind::Ident && tok_.kind != Token::Kind::QuotedIdent)
            throw err("table name");
        if (tok_.text != "MyTempView")
            throw Error(ErrorCode::WrongTable,
                        "queries must target MyTempView, got '" + tok_.text + "'");
        advance();

        if (isKeyword(tok_, "WHERE")) {
            advance();
            q.where = std::make_unique<SqlExpr>(parseOr());
            if (sqlExprContainsAggregate(*q.where))
                throw Error(ErrorCode::SqlSyntax, "aggregates are not allowed in WHERE");
        }
        if (isKeyword(tok_, "GROUP")) {
            advance();
            expectKeyword("BY");
            q.groupBy.push_back(parseIdent("GROUP BY column"));
            while (accept(",")) q.groupBy.push_back(parseIdent("GROUP BY column"));
        }
        if (isKeyword(tok_, "ORDER")) {
            advance();
            expectKeyword("BY");
            q.orderBy.push_back(parseOrderKey());
            while (accept(",")) q.orderBy.push_back(parseOrderKey());
        }
        if (isKeyword(tok_, "LIMIT")) {
            advance();
            if (tok_.kind != Token::Kind::Number) throw err("LIMIT count");
            auto n = detail::parseIntStrict(tok_.text);
            if (!n || *n < 0) throw err("non-negative integer LIMIT");
            q.limit = *n;
            advance();
        }
        if (tok_.kind != Token::Kind::End) throw err("end of query");
        return q;
    }

private:
    SqlProjection parseProjection() {
        SqlProjection p;
        p.expr = std::make_unique<SqlExpr>(parseOr());
        if (isKeyword(tok_, "AS")) {
            advance();
            p.alias = parseIdent("alias");
        }
        return p;
    }

    SqlOrderKey parseOrderKey() {
        SqlOrderKey k;
        k.column = parseIdent("ORDER BY column");
        if (isKeyword(tok_, "ASC")) {
            advance();
        } else if (isKeyword(tok_, "DESC")) {
            k.ascending = false;
            advance();
        }
        return k;
    }

    std::string parseIdent(const std::string& what) {
        if (tok_.kind != Token::Kind::Ident && tok_.kind != Token::Kind::QuotedIdent)
            throw err(what);
        std::string s = tok_.text;
        advance();
        return s;
    }

    // precedence: OR < AND < NOT < comparison < +- < */ < unary minus
    SqlExpr parseOr() {
        SqlExpr lhs = parseAnd();
        while (isKeyword(tok_, "OR")) {
            advance();
            lhs = binaryNode(SqlExpr::Kind::Or, std::move(lhs), parseAnd());
        }
        return lhs;
    }

    SqlExpr parseAnd() {
        SqlExpr lhs = parseNot();
        while (isKeyword(tok_, "AND")) {
            advance();
            lhs = binaryNode(SqlExpr::Kind::And, std::move(lhs), parseNot());
        }
        return lhs;
    }

    SqlExpr parseNot() {
        if (isKeyword(tok_, "NOT")) {
            advance();
            SqlExpr e{SqlExpr::Kind::Not};
            e.args.push_back(std::make_unique<SqlExpr>(parseNot()));
            return e;
        }
        return parseComparison();
    }

    SqlExpr parseComparison() {
        SqlExpr lhs = parseAdditive();
        if (tok_.kind == Token::Kind::Symbol) {
            std::optional<CompareOp> op;
            if (tok_.text == "=" || tok_.text == "==") op = CompareOp::Eq;
            else if (tok_.text == "!=" || tok_.text == "<>") op = CompareOp::Ne;
            else if (tok_.text == "<") op = CompareOp::Lt;
            else if (tok_.text == "<=") op = CompareOp::Le;
            else if (tok_.text == ">") op = CompareOp::Gt;
            else if (tok_.text == ">=") op = CompareOp::Ge;
            if (op) {
                advance();
                SqlExpr e{SqlExpr::Kind::Compare};
                e.cmpOp = *op;
                e.args.push_back(std::make_unique<SqlExpr>(std::move(lhs)));
                e.args.push_back(std::make_unique<SqlExpr>(parseAdditive()));
                return e;
            }
        }
        if (isKeyword(tok_, "LIKE")) {
            advance();
            if (tok_.kind != Token::Kind::String) throw err("string pattern after LIKE");
            SqlExpr e{SqlExpr::Kind::Like};
            e.pattern = tok_.text;
            advance();
            e.args.push_back(std::make_unique<SqlExpr>(std::move(lhs)));
            return e;
        }
        if (isKeyword(tok_, "IS")) {
            advance();
            SqlExpr e{SqlExpr::Kind::IsNull};
            if (isKeyword(tok_, "NOT")) {
                e.nullNegated = true;
                advance();
            }
            expectKeyword("NULL");
            e.args.push_back(std::make_unique<SqlExpr>(std::move(lhs)));
            return e;
        }
        return lhs;
    }

    SqlExpr parseAdditive() {
        SqlExpr lhs = parseMultiplicative();
        while (tok_.kind == Token::Kind::Symbol && (tok_.text == "+" || tok_.text == "-")) {
            char op = tok_.text[0];
            advance();
            lhs = arithNode(op, std::move(lhs), parseMultiplicative());
        }
        return lhs;
    }

    SqlExpr parseMultiplicative() {
        SqlExpr lhs = parseUnary();
        while (tok_.kind == Token::Kind::Symbol && (tok_.text == "*" || tok_.text == "/")) {
            char op = tok_.text[0];
            advance();
            lhs = arithNode(op, std::move(lhs), parseUnary());
        }
        return lhs;
    }

    SqlExpr parseUnary() {
        if (tok_.kind == Token::Kind::Symbol && tok_.text == "-") {
            advance();
            SqlExpr e{SqlExpr::Kind::Neg};
            e.args.push_back(std::make_unique<SqlExpr>(parseUnary()));
            return e;
        }
        return parsePrimary();
    }

    SqlExpr parsePrimary() {
        if (tok_.kind == Token::Kind::Symbol && tok_.text == "(") {
            advance();
            SqlExpr e = parseOr();
            expectSymbol(")");
            return e;
        }
        if (tok_.kind == Token::Kind::Number) {
            SqlExpr e{SqlExpr::Kind::Literal};
            if (auto i = detail::parseIntStrict(tok_.text)) e.literal = *i;
            else if (auto f = detail::parseFloatStrict(tok_.text)) e.literal = *f;
            else throw err("numeric literal");
            advance();
            return e;
        }
        if (tok_.kind == Token::Kind::String) {
            SqlExpr e{SqlExpr::Kind::Literal};
            e.literal = tok_.text;
            advance();
            return e;
        }
        if (tok_.kind == Token::Kind::QuotedIdent) {
            SqlExpr e{SqlExpr::Kind::Column};
            e.column = tok_.text;
            advance();
            return e;
        }
        if (tok_.kind == Token::Kind::Ident) {
            if (isKeyword(tok_, "TRUE") || isKeyword(tok_, "FALSE")) {
                SqlExpr e{SqlExpr::Kind::Literal};
                e.literal = isKeyword(tok_, "TRUE");
                advance();
                return e;
            }
            if (isKeyword(tok_, "NULL")) {
                SqlExpr e{SqlExpr::Kind::Literal};
                advance();
                return e;
            }
            std::string name = tok_.text;
            size_t namePos = tok_.pos;
            advance();
            if (tok_.kind == Token::Kind::Symbol && tok_.text == "(") {
                auto agg = aggregateFromName(name);
                if (!agg)
                    throw Error(ErrorCode::SqlSyntax, "unknown function '" + name +
                                                          "' at position " + std::to_string(namePos));
                advance();
                SqlExpr e{SqlExpr::Kind::Aggregate};
                e.agg = *agg;
                if (tok_.kind == Token::Kind::Symbol && tok_.text == "*") {
                    if (*agg != AggregateFn::Count) throw err("expression inside aggregate");
                    e.countStar = true;
                    advance();
                } else {
                    e.args.push_back(std::make_unique<SqlExpr>(parseOr()));
                    if (sqlExprContainsAggregate(*e.args[0]))
                        throw Error(ErrorCode::SqlSyntax, "nested aggregates are not supported");
                }
                expectSymbol(")");
                return e;
            }
            SqlExpr e{SqlExpr::Kind::Column};
            e.column = name;
            return e;
        }
        throw err("expression");
    }

    SqlExpr binaryNode(SqlExpr::Kind k, SqlExpr l, SqlExpr r) {
        SqlExpr e{k};
        e.args.push_back(std::make_unique<SqlExpr>(std::move(l)));
        e.args.push_back(std::make_unique<SqlExpr>(std::move(r)));
        return e;
    }

    SqlExpr arithNode(char op, SqlExpr l, SqlExpr r) {
        SqlExpr e{SqlExpr::Kind::Binary};
        e.binOp = op;
        e.args.push_back(std::make_unique<SqlExpr>(std::move(l)));
        e.args.push_back(std::make_unique<SqlExpr>(std::move(r)));
        return e;
    }

    void advance() { tok_ = lexer_.next(); }

    bool accept(std::string_view sym) {
        if (tok_.kind == Token::Kind::Symbol && tok_.text == sym) {
            advance();
            return true;
        }
        return false;
    }

    void expectSymbol(std::string_view sym) {
        if (!accept(sym)) throw err("'" + std::string(sym) + "'");
    }

    void expectKeyword(std::string_view kw) {
        if (!isKeyword(tok_, kw)) throw err(std::string(kw));
        advance();
    }

    Error err(const std::string& expected) {
        return Error(ErrorCode::SqlSyntax, "expected " + expected + " at position " +
                                               std::to_string(tok_.pos));
    }

    Lexer lexer_;
    Token tok_{Token::Kind::End, "", 0};
};

} // namespace sql_detail

/// Grammar: SELECT proj[, proj]* FROM MyTempView [WHERE pred] [GROUP BY cols]
/// [ORDER BY col [ASC|DESC][, ...]] [LIMIT n]. Keywords are case-insensitive,
/// identifiers may be double-quoted. No JOIN, DISTINCT, HAVING or subqueries.
inline SqlQuery parseSql(std::string_view text) {
    return sql_detail::Parser(text).parse();
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct SqlEvalStats {
    size_t divisionsByZero = 0;
};

namespace sql_detail {

inline Value triToValue(Tri t) {
    if (t == Tri::Unknown) return std::monostate{};
    return t == Tri::True;
}

inline Value applyArith(char op, const Value& a, const Value& b, SqlEvalStats& stats) {
    if (isNull(a) || isNull(b)) return std::monostate{};
    const bool aNum = a.index() == 1 || a.index() == 2;
    const bool bNum = b.index() == 1 || b.index() == 2;
    if (!aNum || !bNum)
        throw Error(ErrorCode::TypeError, "arithmetic on non-numeric operand");
    if (op == '/') {
        const double denom = asDouble(b);
        if (denom == 0.0) {
            ++stats.divisionsByZero;
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
        // Int64 overflow promotes to Float64.
    }
    const double x = asDouble(a), y = asDouble(b);
    switch (op) {
        case '+': return x + y;
        case '-': return x - y;
        case '*': return x * y;
    }
    throw Error(ErrorCode::TypeError, "unknown arithmetic operator");
}

struct EvalContext {
    const Frame& frame;
    SqlEvalStats& stats;
    // Set in grouped evaluation: rows of the current group.
    const std::vector<size_t>* groupRows = nullptr;
};

inline Value evalScalar(const SqlExpr& e, const EvalContext& cx, size_t row);

inline Tri evalPredicate(const SqlExpr& e, const EvalContext& cx, size_t row) {
    switch (e.kind) {
        case SqlExpr::Kind::And:
            return triAnd(evalPredicate(e.arg(0), cx, row), evalPredicate(e.arg(1), cx, row));
        case SqlExpr::Kind::Or:
            return triOr(evalPredicate(e.arg(0), cx, row), evalPredicate(e.arg(1), cx, row));
        case SqlExpr::Kind::Not:
            return triNot(evalPredicate(e.arg(0), cx, row));
        case SqlExpr::Kind::Compare:
            return compareValues(e.cmpOp, evalScalar(e.arg(0), cx, row),
                                 evalScalar(e.arg(1), cx, row));
        case SqlExpr::Kind::Like: {
            const Value v = evalScalar(e.arg(0), cx, row);
            if (isNull(v)) return Tri::Unknown;
            if (!std::holds_alternative<std::string>(v)) return Tri::False;
            return triOf(likeMatch(e.pattern, std::get<std::string>(v)));
        }
        case SqlExpr::Kind::IsNull: {
            const bool null = isNull(evalScalar(e.arg(0), cx, row));
            return triOf(e.nullNegated ? !null : null);
        }
        default: {
            // a bare value used as a predicate must be boolean
            const Value v = evalScalar(e, cx, row);
            if (isNull(v)) return Tri::Unknown;
            if (!std::holds_alternative<bool>(v))
                throw Error(ErrorCode::TypeError, "predicate does not evaluate to a boolean");
            return triOf(std::get<bool>(v));
        }
    }
}

inline Value evalAggregate(const SqlExpr& e, const EvalContext& cx) {
    const std::vector<size_t>& rows = *cx.groupRows;
    if (e.countStar) return static_cast<int64_t>(rows.size());

    std::vector<Value> inputs;
    inputs.reserve(rows.size());
    for (size_t r : rows) {
        Value v = evalScalar(e.arg(0), cx, r);
        if (!isNull(v)) inputs.push_back(std::move(v));
    }
    switch (e.agg) {
        case AggregateFn::Count:
            return static_cast<int64_t>(inputs.size());
        case AggregateFn::Sum: {
            if (inputs.empty()) return std::monostate{};
            Value acc = inputs[0];
            for (size_t i = 1; i < inputs.size(); ++i)
                acc = applyArith('+', acc, inputs[i], cx.stats);
            return acc;
        }
        case AggregateFn::Avg: {
            if (inputs.empty()) return std::monostate{};
            double s = 0.0;
            for (const auto& v : inputs) s += asDouble(v);
            return s / static_cast<double>(inputs.size());
        }
        case AggregateFn::Min:
        case AggregateFn::Max: {
            if (inputs.empty()) return std::monostate{};
            Value best = inputs[0];
            for (size_t i = 1; i < inputs.size(); ++i) {
                const bool less = valueLess(inputs[i], best);
                if ((e.agg == AggregateFn::Min && less) ||
                    (e.agg == AggregateFn::Max && valueLess(best, inputs[i])))
                    best = inputs[i];
            }
            return best;
        }
    }
    return std::monostate{};
}

inline Value evalScalar(const SqlExpr& e, const EvalContext& cx, size_t row) {
    switch (e.kind) {
        case SqlExpr::Kind::Column:
            return cx.frame.column(e.column).values[row];
        case SqlExpr::Kind::Literal:
            return e.literal;
        case SqlExpr::Kind::Neg: {
            const Value v = evalScalar(e.arg(0), cx, row);
            if (isNull(v)) return v;
            if (std::holds_alternative<int64_t>(v)) {
                const int64_t x = std::get<int64_t>(v);
                if (x == INT64_MIN) return -static_cast<double>(x);
                return -x;
            }
            if (std::holds_alternative<double>(v)) return -std::get<double>(v);
            throw Error(ErrorCode::TypeError, "unary minus on non-numeric operand");
        }
        case SqlExpr::Kind::Binary:
            return applyArith(e.binOp, evalScalar(e.arg(0), cx, row),
                              evalScalar(e.arg(1), cx, row), cx.stats);
        case SqlExpr::Kind::Aggregate:
            if (!cx.groupRows)
                throw Error(ErrorCode::TypeError, "aggregate used outside an aggregation");
            return evalAggregate(e, cx);
        default:
            return triToValue(evalPredicate(e, cx, row));
    }
}

/// Static result type of an expression; runtime Int64 overflow may still widen
/// a column to Float64.
inline DType staticDType(const SqlExpr& e, const Frame& f) {
    switch (e.kind) {
        case SqlExpr::Kind::Column: return f.column(e.column).dtype;
        case SqlExpr::Kind::Literal: {
            auto t = valueDType(e.literal);
            return t.value_or(DType::Str); // bare NULL literal: arbitrary, all-null column
        }
        case SqlExpr::Kind::Neg: return staticDType(e.arg(0), f);
        case SqlExpr::Kind::Binary: {
            if (e.binOp == '/') return DType::Float64;
            const DType l = staticDType(e.arg(0), f), r = staticDType(e.arg(1), f);
            if (!isNumeric(l) || !isNumeric(r))
                throw Error(ErrorCode::TypeError, "arithmetic on non-numeric expression '" +
                                                      renderSqlExpr(e) + "'");
            return (l == DType::Int64 && r == DType::Int64) ? DType::Int64 : DType::Float64;
        }
        case SqlExpr::Kind::Aggregate:
            if (e.countStar || e.agg == AggregateFn::Count) return DType::Int64;
            if (e.agg == AggregateFn::Avg) return DType::Float64;
            return staticDType(e.arg(0), f);
        default:
            return DType::Bool;
    }
}

inline void collectColumnsOutsideAggregates(const SqlExpr& e, std::vector<std::string>& out) {
    if (e.kind == SqlExpr::Kind::Aggregate) return;
    if (e.kind == SqlExpr::Kind::Column) out.push_back(e.column);
    for (const auto& a : e.args) collectColumnsOutsideAggregates(*a, out);
}

} // namespace sql_detail

/// Relational semantics: filter, group/aggregate, project, stable sort, limit.
/// Division by zero yields Null (counted in stats), never an error.
inline Frame evaluateSql(const SqlQuery& q, const Frame& f, SqlEvalStats* statsOut = nullptr) {
    using namespace sql_detail;
    SqlEvalStats stats;
    EvalContext cx{f, stats, nullptr};

    // WHERE
    std::vector<size_t> rows;
    rows.reserve(f.nrows());
    for (size_t r = 0; r < f.nrows(); ++r) {
        if (!q.where || evalPredicate(*q.where, cx, r) == Tri::True) rows.push_back(r);
    }

    // Projections; star expands to all columns in order.
    std::vector<const SqlExpr*> exprs;
    std::vector<std::string> names;
    std::vector<SqlExprPtr> starStorage;
    if (q.selectStar) {
        for (const auto& c : f.columns()) {
            auto e = std::make_unique<SqlExpr>(SqlExpr{SqlExpr::Kind::Column});
            e->column = c.name;
            names.push_back(c.name);
            exprs.push_back(e.get());
            starStorage.push_back(std::move(e));
        }
    } else {
        for (const auto& p : q.projections) {
            exprs.push_back(p.expr.get());
            names.push_back(p.alias ? *p.alias : renderSqlExpr(*p.expr));
        }
    }

    const bool hasAggregate = std::any_of(exprs.begin(), exprs.end(), [](const SqlExpr* e) {
        return sqlExprContainsAggregate(*e);
    });
    const bool grouped = !q.groupBy.empty() || hasAggregate;

    std::vector<std::vector<Value>> resultRows;
    if (grouped) {
        if (q.selectStar)
            throw Error(ErrorCode::TypeError, "SELECT * cannot be combined with aggregation");
        for (const auto& g : q.groupBy) f.columnIndex(g);
        // Every column referenced outside an aggregate must be a GROUP BY column.
        for (const SqlExpr* e : exprs) {
            std::vector<std::string> bare;
            collectColumnsOutsideAggregates(*e, bare);
            for (const auto& c : bare)
                if (std::find(q.groupBy.begin(), q.groupBy.end(), c) == q.groupBy.end())
                    throw Error(ErrorCode::TypeError,
                                "column '" + c + "' must appear in GROUP BY or inside an aggregate");
        }

        // Groups in first-appearance order; group keys compare null-safe
        // (all nulls form one group).
        std::vector<std::vector<size_t>> groups;
        auto keyLess = [](const std::vector<Value>& a, const std::vector<Value>& b) {
            for (size_t i = 0; i < a.size(); ++i) {
                const bool an = isNull(a[i]), bn = isNull(b[i]);
                if (an != bn) return an < bn;
                if (an) continue;
                if (valueLess(a[i], b[i])) return true;
                if (valueLess(b[i], a[i])) return false;
            }
            return false;
        };
        std::map<std::vector<Value>, size_t, decltype(keyLess)> keyToGroup(keyLess);
        if (q.groupBy.empty()) {
            groups.push_back(rows); // global aggregation: one group, even when empty
        } else {
            for (size_t r : rows) {
                std::vector<Value> key;
                key.reserve(q.groupBy.size());
                for (const auto& g : q.groupBy) key.push_back(f.column(g).values[r]);
                auto [it, inserted] = keyToGroup.emplace(std::move(key), groups.size());
                if (inserted) groups.emplace_back();
                groups[it->second].push_back(r);
            }
        }

        for (const auto& groupRows : groups) {
            EvalContext gcx{f, stats, &groupRows};
            const size_t rep = groupRows.empty() ? 0 : groupRows[0];
            std::vector<Value> out;
            out.reserve(exprs.size());
            for (const SqlExpr* e : exprs) out.push_back(evalScalar(*e, gcx, rep));
            resultRows.push_back(std::move(out));
        }
    } else {
        for (size_t r : rows) {
            std::vector<Value> out;
            out.reserve(exprs.size());
            for (const SqlExpr* e : exprs) out.push_back(evalScalar(*e, cx, r));
            resultRows.push_back(std::move(out));
        }
    }

    // Column dtypes: static type, widened if runtime promotion produced floats.
    std::vector<Column> cols;
    for (size_t c = 0; c < exprs.size(); ++c) {
        Column col{names[c], staticDType(*exprs[c], f), {}};
        col.values.reserve(resultRows.size());
        bool sawFloat = false;
        for (auto& row : resultRows) {
            if (std::holds_alternative<double>(row[c])) sawFloat = true;
            col.values.push_back(row[c]);
        }
        if (col.dtype == DType::Int64 && sawFloat) {
            col.dtype = DType::Float64;
            for (auto& v : col.values)
                if (std::holds_alternative<int64_t>(v))
                    v = static_cast<double>(std::get<int64_t>(v));
        }
        cols.push_back(std::move(col));
    }
    Frame result(std::move(cols));

    // ORDER BY result columns, stable; nulls last ascending, first descending.
    if (!q.orderBy.empty() && result.nrows() > 0) {
        for (const auto& k : q.orderBy) result.columnIndex(k.column);
        std::vector<size_t> order(result.nrows());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            for (const auto& k : q.orderBy) {
                const auto& vals = result.column(k.column).values;
                const Value& va = vals[a];
                const Value& vb = vals[b];
                const bool an = isNull(va), bn = isNull(vb);
                if (an || bn) {
                    if (an == bn) continue;
                    // ascending: nulls last; descending: nulls first
                    return k.ascending ? bn : an;
                }
                if (valueLess(va, vb)) return k.ascending;
                if (valueLess(vb, va)) return !k.ascending;
            }
            return false;
        });
        std::vector<Column> sorted;
        for (const auto& c : result.columns()) {
            Column out{c.name, c.dtype, {}};
            out.values.reserve(order.size());
            for (size_t i : order) out.values.push_back(c.values[i]);
            sorted.push_back(std::move(out));
        }
        result = Frame(std::move(sorted));
    }

    if (q.limit && static_cast<size_t>(*q.limit) < result.nrows()) {
        std::vector<bool> mask(result.nrows(), false);
        for (size_t i = 0; i < static_cast<size_t>(*q.limit); ++i) mask[i] = true;
        result = filterByMask(result, mask);
    }

    if (statsOut) *statsOut = stats;
    return result;
}

} // namespace tabpipe
