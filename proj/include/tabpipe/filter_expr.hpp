#pragma once

#include "tabpipe/error.hpp"
#include "tabpipe/frame.hpp"
#include "tabpipe/predicate.hpp"

#include <memory>
#include <string>
#include <vector>

namespace tabpipe {

/// AST of the filter mini-language. In/Like nodes are built directly from
/// stage parameters; the text grammar produces Compare/And/Or/Not.
struct FilterExpr {
    enum class Kind { Compare, In, Like, And, Or, Not };

    FilterExpr() = default;
    explicit FilterExpr(Kind k) : kind(k) {}

    Kind kind = Kind::Compare;
    std::string column;                    // Compare, In, Like
    CompareOp op = CompareOp::Eq;          // Compare
    Value literal;                         // Compare
    std::vector<Value> list;               // In
    std::string pattern;                   // Like
    std::unique_ptr<FilterExpr> lhs, rhs;  // And/Or; Not uses lhs only

    static FilterExpr compare(std::string col, CompareOp op, Value lit) {
        FilterExpr e{Kind::Compare};
        e.column = std::move(col);
        e.op = op;
        e.literal = std::move(lit);
        return e;
    }
    static FilterExpr in(std::string col, std::vector<Value> values) {
        FilterExpr e{Kind::In};
        e.column = std::move(col);
        e.list = std::move(values);
        return e;
    }
    static FilterExpr like(std::string col, std::string pat) {
        FilterExpr e{Kind::Like};
        e.column = std::move(col);
        e.pattern = std::move(pat);
        return e;
    }
    static FilterExpr logical(Kind k, FilterExpr l, FilterExpr r) {
        FilterExpr e{k};
        e.lhs = std::make_unique<FilterExpr>(std::move(l));
        e.rhs = std::make_unique<FilterExpr>(std::move(r));
        return e;
    }
    static FilterExpr negation(FilterExpr inner) {
        FilterExpr e{Kind::Not};
        e.lhs = std::make_unique<FilterExpr>(std::move(inner));
        return e;
    }
};

inline Tri evalFilterExpr(const FilterExpr& e, const Frame& f, size_t row) {
    switch (e.kind) {
        case FilterExpr::Kind::Compare:
            return compareValues(e.op, f.column(e.column).values[row], e.literal);
        case FilterExpr::Kind::In: {
            const Value& v = f.column(e.column).values[row];
            if (isNull(v)) return Tri::Unknown;
            for (const auto& item : e.list)
                if (compareValues(CompareOp::Eq, v, item) == Tri::True) return Tri::True;
            return Tri::False;
        }
        case FilterExpr::Kind::Like: {
            const Value& v = f.column(e.column).values[row];
            if (isNull(v)) return Tri::Unknown;
            if (!std::holds_alternative<std::string>(v)) return Tri::False;
            return triOf(likeMatch(e.pattern, std::get<std::string>(v)));
        }
        case FilterExpr::Kind::And:
            return triAnd(evalFilterExpr(*e.lhs, f, row), evalFilterExpr(*e.rhs, f, row));
        case FilterExpr::Kind::Or:
            return triOr(evalFilterExpr(*e.lhs, f, row), evalFilterExpr(*e.rhs, f, row));
        case FilterExpr::Kind::Not:
            return triNot(evalFilterExpr(*e.lhs, f, row));
    }
    return Tri::Unknown;
}

namespace expr_detail {

struct Token {
    enum class Kind { Ident, Number, String, Op, LParen, RParen, End };
    Kind kind;
    std::string text;
    size_t pos;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        while (i_ < text_.size() && (text_[i_] == ' ' || text_[i_] == '\t')) ++i_;
        size_t start = i_;
        if (i_ >= text_.size()) return {Token::Kind::End, "", start};
        char c = text_[i_];
        if (c == '(') { ++i_; return {Token::Kind::LParen, "(", start}; }
        if (c == ')') { ++i_; return {Token::Kind::RParen, ")", start}; }
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
            throw Error(ErrorCode::ExprSyntax,
                        "unterminated string literal at position " + std::to_string(start));
        }
        if (isOpChar(c)) {
            std::string op(1, c);
            ++i_;
            if (i_ < text_.size() && text_[i_] == '=') { op += '='; ++i_; }
            return {Token::Kind::Op, op, start};
        }
        if ((c >= '0' && c <= '9') || c == '.' ||
            ((c == '+' || c == '-') && i_ + 1 < text_.size() &&
             ((text_[i_ + 1] >= '0' && text_[i_ + 1] <= '9') || text_[i_ + 1] == '.'))) {
            std::string num(1, c);
            ++i_;
            while (i_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[i_])) ||
                                         text_[i_] == '.' || text_[i_] == 'e' || text_[i_] == 'E' ||
                                         ((text_[i_] == '+' || text_[i_] == '-') &&
                                          (text_[i_ - 1] == 'e' || text_[i_ - 1] == 'E'))))
                num += text_[i_++];
            return {Token::Kind::Number, num, start};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id(1, c);
            ++i_;
            while (i_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i_])) ||
                                         text_[i_] == '_'))
                id += text_[i_++];
            return {Token::Kind::Ident, id, start};
        }
        throw Error(ErrorCode::ExprSyntax,
                    "unexpected character '" + std::string(1, c) + "' at position " +
                        std::to_string(start));
    }

private:
    static bool isOpChar(char c) { return c == '=' || c == '!' || c == '<' || c == '>'; }

    std::string_view text_;
    size_t i_ = 0;
};

inline bool keywordIs(const Token& t, std::string_view kw) {
    return t.kind == Token::Kind::Ident && detail::equalsIgnoreCase(t.text, kw);
}

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { advance(); }

    FilterExpr parse() {
        FilterExpr e = parseOr();
        expect(Token::Kind::End, "end of expression");
        return e;
    }

private:
    // OR is the loosest binder; AND binds tighter.
    FilterExpr parseOr() {
        FilterExpr lhs = parseAnd();
        while (keywordIs(tok_, "OR")) {
            advance();
            lhs = FilterExpr::logical(FilterExpr::Kind::Or, std::move(lhs), parseAnd());
        }
        return lhs;
    }

    FilterExpr parseAnd() {
        FilterExpr lhs = parseTerm();
        while (keywordIs(tok_, "AND")) {
            advance();
            lhs = FilterExpr::logical(FilterExpr::Kind::And, std::move(lhs), parseTerm());
        }
        return lhs;
    }

    FilterExpr parseTerm() {
        if (keywordIs(tok_, "NOT")) {
            advance();
            return FilterExpr::negation(parseTerm());
        }
        if (tok_.kind == Token::Kind::LParen) {
            advance();
            FilterExpr e = parseOr();
            expect(Token::Kind::RParen, "')'");
            advance();
            return e;
        }
        return parseComparison();
    }

    FilterExpr parseComparison() {
        if (tok_.kind != Token::Kind::Ident)
            throw err("column name");
        std::string column = tok_.text;
        advance();
        if (tok_.kind != Token::Kind::Op) throw err("comparison operator");
        CompareOp op = parseOp(tok_);
        advance();
        Value lit = parseLiteral();
        return FilterExpr::compare(std::move(column), op, std::move(lit));
    }

    Value parseLiteral() {
        if (tok_.kind == Token::Kind::String) {
            Value v = tok_.text;
            advance();
            return v;
        }
        if (tok_.kind == Token::Kind::Number) {
            std::string num = tok_.text;
            advance();
            if (auto i = detail::parseIntStrict(num)) return *i;
            if (auto f = detail::parseFloatStrict(num)) return *f;
            throw Error(ErrorCode::ExprSyntax, "bad numeric literal '" + num + "'");
        }
        if (keywordIs(tok_, "true")) { advance(); return true; }
        if (keywordIs(tok_, "false")) { advance(); return false; }
        throw err("literal");
    }

    CompareOp parseOp(const Token& t) {
        if (t.text == "==") return CompareOp::Eq;
        if (t.text == "!=") return CompareOp::Ne;
        if (t.text == "<") return CompareOp::Lt;
        if (t.text == "<=") return CompareOp::Le;
        if (t.text == ">") return CompareOp::Gt;
        if (t.text == ">=") return CompareOp::Ge;
        throw err("comparison operator");
    }

    void advance() { tok_ = lexer_.next(); }

    void expect(Token::Kind k, const std::string& what) {
        if (tok_.kind != k) throw err(what);
    }

    Error err(const std::string& expected) {
        return Error(ErrorCode::ExprSyntax, "expected " + expected + " at position " +
                                                std::to_string(tok_.pos));
    }

    Lexer lexer_;
    Token tok_{Token::Kind::End, "", 0};
};

} // namespace expr_detail

/// Parse the "simple expression" grammar:
///   expr := term (("AND"|"OR") term)*, AND binding tighter than OR
///   term := ["NOT"] (comparison | "(" expr ")")
///   comparison := ident op literal
inline FilterExpr parseFilterExpr(std::string_view text) {
    return expr_detail::Parser(text).parse();
}

} // namespace tabpipe
