#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>
#include <regex>

using namespace tabpipe;
using testutil::intColumn;
using testutil::makeContext;
using testutil::runStage;
using testutil::strColumn;

TEST(ParseFilterExpr, BasicAndPrecedence) {
    const FilterExpr e = parseFilterExpr("age >= 18 AND sex == 'M'");
    ASSERT_EQ(e.kind, FilterExpr::Kind::And);
    EXPECT_EQ(e.lhs->column, "age");
    EXPECT_EQ(e.lhs->op, CompareOp::Ge);
    EXPECT_EQ(e.rhs->column, "sex");
    EXPECT_EQ(std::get<std::string>(e.rhs->literal), "M");

    // AND binds tighter than OR
    const FilterExpr p = parseFilterExpr("a == 1 OR b == 2 AND c == 3");
    ASSERT_EQ(p.kind, FilterExpr::Kind::Or);
    EXPECT_EQ(p.lhs->kind, FilterExpr::Kind::Compare);
    EXPECT_EQ(p.rhs->kind, FilterExpr::Kind::And);
}

TEST(ParseFilterExpr, NotParensLiterals) {
    const FilterExpr e = parseFilterExpr("NOT (a == 1 OR flag == true)");
    ASSERT_EQ(e.kind, FilterExpr::Kind::Not);
    EXPECT_EQ(e.lhs->kind, FilterExpr::Kind::Or);

    const FilterExpr f = parseFilterExpr("x < -2.5");
    EXPECT_DOUBLE_EQ(std::get<double>(f.literal), -2.5);

    const FilterExpr esc = parseFilterExpr("s == 'it''s'");
    EXPECT_EQ(std::get<std::string>(esc.literal), "it's");
}

TEST(ParseFilterExpr, SyntaxErrors) {
    for (const char* bad : {"a >", "== 3", "a == ", "(a == 1", "a == 1 AND", "a ~ 1", ""}) {
        try {
            parseFilterExpr(bad);
            FAIL() << "expected ExprSyntax for: " << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::ExprSyntax) << bad;
        }
    }
}

namespace {

// independent recursive interpreter used as the evaluation oracle
Tri oracleEval(const FilterExpr& e, const Frame& f, size_t row) {
    auto cmp = [&](const Value& v, const Value& lit) -> Tri {
        if (isNull(v) || isNull(lit)) return Tri::Unknown;
        const bool vNum = v.index() == 1 || v.index() == 2;
        const bool lNum = lit.index() == 1 || lit.index() == 2;
        double dv = 0, dl = 0;
        bool comparable = false;
        int c = 0;
        if (vNum && lNum) {
            dv = v.index() == 1 ? double(std::get<int64_t>(v)) : std::get<double>(v);
            dl = lit.index() == 1 ? double(std::get<int64_t>(lit)) : std::get<double>(lit);
            c = dv < dl ? -1 : (dv > dl ? 1 : 0);
            comparable = true;
        } else if (v.index() == lit.index() && v.index() == 4) {
            const auto& a = std::get<std::string>(v);
            const auto& b = std::get<std::string>(lit);
            c = a < b ? -1 : (a > b ? 1 : 0);
            comparable = true;
        } else if (v.index() == lit.index() && v.index() == 3) {
            c = int(std::get<bool>(v)) - int(std::get<bool>(lit));
            comparable = true;
        }
        if (!comparable) return Tri::False;
        bool out = false;
        switch (e.op) {
            case CompareOp::Eq: out = c == 0; break;
            case CompareOp::Ne: out = c != 0; break;
            case CompareOp::Lt: out = c < 0; break;
            case CompareOp::Le: out = c <= 0; break;
            case CompareOp::Gt: out = c > 0; break;
            case CompareOp::Ge: out = c >= 0; break;
        }
        return out ? Tri::True : Tri::False;
    };
    switch (e.kind) {
        case FilterExpr::Kind::Compare:
            return cmp(f.column(e.column).values[row], e.literal);
        case FilterExpr::Kind::And: {
            const Tri a = oracleEval(*e.lhs, f, row), b = oracleEval(*e.rhs, f, row);
            if (a == Tri::False || b == Tri::False) return Tri::False;
            if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
            return Tri::True;
        }
        case FilterExpr::Kind::Or: {
            const Tri a = oracleEval(*e.lhs, f, row), b = oracleEval(*e.rhs, f, row);
            if (a == Tri::True || b == Tri::True) return Tri::True;
            if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
            return Tri::False;
        }
        case FilterExpr::Kind::Not: {
            const Tri a = oracleEval(*e.lhs, f, row);
            if (a == Tri::Unknown) return Tri::Unknown;
            return a == Tri::True ? Tri::False : Tri::True;
        }
        default: return Tri::Unknown;
    }
}

FilterExpr randomExpr(std::mt19937_64& rng, int depth) {
    if (depth <= 0 || rng() % 2 == 0) {
        static const CompareOp ops[] = {CompareOp::Eq, CompareOp::Ne, CompareOp::Lt,
                                        CompareOp::Le, CompareOp::Gt, CompareOp::Ge};
        const char* columns[] = {"i", "s", "x"};
        const std::string col = columns[rng() % 3];
        Value lit;
        switch (rng() % 3) {
            case 0: lit = static_cast<int64_t>(rng() % 10); break;
            case 1: lit = static_cast<double>(rng() % 100) / 10.0; break;
            default: lit = std::string(1, static_cast<char>('a' + rng() % 5));
        }
        return FilterExpr::compare(col, ops[rng() % 6], lit);
    }
    switch (rng() % 3) {
        case 0:
            return FilterExpr::logical(FilterExpr::Kind::And, randomExpr(rng, depth - 1),
                                       randomExpr(rng, depth - 1));
        case 1:
            return FilterExpr::logical(FilterExpr::Kind::Or, randomExpr(rng, depth - 1),
                                       randomExpr(rng, depth - 1));
        default: return FilterExpr::negation(randomExpr(rng, depth - 1));
    }
}

} // namespace

TEST(EvalFilterExpr, AgreesWithBruteForceOracle) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const size_t n = 1 + rng() % 20;
        std::vector<std::optional<int64_t>> is;
        std::vector<std::optional<std::string>> ss;
        std::vector<std::optional<double>> xs;
        for (size_t r = 0; r < n; ++r) {
            is.push_back(rng() % 5 == 0 ? std::nullopt
                                        : std::optional<int64_t>(static_cast<int64_t>(rng() % 10)));
            ss.push_back(rng() % 5 == 0 ? std::nullopt
                                        : std::optional<std::string>(std::string(
                                              1, static_cast<char>('a' + rng() % 5))));
            xs.push_back(rng() % 5 == 0
                             ? std::nullopt
                             : std::optional<double>(static_cast<double>(rng() % 100) / 10.0));
        }
        const Frame f({intColumn("i", is), strColumn("s", ss), testutil::floatColumn("x", xs)});
        const FilterExpr e = randomExpr(rng, 3);
        for (size_t r = 0; r < n; ++r)
            ASSERT_EQ(evalFilterExpr(e, f, r), oracleEval(e, f, r)) << "trial " << trial;
    }
}

TEST(LikeMatch, Basics) {
    EXPECT_TRUE(likeMatch("P0%", "P05771"));
    EXPECT_FALSE(likeMatch("P0%", "Q05771"));
    EXPECT_TRUE(likeMatch("%771", "P05771"));
    EXPECT_TRUE(likeMatch("P_5771", "P05771"));
    EXPECT_FALSE(likeMatch("P_771", "P05771"));
    EXPECT_TRUE(likeMatch("%", ""));
    EXPECT_FALSE(likeMatch("_", ""));
    EXPECT_TRUE(likeMatch("abc", "abc"));    // anchored full match
    EXPECT_FALSE(likeMatch("abc", "xabcx")); // not a substring search
    EXPECT_FALSE(likeMatch("ABC", "abc"));   // case-sensitive
    EXPECT_TRUE(likeMatch("a%b%c", "a123b456c"));
}

// LIKE agrees with the anchored-regex translation on random pattern/string pairs
TEST(LikeMatch, AgreesWithRegexOracle) {
    std::mt19937_64 rng(37);
    const std::string patAlpha = "ab%_c";
    const std::string strAlpha = "abc";
    auto toRegex = [](const std::string& pattern) {
        std::string re = "^";
        for (char c : pattern) {
            if (c == '%') re += ".*";
            else if (c == '_') re += ".";
            else if (std::string("\\^$.|?*+()[]{}").find(c) != std::string::npos) {
                re += '\\';
                re += c;
            } else re += c;
        }
        return std::regex(re + "$");
    };
    for (int trial = 0; trial < 2000; ++trial) {
        std::string pat, s;
        const size_t pl = rng() % 6, sl = rng() % 8;
        for (size_t i = 0; i < pl; ++i) pat += patAlpha[rng() % patAlpha.size()];
        for (size_t i = 0; i < sl; ++i) s += strAlpha[rng() % strAlpha.size()];
        const bool expected = std::regex_match(s, toRegex(pat));
        EXPECT_EQ(likeMatch(pat, s), expected) << "pattern '" << pat << "' string '" << s << "'";
    }
}

TEST(StageFilter, ValuesListKeepAndRemove) {
    auto ctx = makeContext("filter_values");
    ctx.current = Frame({strColumn("org", {std::string("human"), std::string("mouse"),
                                           std::string("human"), std::nullopt})});
    runStage(ctx, "filter", {{"mode", "keep"}, {"column", "org"}, {"values", {"human"}}});
    EXPECT_EQ(ctx.current->nrows(), 2u);

    ctx.current = Frame({strColumn("org", {std::string("human"), std::string("mouse"),
                                           std::string("human"), std::nullopt})});
    runStage(ctx, "filter", {{"mode", "remove"}, {"column", "org"}, {"values", {"human"}}});
    // null row is not a match, so remove keeps it
    EXPECT_EQ(ctx.current->nrows(), 2u);
}

TEST(StageFilter, KeepPlusRemovePartition) {
    auto ctx = makeContext("filter_partition");
    const Frame f({intColumn("v", {1, 2, 3, 4, 5, 6})});
    ctx.current = f;
    runStage(ctx, "filter", {{"mode", "keep"}, {"expression", "v > 3"}});
    const size_t kept = ctx.current->nrows();
    ctx.current = f;
    runStage(ctx, "filter", {{"mode", "remove"}, {"expression", "v > 3"}});
    EXPECT_EQ(kept + ctx.current->nrows(), f.nrows());

    // keep(pred) then remove(pred) on the result is empty
    runStage(ctx, "filter", {{"mode", "keep"}, {"expression", "v > 3"}});
    runStage(ctx, "filter", {{"mode", "remove"}, {"expression", "v > 3"}});
    EXPECT_EQ(ctx.current->nrows(), 0u);
}

TEST(StageFilter, LikePatternAndErrors) {
    auto ctx = makeContext("filter_like");
    ctx.current = Frame({strColumn("acc", {std::string("P05771"), std::string("Q9Y243"),
                                           std::string("P00533")})});
    runStage(ctx, "filter", {{"column", "acc"}, {"likePattern", "P0%"}});
    EXPECT_EQ(ctx.current->nrows(), 2u);

    try {
        runStage(ctx, "filter",
                 {{"column", "acc"}, {"likePattern", "P%"}, {"expression", "a == 1"}});
        FAIL() << "expected AmbiguousPredicate";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AmbiguousPredicate);
    }
    EXPECT_THROW(runStage(ctx, "filter", {{"column", "nope"}, {"values", {1}}}), Error);
}

TEST(StageFilter, IncompatibleTypesNeverError) {
    auto ctx = makeContext("filter_types");
    ctx.current = Frame({intColumn("v", {1, 2})});
    runStage(ctx, "filter", {{"mode", "keep"}, {"expression", "v == 'text'"}});
    EXPECT_EQ(ctx.current->nrows(), 0u); // false, not an error
}

TEST(StageDropNulls, Variants) {
    auto ctx = makeContext("dropnulls");
    const Frame noNulls({intColumn("a", {1, 2})});
    ctx.current = noNulls;
    runStage(ctx, "dropNulls");
    EXPECT_TRUE(testutil::framesEqual(*ctx.current, noNulls));

    ctx.current = Frame({intColumn("a", {std::nullopt, std::nullopt}), intColumn("b", {1, 2})});
    runStage(ctx, "dropNulls", {{"columns", {"a"}}});
    EXPECT_EQ(ctx.current->nrows(), 0u);
    EXPECT_EQ(ctx.current->ncols(), 2u);

    ctx.current = Frame({strColumn("s", {std::string(""), std::string("x")})});
    runStage(ctx, "dropNulls", {{"treatBlanksAsNull", true}});
    EXPECT_EQ(ctx.current->nrows(), 1u);
}

TEST(StageAddLiteral, TypesAndCollision) {
    auto ctx = makeContext("literal");
    ctx.current = Frame({intColumn("a", {1, 2})});
    runStage(ctx, "addLiteral", {{"column", "source"}, {"value", "uniprot"}});
    EXPECT_EQ(ctx.current->column("source").dtype, DType::Str);
    EXPECT_EQ(std::get<std::string>(ctx.current->column("source").values[1]), "uniprot");

    runStage(ctx, "addLiteral", {{"column", "one"}, {"value", 1}});
    EXPECT_EQ(ctx.current->column("one").dtype, DType::Int64);

    try {
        runStage(ctx, "addLiteral", {{"column", "a"}, {"value", 0}});
        FAIL() << "expected DuplicateColumn";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DuplicateColumn);
    }
}

TEST(StageAddUniqueId, IncreasingIdsFirstColumn) {
    auto ctx = makeContext("uniqueid");
    ctx.current = Frame({strColumn("s", {std::string("a"), std::string("b"), std::string("c"),
                                         std::string("d")})});
    runStage(ctx, "addUniqueId");
    EXPECT_EQ(ctx.current->column(0).name, "unique_id");
    for (int64_t i = 0; i < 4; ++i)
        EXPECT_EQ(std::get<int64_t>(ctx.current->column("unique_id").values[i]), i);

    ctx.current = Frame({strColumn("s", {std::string("a")})});
    runStage(ctx, "addUniqueId", {{"column", "rid"}, {"asFirstColumn", false}});
    EXPECT_EQ(ctx.current->column(1).name, "rid");
}

TEST(StageSplitColumn, ParentAccession) {
    auto ctx = makeContext("split");
    ctx.current = Frame({strColumn("acc", {std::string("P05771-2"), std::string("P05771"),
                                           std::nullopt})});
    runStage(ctx, "splitColumn",
             {{"column", "acc"}, {"delimiter", "-"}, {"index", 0}, {"newColumn", "parent"}});
    EXPECT_EQ(std::get<std::string>(ctx.current->column("parent").values[0]), "P05771");
    EXPECT_EQ(std::get<std::string>(ctx.current->column("parent").values[1]), "P05771");
    EXPECT_TRUE(isNull(ctx.current->column("parent").values[2]));

    runStage(ctx, "splitColumn",
             {{"column", "acc"}, {"delimiter", "-"}, {"index", 1}, {"newColumn", "iso"}});
    EXPECT_EQ(std::get<std::string>(ctx.current->column("iso").values[0]), "2");
    EXPECT_TRUE(isNull(ctx.current->column("iso").values[1])); // out of range

    ctx.current = Frame({intColumn("n", {1})});
    try {
        runStage(ctx, "splitColumn",
                 {{"column", "n"}, {"delimiter", "-"}, {"index", 0}, {"newColumn", "x"}});
        FAIL() << "expected NotAStringColumn";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotAStringColumn);
    }
}
