#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <map>
#include <random>

using namespace tabpipe;
using testutil::floatColumn;
using testutil::intColumn;
using testutil::strColumn;

TEST(ParseSql, ProjectionsWhereAliases) {
    const SqlQuery q = parseSql("SELECT a, b FROM MyTempView WHERE a > 5");
    EXPECT_FALSE(q.selectStar);
    ASSERT_EQ(q.projections.size(), 2u);
    EXPECT_EQ(q.projections[0].expr->column, "a");
    ASSERT_TRUE(q.where != nullptr);
    EXPECT_EQ(q.where->kind, SqlExpr::Kind::Compare);

    const SqlQuery g =
        parseSql("SELECT quality, AVG(alcohol) AS avg_alc FROM MyTempView GROUP BY quality");
    ASSERT_EQ(g.groupBy.size(), 1u);
    EXPECT_EQ(g.groupBy[0], "quality");
    EXPECT_EQ(*g.projections[1].alias, "avg_alc");
    EXPECT_EQ(g.projections[1].expr->agg, AggregateFn::Avg);
}

TEST(ParseSql, WrongTableAndSyntax) {
    try {
        parseSql("SELECT * FROM Other");
        FAIL() << "expected WrongTable";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::WrongTable);
        EXPECT_NE(std::string(e.what()).find("Other"), std::string::npos);
    }
    for (const char* bad :
         {"SELECT FROM MyTempView", "SELECT a MyTempView", "SELECT a FROM MyTempView LIMIT x",
          "SELECT a FROM MyTempView ORDER a", "FROM MyTempView", "SELECT a FROM MyTempView extra",
          "SELECT foo(a) FROM MyTempView", "SELECT COUNT(SUM(a)) FROM MyTempView"}) {
        EXPECT_THROW(parseSql(bad), Error) << bad;
    }
}

TEST(ParseSql, KeywordsCaseInsensitiveQuotedIdents) {
    const SqlQuery q = parseSql(
        "select \"total sulfur dioxide\" from MyTempView where \"total sulfur dioxide\" >= 10 "
        "order by \"total sulfur dioxide\" desc limit 3");
    EXPECT_EQ(q.projections[0].expr->column, "total sulfur dioxide");
    ASSERT_EQ(q.orderBy.size(), 1u);
    EXPECT_FALSE(q.orderBy[0].ascending);
    EXPECT_EQ(*q.limit, 3);
}

namespace {

Frame sampleFrame() {
    return Frame({intColumn("a", {1, 2, 3, 4, 5, 6, 7}),
                  floatColumn("x", {0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5}),
                  strColumn("s", {std::string("p"), std::string("q"), std::string("p"),
                                  std::string("q"), std::string("p"), std::string("q"),
                                  std::string("p")})});
}

Frame evalText(const std::string& text, const Frame& f, SqlEvalStats* stats = nullptr) {
    return evaluateSql(parseSql(text), f, stats);
}

} // namespace

TEST(EvaluateSql, StarFalsePredicateKeepsSchema) {
    const Frame f = sampleFrame();
    const Frame r = evalText("SELECT * FROM MyTempView WHERE a < 0", f);
    EXPECT_EQ(r.nrows(), 0u);
    ASSERT_EQ(r.ncols(), 3u);
    EXPECT_EQ(r.column("a").dtype, DType::Int64);
    EXPECT_EQ(r.column("x").dtype, DType::Float64);
}

TEST(EvaluateSql, CountStar) {
    const Frame r = evalText("SELECT COUNT(*) FROM MyTempView", sampleFrame());
    ASSERT_EQ(r.nrows(), 1u);
    EXPECT_EQ(std::get<int64_t>(r.column("COUNT(*)").values[0]), 7);
}

TEST(EvaluateSql, GroupedAvgMatchesBruteForce) {
    const Frame f = sampleFrame();
    const Frame r =
        evalText("SELECT s, AVG(x) AS m FROM MyTempView GROUP BY s ORDER BY s", f);
    ASSERT_EQ(r.nrows(), 2u);
    // brute-force per-group mean over the same frame
    std::map<std::string, std::pair<double, int>> acc;
    for (size_t i = 0; i < f.nrows(); ++i) {
        acc[std::get<std::string>(f.column("s").values[i])].first +=
            std::get<double>(f.column("x").values[i]);
        acc[std::get<std::string>(f.column("s").values[i])].second += 1;
    }
    for (size_t i = 0; i < r.nrows(); ++i) {
        const auto& key = std::get<std::string>(r.column("s").values[i]);
        const double expected = acc[key].first / acc[key].second;
        EXPECT_NEAR(std::get<double>(r.column("m").values[i]), expected, 1e-12);
    }
}

TEST(EvaluateSql, ArithmeticTypingAndDivZero) {
    const Frame f({intColumn("a", {6, 3}), intColumn("b", {2, 0})});
    SqlEvalStats stats;
    const Frame r = evalText("SELECT a + b AS s, a / b AS q FROM MyTempView", f, &stats);
    EXPECT_EQ(r.column("s").dtype, DType::Int64);
    EXPECT_EQ(r.column("q").dtype, DType::Float64); // division always floats
    EXPECT_DOUBLE_EQ(std::get<double>(r.column("q").values[0]), 3.0);
    EXPECT_TRUE(isNull(r.column("q").values[1])); // div by zero -> Null, not error
    EXPECT_EQ(stats.divisionsByZero, 1u);
}

TEST(EvaluateSql, UnaliasedNamesAreRenderedSource) {
    const Frame f({intColumn("a", {1})});
    const Frame r = evalText("SELECT a + 1, COUNT(*) FROM MyTempView GROUP BY a", f);
    EXPECT_TRUE(r.hasColumn("a + 1"));
    EXPECT_TRUE(r.hasColumn("COUNT(*)"));
}

TEST(EvaluateSql, AggregatesIgnoreNulls) {
    const Frame f({intColumn("v", {1, std::nullopt, 3, std::nullopt})});
    const Frame r = evalText(
        "SELECT COUNT(*) AS n, COUNT(v) AS nv, SUM(v) AS sv, MIN(v) AS lo, MAX(v) AS hi "
        "FROM MyTempView",
        f);
    EXPECT_EQ(std::get<int64_t>(r.column("n").values[0]), 4);
    EXPECT_EQ(std::get<int64_t>(r.column("nv").values[0]), 2);
    EXPECT_EQ(std::get<int64_t>(r.column("sv").values[0]), 4);
    EXPECT_EQ(std::get<int64_t>(r.column("lo").values[0]), 1);
    EXPECT_EQ(std::get<int64_t>(r.column("hi").values[0]), 3);

    // SUM/AVG of nothing is Null; COUNT of nothing is 0
    const Frame empty({intColumn("v", {})});
    const Frame re = evalText("SELECT COUNT(v) AS c, SUM(v) AS s, AVG(v) AS a FROM MyTempView",
                              empty);
    EXPECT_EQ(std::get<int64_t>(re.column("c").values[0]), 0);
    EXPECT_TRUE(isNull(re.column("s").values[0]));
    EXPECT_TRUE(isNull(re.column("a").values[0]));
}

TEST(EvaluateSql, OrderByStableAndNullPlacement) {
    const Frame f({intColumn("k", {2, 1, 2, std::nullopt, 1}),
                   strColumn("tag", {std::string("a"), std::string("b"), std::string("c"),
                                     std::string("d"), std::string("e")})});
    const Frame asc = evalText("SELECT k, tag FROM MyTempView ORDER BY k ASC", f);
    // nulls last ascending; equal keys keep pre-sort order (b before e, a before c)
    EXPECT_EQ(std::get<std::string>(asc.column("tag").values[0]), "b");
    EXPECT_EQ(std::get<std::string>(asc.column("tag").values[1]), "e");
    EXPECT_EQ(std::get<std::string>(asc.column("tag").values[2]), "a");
    EXPECT_EQ(std::get<std::string>(asc.column("tag").values[3]), "c");
    EXPECT_TRUE(isNull(asc.column("k").values[4]));

    const Frame desc = evalText("SELECT k, tag FROM MyTempView ORDER BY k DESC", f);
    EXPECT_TRUE(isNull(desc.column("k").values[0])); // nulls first descending
}

TEST(EvaluateSql, LikeIsNullBooleans) {
    const Frame f({strColumn("s", {std::string("apple"), std::string("banana"), std::nullopt})});
    const Frame r = evalText("SELECT s FROM MyTempView WHERE s LIKE 'a%'", f);
    EXPECT_EQ(r.nrows(), 1u);
    const Frame n = evalText("SELECT s FROM MyTempView WHERE s IS NULL", f);
    EXPECT_EQ(n.nrows(), 1u);
    const Frame nn = evalText("SELECT s FROM MyTempView WHERE s IS NOT NULL", f);
    EXPECT_EQ(nn.nrows(), 2u);
    const Frame b = evalText("SELECT s IS NULL AS isnull FROM MyTempView", f);
    EXPECT_EQ(b.column("isnull").dtype, DType::Bool);
}

TEST(EvaluateSql, SemanticErrors) {
    const Frame f = sampleFrame();
    try {
        evalText("SELECT nope FROM MyTempView", f);
        FAIL() << "expected UnknownColumn";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownColumn);
    }
    try {
        evalText("SELECT s + 1 FROM MyTempView", f);
        FAIL() << "expected TypeError";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TypeError);
    }
    try {
        evalText("SELECT a, COUNT(*) FROM MyTempView GROUP BY s", f);
        FAIL() << "expected TypeError (a not in GROUP BY)";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TypeError);
    }
}

// ---------------------------------------------------------------------------
// Reference interpreter: naive tuple-at-a-time semantics over row maps,
// evaluated independently of evaluateSql.
// ---------------------------------------------------------------------------

namespace oracle {

using Row = std::map<std::string, Value>;

enum class OTri { F, T, U };

double toD(const Value& v) {
    return std::holds_alternative<int64_t>(v) ? double(std::get<int64_t>(v)) : std::get<double>(v);
}
bool numeric(const Value& v) { return v.index() == 1 || v.index() == 2; }

Value scalar(const SqlExpr& e, const Row& row, const std::vector<Row>* group);

OTri predicate(const SqlExpr& e, const Row& row, const std::vector<Row>* group) {
    auto fromBool = [](bool b) { return b ? OTri::T : OTri::F; };
    switch (e.kind) {
        case SqlExpr::Kind::And: {
            const OTri a = predicate(e.arg(0), row, group), b = predicate(e.arg(1), row, group);
            if (a == OTri::F || b == OTri::F) return OTri::F;
            if (a == OTri::U || b == OTri::U) return OTri::U;
            return OTri::T;
        }
        case SqlExpr::Kind::Or: {
            const OTri a = predicate(e.arg(0), row, group), b = predicate(e.arg(1), row, group);
            if (a == OTri::T || b == OTri::T) return OTri::T;
            if (a == OTri::U || b == OTri::U) return OTri::U;
            return OTri::F;
        }
        case SqlExpr::Kind::Not: {
            const OTri a = predicate(e.arg(0), row, group);
            if (a == OTri::U) return OTri::U;
            return a == OTri::T ? OTri::F : OTri::T;
        }
        case SqlExpr::Kind::Compare: {
            const Value a = scalar(e.arg(0), row, group), b = scalar(e.arg(1), row, group);
            if (isNull(a) || isNull(b)) return OTri::U;
            int c = 0;
            bool comparable = false;
            if (numeric(a) && numeric(b)) {
                c = toD(a) < toD(b) ? -1 : (toD(a) > toD(b) ? 1 : 0);
                comparable = true;
            } else if (a.index() == b.index() && a.index() == 4) {
                const auto &sa = std::get<std::string>(a), &sb = std::get<std::string>(b);
                c = sa < sb ? -1 : (sa > sb ? 1 : 0);
                comparable = true;
            } else if (a.index() == b.index() && a.index() == 3) {
                c = int(std::get<bool>(a)) - int(std::get<bool>(b));
                comparable = true;
            }
            if (!comparable) return OTri::F;
            switch (e.cmpOp) {
                case CompareOp::Eq: return fromBool(c == 0);
                case CompareOp::Ne: return fromBool(c != 0);
                case CompareOp::Lt: return fromBool(c < 0);
                case CompareOp::Le: return fromBool(c <= 0);
                case CompareOp::Gt: return fromBool(c > 0);
                case CompareOp::Ge: return fromBool(c >= 0);
            }
            return OTri::U;
        }
        case SqlExpr::Kind::Like: {
            const Value v = scalar(e.arg(0), row, group);
            if (isNull(v)) return OTri::U;
            if (!std::holds_alternative<std::string>(v)) return OTri::F;
            // simple recursive LIKE matcher, separate from likeMatch
            std::function<bool(size_t, size_t)> match = [&](size_t pi, size_t si) -> bool {
                const std::string& pat = e.pattern;
                const std::string& s = std::get<std::string>(v);
                if (pi == pat.size()) return si == s.size();
                if (pat[pi] == '%') {
                    for (size_t k = si; k <= s.size(); ++k)
                        if (match(pi + 1, k)) return true;
                    return false;
                }
                if (si == s.size()) return false;
                if (pat[pi] == '_' || pat[pi] == s[si]) return match(pi + 1, si + 1);
                return false;
            };
            return fromBool(match(0, 0));
        }
        case SqlExpr::Kind::IsNull: {
            const bool isnull = isNull(scalar(e.arg(0), row, group));
            return fromBool(e.nullNegated ? !isnull : isnull);
        }
        default: {
            const Value v = scalar(e, row, group);
            if (isNull(v)) return OTri::U;
            return fromBool(std::get<bool>(v));
        }
    }
}

Value scalar(const SqlExpr& e, const Row& row, const std::vector<Row>* group) {
    switch (e.kind) {
        case SqlExpr::Kind::Column: return row.at(e.column);
        case SqlExpr::Kind::Literal: return e.literal;
        case SqlExpr::Kind::Neg: {
            const Value v = scalar(e.arg(0), row, group);
            if (isNull(v)) return v;
            if (std::holds_alternative<int64_t>(v)) return -std::get<int64_t>(v);
            return -std::get<double>(v);
        }
        case SqlExpr::Kind::Binary: {
            const Value a = scalar(e.arg(0), row, group), b = scalar(e.arg(1), row, group);
            if (isNull(a) || isNull(b)) return std::monostate{};
            if (e.binOp == '/') {
                if (toD(b) == 0.0) return std::monostate{};
                return toD(a) / toD(b);
            }
            if (std::holds_alternative<int64_t>(a) && std::holds_alternative<int64_t>(b)) {
                const int64_t x = std::get<int64_t>(a), y = std::get<int64_t>(b);
                switch (e.binOp) {
                    case '+': return x + y;
                    case '-': return x - y;
                    case '*': return x * y;
                }
            }
            switch (e.binOp) {
                case '+': return toD(a) + toD(b);
                case '-': return toD(a) - toD(b);
                case '*': return toD(a) * toD(b);
            }
            return std::monostate{};
        }
        case SqlExpr::Kind::Aggregate: {
            const std::vector<Row>& rows = *group;
            if (e.countStar) return static_cast<int64_t>(rows.size());
            std::vector<Value> inputs;
            for (const Row& r : rows) {
                Value v = scalar(e.arg(0), r, nullptr);
                if (!isNull(v)) inputs.push_back(v);
            }
            switch (e.agg) {
                case AggregateFn::Count: return static_cast<int64_t>(inputs.size());
                case AggregateFn::Sum: {
                    if (inputs.empty()) return std::monostate{};
                    bool allInt = true;
                    for (const auto& v : inputs) allInt &= std::holds_alternative<int64_t>(v);
                    if (allInt) {
                        int64_t s = 0;
                        for (const auto& v : inputs) s += std::get<int64_t>(v);
                        return s;
                    }
                    double s = 0;
                    for (const auto& v : inputs) s += toD(v);
                    return s;
                }
                case AggregateFn::Avg: {
                    if (inputs.empty()) return std::monostate{};
                    double s = 0;
                    for (const auto& v : inputs) s += toD(v);
                    return s / double(inputs.size());
                }
                case AggregateFn::Min:
                case AggregateFn::Max: {
                    if (inputs.empty()) return std::monostate{};
                    Value best = inputs[0];
                    for (const auto& v : inputs) {
                        bool less;
                        if (numeric(v) && numeric(best)) less = toD(v) < toD(best);
                        else if (v.index() == 4) less = std::get<std::string>(v) < std::get<std::string>(best);
                        else less = false;
                        if (e.agg == AggregateFn::Min ? less
                                                      : (numeric(v) && numeric(best)
                                                             ? toD(v) > toD(best)
                                                             : (v.index() == 4 &&
                                                                std::get<std::string>(v) >
                                                                    std::get<std::string>(best))))
                            best = v;
                    }
                    return best;
                }
            }
            return std::monostate{};
        }
        default: {
            const OTri t = predicate(e, row, group);
            if (t == OTri::U) return std::monostate{};
            return t == OTri::T;
        }
    }
}

/// Tuple-at-a-time evaluation of the parsed query against rows-as-maps.
std::vector<Row> evaluate(const SqlQuery& q, const Frame& f, std::vector<std::string>& namesOut) {
    std::vector<Row> rows;
    for (size_t r = 0; r < f.nrows(); ++r) {
        Row row;
        for (const auto& c : f.columns()) row[c.name] = c.values[r];
        rows.push_back(std::move(row));
    }

    // WHERE
    std::vector<Row> kept;
    for (const Row& row : rows)
        if (!q.where || predicate(*q.where, row, nullptr) == OTri::T) kept.push_back(row);

    std::vector<const SqlExpr*> exprs;
    std::vector<SqlExprPtr> storage;
    namesOut.clear();
    if (q.selectStar) {
        for (const auto& c : f.columns()) {
            auto e = std::make_unique<SqlExpr>(SqlExpr::Kind::Column);
            e->column = c.name;
            namesOut.push_back(c.name);
            exprs.push_back(e.get());
            storage.push_back(std::move(e));
        }
    } else {
        for (const auto& p : q.projections) {
            exprs.push_back(p.expr.get());
            namesOut.push_back(p.alias ? *p.alias : renderSqlExpr(*p.expr));
        }
    }

    bool hasAgg = false;
    for (const SqlExpr* e : exprs) hasAgg |= sqlExprContainsAggregate(*e);

    std::vector<Row> result;
    if (!q.groupBy.empty() || hasAgg) {
        // groups in first-appearance order, null-safe keys
        std::vector<std::pair<std::vector<std::string>, std::vector<Row>>> groups;
        auto keyOf = [&](const Row& row) {
            std::vector<std::string> key;
            for (const auto& g : q.groupBy) {
                const Value& v = row.at(g);
                key.push_back(isNull(v) ? "\x01null" : std::to_string(v.index()) + renderValue(v));
            }
            return key;
        };
        if (q.groupBy.empty()) {
            groups.push_back({{}, kept});
        } else {
            for (const Row& row : kept) {
                auto key = keyOf(row);
                bool found = false;
                for (auto& [k, rs] : groups)
                    if (k == key) {
                        rs.push_back(row);
                        found = true;
                        break;
                    }
                if (!found) groups.push_back({key, {row}});
            }
        }
        for (const auto& [key, rs] : groups) {
            Row out;
            const Row& rep = rs.empty() ? Row{} : rs[0];
            for (size_t i = 0; i < exprs.size(); ++i)
                out[namesOut[i]] = scalar(*exprs[i], rep, &rs);
            result.push_back(std::move(out));
        }
    } else {
        for (const Row& row : kept) {
            Row out;
            for (size_t i = 0; i < exprs.size(); ++i)
                out[namesOut[i]] = scalar(*exprs[i], row, nullptr);
            result.push_back(std::move(out));
        }
    }

    // ORDER BY: stable, nulls last asc / first desc
    if (!q.orderBy.empty()) {
        std::stable_sort(result.begin(), result.end(), [&](const Row& a, const Row& b) {
            for (const auto& k : q.orderBy) {
                const Value& va = a.at(k.column);
                const Value& vb = b.at(k.column);
                const bool an = isNull(va), bn = isNull(vb);
                if (an || bn) {
                    if (an == bn) continue;
                    return k.ascending ? bn : an;
                }
                int c = 0;
                if (numeric(va) && numeric(vb))
                    c = toD(va) < toD(vb) ? -1 : (toD(va) > toD(vb) ? 1 : 0);
                else if (va.index() == 4) {
                    const auto &sa = std::get<std::string>(va), &sb = std::get<std::string>(vb);
                    c = sa < sb ? -1 : (sa > sb ? 1 : 0);
                }
                if (c != 0) return k.ascending ? c < 0 : c > 0;
            }
            return false;
        });
    }

    if (q.limit && result.size() > static_cast<size_t>(*q.limit))
        result.resize(static_cast<size_t>(*q.limit));
    return result;
}

} // namespace oracle

namespace {

std::string randomQuery(std::mt19937_64& rng) {
    std::ostringstream q;
    q << "SELECT ";
    const bool grouped = rng() % 3 == 0;
    if (grouped) {
        const std::string g = rng() % 2 ? "s" : "i";
        q << g;
        const char* aggs[] = {"COUNT(*)", "COUNT(x)", "SUM(j)",
                              "AVG(x)",   "MIN(i)",   "MAX(x)"};
        const size_t nAgg = 1 + rng() % 2;
        for (size_t a = 0; a < nAgg; ++a) q << ", " << aggs[rng() % 6] << " AS p" << a;
        q << " FROM MyTempView";
        if (rng() % 2) q << " WHERE j > " << (rng() % 5);
        q << " GROUP BY " << g;
        if (rng() % 2) q << " ORDER BY " << g << (rng() % 2 ? " ASC" : " DESC");
    } else {
        std::vector<std::string> pool = {"i", "j", "x", "s", "i + j AS p0", "x * 2 AS p1",
                                         "j - i AS p2", "i / j AS p3", "-j AS p4"};
        // distinct projections, or duplicate output names would collide
        for (size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng() % i]);
        const size_t nProj = 1 + rng() % 3;
        std::vector<std::string> names;
        for (size_t i = 0; i < nProj; ++i) {
            const std::string& p = pool[i];
            if (i) q << ", ";
            q << p;
            const size_t as = p.find(" AS ");
            names.push_back(as == std::string::npos ? p : p.substr(as + 4));
        }
        q << " FROM MyTempView";
        switch (rng() % 4) {
            case 0: q << " WHERE i >= " << (rng() % 8); break;
            case 1: q << " WHERE s == '" << char('a' + rng() % 4) << "' OR j < " << (rng() % 9);
                break;
            case 2: q << " WHERE NOT (x > " << (rng() % 5) << ".5) AND i IS NOT NULL"; break;
            default: break;
        }
        if (rng() % 2) {
            q << " ORDER BY " << names[rng() % names.size()] << (rng() % 2 ? "" : " DESC");
            if (names.size() > 1 && rng() % 2)
                q << ", " << names[(rng() + 1) % names.size()] << " ASC";
        }
    }
    if (rng() % 3 == 0) q << " LIMIT " << (rng() % 10);
    return q.str();
}

Frame randomSqlFrame(std::mt19937_64& rng) {
    const size_t n = rng() % 60;
    std::vector<std::optional<int64_t>> is, js;
    std::vector<std::optional<double>> xs;
    std::vector<std::optional<std::string>> ss;
    for (size_t r = 0; r < n; ++r) {
        is.push_back(rng() % 7 == 0 ? std::nullopt
                                    : std::optional<int64_t>(static_cast<int64_t>(rng() % 10)));
        js.push_back(std::optional<int64_t>(static_cast<int64_t>(rng() % 9)));
        xs.push_back(rng() % 7 == 0
                         ? std::nullopt
                         : std::optional<double>(static_cast<double>(rng() % 80) / 8.0));
        ss.push_back(rng() % 9 == 0 ? std::nullopt
                                    : std::optional<std::string>(
                                          std::string(1, static_cast<char>('a' + rng() % 4))));
    }
    return Frame({intColumn("i", is), intColumn("j", js), floatColumn("x", xs),
                  strColumn("s", ss)});
}

} // namespace

// evaluateSql vs the reference interpreter on 200 generated query/frame pairs
TEST(EvaluateSql, MatchesReferenceInterpreter) {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const Frame f = randomSqlFrame(rng);
        const std::string text = randomQuery(rng);
        SCOPED_TRACE("trial " + std::to_string(trial) + ": " + text);

        const SqlQuery q = parseSql(text);
        const Frame impl = evaluateSql(q, f);
        std::vector<std::string> names;
        const auto expected = oracle::evaluate(q, f, names);

        ASSERT_EQ(impl.nrows(), expected.size());
        ASSERT_EQ(impl.ncols(), names.size());
        for (size_t c = 0; c < names.size(); ++c) {
            ASSERT_EQ(impl.column(c).name, names[c]);
            for (size_t r = 0; r < impl.nrows(); ++r) {
                const Value& got = impl.column(c).values[r];
                const Value& want = expected[r].at(names[c]);
                if (isNull(want)) {
                    EXPECT_TRUE(isNull(got)) << "row " << r << " col " << names[c];
                } else if (std::holds_alternative<double>(want) ||
                           std::holds_alternative<double>(got)) {
                    ASSERT_FALSE(isNull(got)) << "row " << r << " col " << names[c];
                    const double g = oracle::toD(got), w = oracle::toD(want);
                    EXPECT_NEAR(g, w, 1e-12 * std::max(1.0, std::abs(w)))
                        << "row " << r << " col " << names[c];
                } else {
                    EXPECT_TRUE(valuesEqual(got, want)) << "row " << r << " col " << names[c];
                }
            }
        }
    }
}

TEST(StageSql, ReplacesCurrentFrame) {
    auto ctx = testutil::makeContext("sql_stage");
    ctx.current = sampleFrame();
    testutil::runStage(ctx, "sql", {{"query", "SELECT a FROM MyTempView WHERE a > 5"}});
    EXPECT_EQ(ctx.current->ncols(), 1u);
    EXPECT_EQ(ctx.current->nrows(), 2u);
}
