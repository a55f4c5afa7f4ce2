#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace tabpipe;
using testutil::framesEqual;
using testutil::intColumn;
using testutil::strColumn;

namespace {

Frame abcFrame() {
    return Frame({intColumn("a", {1, 2, 3}), intColumn("b", {4, 5, 6}),
                  strColumn("c", {std::string("x"), std::string("y"), std::string("z")})});
}

} // namespace

TEST(InferCellType, IntegerLiteral) {
    const Value v = inferCellType("3");
    ASSERT_TRUE(std::holds_alternative<int64_t>(v));
    EXPECT_EQ(std::get<int64_t>(v), 3);
    EXPECT_EQ(std::get<int64_t>(inferCellType("-17")), -17);
    EXPECT_EQ(std::get<int64_t>(inferCellType("+8")), 8);
}

TEST(InferCellType, DateTimeRoundTrip) {
    const Value v = inferCellType("2015-02-04 17:51:00");
    ASSERT_TRUE(std::holds_alternative<DateTime>(v));
    const DateTime dt = std::get<DateTime>(v);
    EXPECT_EQ(dt.year, 2015);
    EXPECT_EQ(dt.month, 2);
    EXPECT_EQ(dt.day, 4);
    EXPECT_EQ(dt.hour, 17);
    EXPECT_EQ(dt.minute, 51);
    EXPECT_EQ(dt.second, 0);
    // render and re-infer lands on the same instant
    const Value again = inferCellType(renderValue(v));
    ASSERT_TRUE(std::holds_alternative<DateTime>(again));
    EXPECT_EQ(std::get<DateTime>(again).toSerial(), dt.toSerial());
}

TEST(InferCellType, NullTokens) {
    EXPECT_TRUE(isNull(inferCellType("")));
    EXPECT_TRUE(isNull(inferCellType("NA")));
    EXPECT_TRUE(isNull(inferCellType("null")));
    EXPECT_TRUE(isNull(inferCellType("NULL")));
    EXPECT_TRUE(isNull(inferCellType("?")));
    // configurable token set
    EXPECT_FALSE(isNull(inferCellType("", {"missing"})));
    EXPECT_TRUE(isNull(inferCellType("missing", {"missing"})));
}

TEST(InferCellType, FloatsBoolsStrings) {
    EXPECT_DOUBLE_EQ(std::get<double>(inferCellType("3.5")), 3.5);
    EXPECT_DOUBLE_EQ(std::get<double>(inferCellType("1e3")), 1000.0);
    EXPECT_DOUBLE_EQ(std::get<double>(inferCellType(".5")), 0.5);
    EXPECT_TRUE(std::get<bool>(inferCellType("true")));
    EXPECT_FALSE(std::get<bool>(inferCellType("FALSE")));
    EXPECT_TRUE(std::holds_alternative<std::string>(inferCellType("hello")));
    // things that look numeric but are not
    EXPECT_TRUE(std::holds_alternative<std::string>(inferCellType("1.2.3")));
    EXPECT_TRUE(std::holds_alternative<std::string>(inferCellType("inf")));
    EXPECT_TRUE(std::holds_alternative<std::string>(inferCellType("nan")));
    EXPECT_TRUE(std::holds_alternative<std::string>(inferCellType("0x10")));
}

TEST(InferCellType, RejectsInvalidDates) {
    EXPECT_TRUE(std::holds_alternative<std::string>(inferCellType("2015-13-01")));
    EXPECT_TRUE(std::holds_alternative<std::string>(inferCellType("2015-02-29")));
    EXPECT_TRUE(std::holds_alternative<DateTime>(inferCellType("2016-02-29"))); // leap year
    EXPECT_TRUE(std::holds_alternative<std::string>(inferCellType("2015-02-04 24:00:00")));
    EXPECT_TRUE(std::holds_alternative<std::string>(inferCellType("2015-2-4")));
}

// render(inferCellType(s)) re-infers to an equal value for non-Str results
TEST(InferCellType, IdempotentUnderReRendering) {
    std::mt19937_64 rng(7);
    std::vector<std::string> samples = {"42", "-3", "2.75", "1e-3", "true", "False",
                                        "2001-12-31", "1999-06-15 23:59:59", "plain", ""};
    for (int i = 0; i < 500; ++i) {
        switch (rng() % 4) {
            case 0: samples.push_back(std::to_string(static_cast<int64_t>(rng()) / 1000)); break;
            case 1: {
                std::uniform_real_distribution<double> d(-1e6, 1e6);
                samples.push_back(formatDouble(d(rng)));
                break;
            }
            case 2: {
                const int y = 1970 + static_cast<int>(rng() % 60);
                const int m = 1 + static_cast<int>(rng() % 12);
                const int day = 1 + static_cast<int>(rng() % calendar::daysInMonth(y, m));
                DateTime dt{y, m, day, static_cast<int>(rng() % 24),
                            static_cast<int>(rng() % 60), static_cast<int>(rng() % 60)};
                samples.push_back(formatDateTime(dt));
                break;
            }
            default: samples.push_back(rng() % 2 ? "true" : "false");
        }
    }
    for (const auto& s : samples) {
        const Value v = inferCellType(s);
        if (std::holds_alternative<std::string>(v)) continue;
        const Value again = inferCellType(renderValue(v));
        EXPECT_EQ(again.index(), v.index()) << s;
        if (!isNull(v)) EXPECT_TRUE(valuesEqual(v, again)) << s;
    }
}

TEST(Frame, InvariantViolations) {
    EXPECT_THROW(Frame({intColumn("a", {1}), intColumn("a", {2})}), Error);
    EXPECT_THROW(Frame({intColumn("a", {1, 2}), intColumn("b", {1})}), Error);
    EXPECT_THROW(Frame({intColumn("", {1})}), Error);
}

TEST(SelectColumns, ReorderAndIdentity) {
    const Frame f = abcFrame();
    const Frame r = selectColumns(f, {"c", "a"});
    ASSERT_EQ(r.ncols(), 2u);
    EXPECT_EQ(r.column(0).name, "c");
    EXPECT_EQ(r.column(1).name, "a");
    EXPECT_EQ(r.nrows(), 3u);

    EXPECT_TRUE(framesEqual(selectColumns(f, {"a", "b", "c"}), f));

    try {
        selectColumns(f, {"x"});
        FAIL() << "expected UnknownColumn";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownColumn);
    }
}

TEST(SelectColumns, ComposesLikeSingleSelect) {
    const Frame f = abcFrame();
    const Frame once = selectColumns(f, {"b", "c"});
    const Frame twice = selectColumns(once, {"c"});
    EXPECT_TRUE(framesEqual(twice, selectColumns(f, {"c"})));
}

TEST(RenameColumn, BasicIdentityAndCollision) {
    const Frame f = abcFrame();
    const Frame r = renameColumn(f, "a", "alpha");
    EXPECT_TRUE(r.hasColumn("alpha"));
    EXPECT_FALSE(r.hasColumn("a"));
    EXPECT_TRUE(framesEqual(renameColumn(f, "a", "a"), f));
    try {
        renameColumn(f, "a", "b");
        FAIL() << "expected DuplicateColumn";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DuplicateColumn);
    }
}

TEST(FilterByMask, KeepsMarkedRowsInOrder) {
    const Frame f = abcFrame();
    const Frame r = filterByMask(f, {true, false, true});
    ASSERT_EQ(r.nrows(), 2u);
    EXPECT_EQ(std::get<int64_t>(r.column("a").values[0]), 1);
    EXPECT_EQ(std::get<int64_t>(r.column("a").values[1]), 3);

    EXPECT_TRUE(framesEqual(filterByMask(f, {true, true, true}), f));

    const Frame empty = filterByMask(f, {false, false, false});
    EXPECT_EQ(empty.nrows(), 0u);
    EXPECT_EQ(empty.ncols(), 3u);
    EXPECT_EQ(empty.column(0).dtype, DType::Int64);

    EXPECT_THROW(filterByMask(f, {true}), Error);
}

TEST(UnionByName, AppendsAndReorders) {
    const Frame top = Frame({intColumn("a", {1, 2}), strColumn("s", {std::string("p"), std::string("q")})});
    const Frame bottom =
        Frame({strColumn("s", {std::string("r"), std::string("t"), std::string("u")}),
               intColumn("a", {7, 8, 9})});
    const Frame u = unionByName(top, bottom);
    ASSERT_EQ(u.nrows(), 5u);
    EXPECT_EQ(u.column(0).name, "a"); // top's order wins
    EXPECT_EQ(std::get<int64_t>(u.column("a").values[4]), 9);
    EXPECT_EQ(std::get<std::string>(u.column("s").values[2]), "r");
}

TEST(UnionByName, EmptyIsIdentityAndMismatchThrows) {
    const Frame f = abcFrame();
    const Frame empty = filterByMask(f, {false, false, false});
    EXPECT_TRUE(framesEqual(unionByName(f, empty), f));

    const Frame other = Frame({intColumn("a", {1}), intColumn("x", {2})});
    try {
        unionByName(Frame({intColumn("a", {1}), intColumn("b", {2})}), other);
        FAIL() << "expected SchemaMismatch";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SchemaMismatch);
    }

    // same names, different dtype
    const Frame fa = Frame({intColumn("a", {1})});
    const Frame fb = Frame({strColumn("a", {std::string("1")})});
    EXPECT_THROW(unionByName(fa, fb), Error);
}

TEST(UnionByName, RowCountAdditivityProperty) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const size_t n1 = rng() % 20;
        const size_t n2 = rng() % 20;
        auto makeRows = [&](size_t n) {
            std::vector<std::optional<int64_t>> xs;
            for (size_t i = 0; i < n; ++i) xs.push_back(static_cast<int64_t>(rng() % 100));
            return xs;
        };
        const Frame a = Frame({intColumn("v", makeRows(n1))});
        const Frame b = Frame({intColumn("v", makeRows(n2))});
        EXPECT_EQ(unionByName(a, b).nrows(), n1 + n2);
    }
}
