#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "riskscore/errors.hpp"
#include "riskscore/rng.hpp"
#include "riskscore/scoring_table.hpp"

using namespace riskscore;
using test_helpers::single_record;

namespace {

// Three prior-arrest rows worth one point each, intercept -2; the kind of
// table the integer trainer emits.
ScoringTable arrest_table() {
    ScoringTable t;
    t.intercept = -2;
    for (double k : {2.0, 3.0, 5.0})
        t.rows.push_back({{"p_arrest", Comparator::GreaterEq, k}, 1});
    return t;
}

}  // namespace

TEST_CASE("three-row arrest table evaluates per the printed logistic formula") {
    ScoringTable table = arrest_table();
    {
        Dataset d = single_record({{"p_arrest", 4}});
        TableScore s = table.evaluate(d.record(0));
        CHECK(s.score == 2);
        CHECK(s.probability == 0.5);  // logistic argument is exactly zero
    }
    {
        Dataset d = single_record({{"p_arrest", 0}});
        TableScore s = table.evaluate(d.record(0));
        CHECK(s.score == 0);
        CHECK(std::abs(s.probability - 1.0 / (1.0 + std::exp(2.0))) < 1e-12);
    }
    {
        Dataset d = single_record({{"p_arrest", 10}});
        TableScore s = table.evaluate(d.record(0));
        CHECK(s.score == 3);
        CHECK(std::abs(s.probability - 1.0 / (1.0 + std::exp(-1.0))) < 1e-12);
    }
}

TEST_CASE("missing feature names the feature; categorical mismatch is a type error") {
    ScoringTable table = arrest_table();
    Dataset d = single_record({{"other", 1}});
    try {
        table.evaluate(d.record(0));
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("p_arrest") != std::string::npos);
    }

    Schema s;
    s.columns.push_back({"sex", ColumnType::Str, ColumnRole::Sensitive});
    s.columns.push_back({"p_arrest", ColumnType::Int, ColumnRole::Feature});
    Dataset with_sex(s);
    RecordData rec;
    rec.strings["sex"] = "male";
    rec.numbers["p_arrest"] = 1;
    with_sex.append(rec);
    ScoringTable numeric_on_string;
    numeric_on_string.intercept = 0;
    numeric_on_string.rows.push_back({{"sex", Comparator::GreaterEq, 1.0}, 1});
    CHECK_THROWS_AS(numeric_on_string.evaluate(with_sex.record(0)), ValueTypeError);

    // Equality against a category works.
    ScoringTable eq;
    eq.intercept = 0;
    eq.rows.push_back({{"sex", Comparator::Eq, std::string("male")}, 1});
    CHECK(eq.evaluate(with_sex.record(0)).score == 1);
}

TEST_CASE("text serialization round trips") {
    ScoringTable empty;
    empty.intercept = -2;
    ScoringTable back = ScoringTable::from_text(empty.to_text());
    CHECK(back.intercept == -2);
    CHECK(back.rows.empty());

    ScoringTable table = arrest_table();
    ScoringTable parsed = ScoringTable::from_text(table.to_text());
    REQUIRE(parsed.rows.size() == 3);
    CHECK(parsed.intercept == table.intercept);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(parsed.rows[i].condition.feature == table.rows[i].condition.feature);
        CHECK(parsed.rows[i].condition.op == table.rows[i].condition.op);
        CHECK(std::get<double>(parsed.rows[i].condition.threshold) ==
              std::get<double>(table.rows[i].condition.threshold));
        CHECK(parsed.rows[i].points == table.rows[i].points);
    }
    CHECK(parsed.to_text() == table.to_text());
}

TEST_CASE("json serialization round trips") {
    ScoringTable table = arrest_table();
    table.rows.push_back({{"sex", Comparator::Eq, std::string("male")}, 1});
    ScoringTable parsed = ScoringTable::from_json(table.to_json());
    CHECK(parsed.to_text() == table.to_text());
}

TEST_CASE("out-of-range points fail validation") {
    ScoringTable table;
    table.intercept = 0;
    table.rows.push_back({{"x", Comparator::GreaterEq, 1.0}, 7});
    CHECK_THROWS_AS(table.validate(), ValidationError);
    CHECK_THROWS_AS(ScoringTable::from_text("intercept 0\nx >= 1 7\n"), ValidationError);
    ScoringTable offset;
    offset.intercept = 101;
    CHECK_THROWS_AS(offset.validate(), ValidationError);
}

TEST_CASE("parse error carries a line number") {
    try {
        ScoringTable::from_text("intercept 0\nx >= \n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(ScoringTable::from_text("x >= 1 1\n"), ParseError);  // no intercept
}

TEST_CASE("probability is in (0,1), increasing in score, unaffected by zero rows") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        ScoringTable table;
        table.intercept = static_cast<int>(rng.below(9)) - 4;
        int rows = 1 + static_cast<int>(rng.below(4));
        for (int r = 0; r < rows; ++r)
            table.rows.push_back({{"x", Comparator::GreaterEq,
                                   static_cast<double>(rng.below(6))},
                                  static_cast<int>(rng.below(11)) - 5});
        double value = static_cast<double>(rng.below(8));
        Dataset d = single_record({{"x", value}});
        TableScore s = table.evaluate(d.record(0));
        CHECK(s.probability > 0.0);
        CHECK(s.probability < 1.0);

        // Identical inputs give identical outputs.
        TableScore again = table.evaluate(d.record(0));
        CHECK(again.score == s.score);
        CHECK(again.probability == s.probability);

        // A satisfied zero-point row changes nothing.
        ScoringTable padded = table;
        padded.rows.push_back({{"x", Comparator::GreaterEq, 0.0}, 0});
        TableScore p = padded.evaluate(d.record(0));
        CHECK(p.score == s.score);
        CHECK(p.probability == s.probability);
    }

    // Strictly increasing in total score for a fixed intercept.
    for (int score = -6; score < 6; ++score)
        CHECK(logistic(-2.0 + score) < logistic(-2.0 + score + 1));
}
