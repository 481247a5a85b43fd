#pragma once

#include <string>
#include <variant>
#include <vector>

#include "riskscore/dataset.hpp"

namespace riskscore {

enum class Comparator { LessEq, GreaterEq, Eq };

std::string to_string(Comparator op);

// One table row: a single comparison against a named record field. Compound
// conditions are not expressible on purpose; they are materialized as derived
// boolean features upstream.
struct Condition {
    std::string feature;
    Comparator op = Comparator::GreaterEq;
    std::variant<double, std::string> threshold;

    bool holds(const RecordView& record) const;
};

struct ScoringRow {
    Condition condition;
    int points = 0;
};

struct TableScore {
    int score = 0;        // intercept-free sum of satisfied rows
    double probability = 0.0;
};

// Integer-point linear model with a logistic link:
//   Pr(Y = 1) = 1 / (1 + exp(-(intercept + score))).
struct ScoringTable {
    std::vector<ScoringRow> rows;
    int intercept = 0;
    int coef_min = -5;
    int coef_max = 5;

    static constexpr int kOffsetMin = -100;
    static constexpr int kOffsetMax = 100;

    // Throws ValidationError when any points value or the intercept is out of
    // range.
    void validate() const;

    TableScore evaluate(const RecordView& record) const;

    std::string to_text() const;
    std::string to_json() const;
    static ScoringTable from_text(const std::string& text);
    static ScoringTable from_json(const std::string& text);

    static ScoringTable load(const std::string& path);  // text or .json by extension
    void save(const std::string& path) const;
};

double logistic(double x);

}  // namespace riskscore
