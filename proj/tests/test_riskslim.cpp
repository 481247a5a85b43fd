#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "riskscore/errors.hpp"
#include "riskscore/riskslim.hpp"
#include "riskscore/rng.hpp"

using namespace riskscore;

namespace {

struct Instance {
    std::vector<double> X;
    std::vector<int> y;
    size_t rows = 0, cols = 0;
    MatrixView view() const { return {X.data(), rows, cols}; }
};

Instance random_binary_instance(Rng& rng, size_t rows, size_t cols) {
    Instance inst;
    inst.rows = rows;
    inst.cols = cols;
    inst.X.resize(rows * cols);
    for (auto& v : inst.X) v = rng.bernoulli(0.5) ? 1.0 : 0.0;
    inst.y.resize(rows);
    bool saw[2] = {false, false};
    for (size_t i = 0; i < rows; ++i) {
        inst.y[i] = rng.bernoulli(0.5) ? 1 : 0;
        saw[inst.y[i]] = true;
    }
    if (!saw[0]) inst.y[0] = 0;
    if (!saw[1]) inst.y[rows - 1] = 1;
    return inst;
}

// Exhaustive oracle: every integer coefficient vector, with the intercept
// minimized by a convexity-pruned scan. Independent of the solver's search.
double exhaustive_optimum(const Instance& inst, const IntegerSearchOptions& opt) {
    std::vector<int> combo(inst.cols, opt.coef_min);
    double best = 1e300;
    while (true) {
        // Convex in the intercept: scan until the loss turns upward.
        double combo_best = 1e300;
        double prev = 1e300;
        for (int b = opt.offset_min; b <= opt.offset_max; ++b) {
            double total = 0;
            for (size_t i = 0; i < inst.rows; ++i) {
                double eta = b;
                for (size_t j = 0; j < inst.cols; ++j)
                    eta += combo[j] * inst.X[i * inst.cols + j];
                double sign = inst.y[i] ? 1.0 : -1.0;
                total += log1pexp(-sign * eta);
            }
            total /= static_cast<double>(inst.rows);
            combo_best = std::min(combo_best, total);
            if (total > prev) break;
            prev = total;
        }
        int nonzeros = 0;
        for (int c : combo) nonzeros += c != 0;
        best = std::min(best, combo_best + opt.l0_weight * nonzeros);

        size_t pos = 0;
        while (pos < inst.cols && combo[pos] == opt.coef_max) combo[pos++] = opt.coef_min;
        if (pos == inst.cols) break;
        ++combo[pos];
    }
    return best;
}

}  // namespace

TEST_CASE("intercept-only search finds the 1-D optimum") {
    Instance inst;
    inst.rows = 10;
    inst.cols = 0;
    inst.y = {1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
    IntegerSearchOptions opt;
    opt.target_gap = 0;
    IntegerFit fit = solve_integer_logistic(inst.view(), inst.y, opt);
    CHECK(fit.coefficients.empty());
    CHECK(fit.proven_optimal);
    // Loss at the returned intercept beats its neighbours.
    double at = integer_objective(inst.view(), inst.y, fit.coefficients, fit.intercept,
                                  opt.l0_weight);
    for (int b : {fit.intercept - 1, fit.intercept + 1}) {
        if (b < opt.offset_min || b > opt.offset_max) continue;
        CHECK(at <= integer_objective(inst.view(), inst.y, fit.coefficients, b,
                                      opt.l0_weight) + 1e-15);
    }
}

TEST_CASE("single stump matches enumeration over all coefficient-intercept pairs") {
    Rng rng(7);
    Instance inst = random_binary_instance(rng, 20, 1);
    IntegerSearchOptions opt;
    opt.target_gap = 0;
    IntegerFit fit = solve_integer_logistic(inst.view(), inst.y, opt);
    double oracle = exhaustive_optimum(inst, opt);
    CHECK(std::abs(fit.objective - oracle) < 1e-9);
    CHECK(fit.proven_optimal);
}

TEST_CASE("branch and bound equals the exhaustive optimum on tiny instances") {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        size_t cols = 1 + rng.below(3);
        Instance inst = random_binary_instance(rng, 12 + rng.below(14), cols);
        IntegerSearchOptions opt;
        opt.target_gap = 0;
        IntegerFit fit = solve_integer_logistic(inst.view(), inst.y, opt);
        double oracle = exhaustive_optimum(inst, opt);
        CHECK(std::abs(fit.objective - oracle) < 1e-9);
        double recomputed = integer_objective(inst.view(), inst.y, fit.coefficients,
                                              fit.intercept, opt.l0_weight);
        CHECK(std::abs(recomputed - fit.objective) < 1e-12);
        for (int c : fit.coefficients) {
            CHECK(c >= opt.coef_min);
            CHECK(c <= opt.coef_max);
        }
    }
}

TEST_CASE("separable toy data gets positive points on the separating stump") {
    // Feature 0 perfectly separates; feature 1 is noise.
    Instance inst;
    inst.rows = 16;
    inst.cols = 2;
    Rng rng(3);
    inst.X.resize(32);
    inst.y.resize(16);
    for (size_t i = 0; i < 16; ++i) {
        inst.y[i] = i < 8 ? 1 : 0;
        inst.X[i * 2] = inst.y[i];
        inst.X[i * 2 + 1] = rng.bernoulli(0.5);
    }
    IntegerSearchOptions opt;
    opt.target_gap = 0;
    IntegerFit fit = solve_integer_logistic(inst.view(), inst.y, opt);
    CHECK(fit.coefficients[0] > 0);
    double oracle = exhaustive_optimum(inst, opt);
    CHECK(std::abs(fit.objective - oracle) < 1e-9);
}

TEST_CASE("bad ranges are config errors") {
    Instance inst;
    inst.rows = 4;
    inst.cols = 1;
    inst.X = {0, 1, 0, 1};
    inst.y = {0, 1, 0, 1};
    IntegerSearchOptions opt;
    opt.coef_min = 3;
    opt.coef_max = -3;
    CHECK_THROWS_AS(solve_integer_logistic(inst.view(), inst.y, opt), ConfigError);
}

TEST_CASE("fit_riskslim_lite screens stumps and emits a valid scoring table") {
    // Plant a strong signal on p_arrest >= 2.
    Schema schema = test_helpers::labeled_schema({"p_arrest"}, false, ColumnType::Int);
    Dataset data(schema);
    Rng rng(29);
    for (int i = 0; i < 120; ++i) {
        int arrests = static_cast<int>(rng.below(6));
        RecordData rec = test_helpers::row({{"p_arrest", static_cast<double>(arrests)}},
                                           "r" + std::to_string(i));
        double p = arrests >= 2 ? 0.8 : 0.2;
        rec.has_labels = true;
        rec.labels.two_year[0] = rng.bernoulli(p);
        data.append(rec);
    }
    StumpBasis basis;
    basis.features.push_back({"p_arrest", StumpDirection::Increasing, {1, 2, 3, 4, 5}});

    TrainConfig config;
    config.penalty_grid = {1.0, 10.0, 40.0};
    config.target_gap = 0;
    config.max_selected_stumps = 3;
    std::vector<int> rows(data.size());
    for (size_t i = 0; i < data.size(); ++i) rows[i] = static_cast<int>(i);
    RiskSlimModel model = fit_riskslim_lite(data, rows, basis, "general_two_year", config);

    CHECK(model.screened_columns.size() <= 3);
    CHECK_NOTHROW(model.table.validate());
    CHECK(model.fit.proven_optimal);
    // The table must put positive points on an arrest stump.
    bool positive_arrest_row = false;
    for (const auto& row : model.table.rows)
        if (row.condition.feature == "p_arrest" && row.points > 0)
            positive_arrest_row = true;
    CHECK(positive_arrest_row);

    // Probabilities rise with the arrest count.
    Dataset lo = test_helpers::single_record({{"p_arrest", 0}});
    Dataset hi = test_helpers::single_record({{"p_arrest", 5}});
    CHECK(model.table.evaluate(hi.record(0)).probability >
          model.table.evaluate(lo.record(0)).probability);
}

TEST_CASE("zero screened stumps yields an intercept-only table") {
    Schema schema = test_helpers::labeled_schema({"p_arrest"}, false, ColumnType::Int);
    Dataset data(schema);
    Rng rng(31);
    for (int i = 0; i < 60; ++i) {
        RecordData rec = test_helpers::row(
            {{"p_arrest", static_cast<double>(rng.below(4))}}, "r" + std::to_string(i));
        rec.has_labels = true;
        rec.labels.two_year[0] = rng.bernoulli(0.3);  // independent of the feature
        data.append(rec);
    }
    StumpBasis basis;
    basis.features.push_back({"p_arrest", StumpDirection::Increasing, {1, 2, 3}});
    TrainConfig config;
    config.penalty_grid = {1e-6};  // crushing penalty: nothing survives screening
    config.target_gap = 0;
    std::vector<int> rows(data.size());
    for (size_t i = 0; i < data.size(); ++i) rows[i] = static_cast<int>(i);
    RiskSlimModel model = fit_riskslim_lite(data, rows, basis, "general_two_year", config);
    CHECK(model.table.rows.empty());
    CHECK(model.fit.coefficients.empty());
}

TEST_CASE("end-to-end fit agrees with enumeration over its screened stumps") {
    Schema schema = test_helpers::labeled_schema({"p_arrest"}, false, ColumnType::Int);
    Dataset data(schema);
    Rng rng(47);
    for (int i = 0; i < 80; ++i) {
        int arrests = static_cast<int>(rng.below(5));
        RecordData rec = test_helpers::row({{"p_arrest", static_cast<double>(arrests)}},
                                           "r" + std::to_string(i));
        rec.has_labels = true;
        rec.labels.two_year[0] = rng.bernoulli(arrests >= 2 ? 0.75 : 0.25);
        data.append(rec);
    }
    StumpBasis basis;
    basis.features.push_back({"p_arrest", StumpDirection::Increasing, {1, 2, 3}});
    TrainConfig config;
    config.penalty_grid = {40.0};
    config.target_gap = 0;
    std::vector<int> rows(data.size());
    for (size_t i = 0; i < data.size(); ++i) rows[i] = static_cast<int>(i);
    RiskSlimModel model = fit_riskslim_lite(data, rows, basis, "general_two_year", config);
    REQUIRE(!model.screened_columns.empty());
    REQUIRE(model.screened_columns.size() <= 3);

    // Rebuild the screened design matrix and enumerate.
    StumpMatrix full = expand(data, basis);
    Instance reduced;
    reduced.rows = full.rows;
    reduced.cols = model.screened_columns.size();
    reduced.y = data.label_column("general_two_year");
    reduced.X.resize(reduced.rows * reduced.cols);
    for (size_t c = 0; c < reduced.cols; ++c) {
        size_t src = 0;
        while (full.columns[src].name != model.screened_columns[c].name) ++src;
        for (size_t r = 0; r < reduced.rows; ++r)
            reduced.X[r * reduced.cols + c] = full.at(r, src);
    }
    IntegerSearchOptions opt;
    opt.l0_weight = config.l0_weight;
    double oracle = exhaustive_optimum(reduced, opt);
    CHECK(std::abs(model.fit.objective - oracle) < 1e-9);

    // Deterministic: refitting gives the identical table.
    RiskSlimModel again = fit_riskslim_lite(data, rows, basis, "general_two_year", config);
    CHECK(again.table.to_text() == model.table.to_text());
}

TEST_CASE("train config defaults and validation") {
    TrainConfig config;
    CHECK(config.l0_weight == 1e-6);
    CHECK(config.target_gap == 0.05);
    CHECK(config.time_budget_s == 1000.0);
    CHECK(config.coef_min == -5);
    CHECK(config.coef_max == 5);
    CHECK(config.offset_min == -100);
    CHECK(config.offset_max == 100);
    CHECK(config.max_selected_stumps == 20);
    CHECK(config.max_original_features == 15);
    CHECK_NOTHROW(config.validate());

    TrainConfig empty_grid;
    empty_grid.penalty_grid = {};
    CHECK_THROWS_AS(empty_grid.validate(), ConfigError);
    TrainConfig bad_tol;
    bad_tol.tolerance = 0;
    CHECK_THROWS_AS(bad_tol.validate(), ConfigError);
    TrainConfig bad_range;
    bad_range.coef_min = 6;
    CHECK_THROWS_AS(bad_range.validate(), ConfigError);
}
