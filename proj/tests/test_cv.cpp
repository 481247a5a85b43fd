#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "riskscore/cross_validation.hpp"
#include "riskscore/errors.hpp"

using namespace riskscore;
using test_helpers::labeled_row;
using test_helpers::labeled_schema;

namespace {

// Scores records by one feature, optionally flipped by the "direction"
// hyperparameter; refuses single-class training data like the real trainers.
class FeatureTrainer : public Trainer {
public:
    explicit FeatureTrainer(std::string feature) : feature_(std::move(feature)) {}

    ScoreFn fit(const Dataset& data, std::span<const int> rows, const std::string& label,
                const HyperPoint& params) const override {
        auto y = data.label_column(label, rows);
        size_t positives = 0;
        for (int v : y) positives += v != 0;
        if (positives == 0 || positives == y.size())
            throw DegenerateLabelError("labels contain a single class");
        double direction = params.get("direction", 1.0);
        std::string feature = feature_;
        return [feature, direction](const Dataset& eval, std::span<const int> eval_rows) {
            std::vector<double> out(eval_rows.size());
            for (size_t i = 0; i < eval_rows.size(); ++i)
                out[i] = direction * eval.record(eval_rows[i]).numeric(feature);
            return out;
        };
    }

private:
    std::string feature_;
};

class ConstantTrainer : public Trainer {
public:
    ScoreFn fit(const Dataset&, std::span<const int>, const std::string&,
                const HyperPoint&) const override {
        return [](const Dataset&, std::span<const int> rows) {
            return std::vector<double>(rows.size(), 0.5);
        };
    }
};

Dataset threshold_dataset(int n, double cut, bool invert = false) {
    Dataset data(labeled_schema({"x"}));
    for (int i = 0; i < n; ++i) {
        double x = static_cast<double>(i % 10);
        bool label = invert ? x < cut : x >= cut;
        data.append(labeled_row({{"x", x}}, label, "r" + std::to_string(i)));
    }
    return data;
}

}  // namespace

TEST_CASE("folds partition the index set with balanced sizes") {
    CVOptions options;
    options.folds = 5;
    options.seed = 3;
    auto folds = make_folds(10, options, {});
    std::set<int> seen;
    for (const auto& fold : folds) {
        CHECK(fold.size() == 2);  // 10 records, 5 folds
        for (int r : fold) CHECK(seen.insert(r).second);
    }
    CHECK(seen.size() == 10);

    auto again = make_folds(10, options, {});
    CHECK(again == folds);

    auto uneven = make_folds(11, options, {});
    size_t total = 0;
    for (const auto& fold : uneven) {
        total += fold.size();
        CHECK(fold.size() >= 2);
        CHECK(fold.size() <= 3);
    }
    CHECK(total == 11);
}

TEST_CASE("stratified folds spread the positives evenly") {
    std::vector<int> labels(20, 0);
    for (int i = 0; i < 5; ++i) labels[i * 4] = 1;
    CVOptions options;
    options.folds = 5;
    options.seed = 9;
    options.stratify = true;
    auto folds = make_folds(20, options, labels);
    for (const auto& fold : folds) {
        int positives = 0;
        for (int r : fold) positives += labels[r];
        CHECK(positives == 1);
    }
}

TEST_CASE("constant scores give AUC one half on every fold") {
    Dataset data = threshold_dataset(20, 5);
    ConstantTrainer trainer;
    CVOptions options;
    options.folds = 5;
    options.seed = 1;
    options.stratify = true;  // guarantees both classes in every fold
    CVResult result = nested_cv(data, "general_two_year", trainer,
                                HyperGrid::single_point(), options);
    CHECK(result.skipped_count == 0);
    for (const auto& fold : result.folds) CHECK(fold.auc == 0.5);
    CHECK(result.mean_auc == 0.5);
    CHECK(result.std_auc == 0.0);
}

TEST_CASE("nested_cv is deterministic under a fixed seed") {
    Dataset data = threshold_dataset(30, 4);
    FeatureTrainer trainer("x");
    CVOptions options;
    options.folds = 5;
    options.seed = 12;
    HyperGrid grid = HyperGrid::over("direction", std::vector<double>{1.0, -1.0});
    CVResult a = nested_cv(data, "general_two_year", trainer, grid, options);
    CVResult b = nested_cv(data, "general_two_year", trainer, grid, options);
    REQUIRE(a.folds.size() == b.folds.size());
    for (size_t i = 0; i < a.folds.size(); ++i) {
        CHECK(a.folds[i].auc == b.folds[i].auc);
        CHECK(a.folds[i].params.describe() == b.folds[i].params.describe());
    }
    CHECK(a.mean_auc == b.mean_auc);
}

TEST_CASE("inner grid search picks the direction that ranks correctly") {
    Dataset data = threshold_dataset(40, 5);
    FeatureTrainer trainer("x");
    CVOptions options;
    options.folds = 5;
    options.seed = 4;
    options.stratify = true;
    HyperGrid grid = HyperGrid::over("direction", std::vector<double>{-1.0, 1.0});
    CVResult result = nested_cv(data, "general_two_year", trainer, grid, options);
    CHECK(result.skipped_count == 0);
    for (const auto& fold : result.folds) {
        CHECK(fold.params.get("direction", 0) == 1.0);
        CHECK(fold.auc == 1.0);  // x >= 5 is exactly the label rule
    }
}

TEST_CASE("degenerate folds are skipped and reported, never imputed") {
    // Two positives among 15 records: any all-negative test fold must be
    // skipped, and so must any fold whose training half is single-class.
    std::vector<int> labels(15, 0);
    labels[3] = labels[11] = 1;
    Dataset data(labeled_schema({"x"}));
    for (int i = 0; i < 15; ++i)
        data.append(labeled_row({{"x", static_cast<double>(i)}}, labels[i] != 0,
                                "r" + std::to_string(i)));
    FeatureTrainer trainer("x");
    CVOptions options;
    options.folds = 5;
    options.seed = 2;

    // Derive the expected skips from the fold assignment itself.
    auto folds = make_folds(15, options, {});
    int expected_skipped = 0;
    for (const auto& fold : folds) {
        int test_pos = 0;
        for (int r : fold) test_pos += labels[r];
        int train_pos = 2 - test_pos;
        bool test_degenerate = test_pos == 0 || test_pos == static_cast<int>(fold.size());
        bool train_degenerate = train_pos == 0;
        if (test_degenerate || train_degenerate) ++expected_skipped;
    }
    REQUIRE(expected_skipped > 0);  // seed 2 spreads the positives apart

    CVResult result = nested_cv(data, "general_two_year", trainer,
                                HyperGrid::single_point(), options);
    CHECK(result.skipped_count == expected_skipped);
    for (const auto& fold : result.folds)
        if (fold.skipped) CHECK_FALSE(fold.skip_reason.empty());
}

TEST_CASE("empty grid is a config error") {
    Dataset data = threshold_dataset(10, 5);
    FeatureTrainer trainer("x");
    CVOptions options;
    CHECK_THROWS_AS(nested_cv(data, "general_two_year", trainer, HyperGrid{}, options),
                    ConfigError);
}

TEST_CASE("cross_region: source == target reproduces within-region ranking") {
    Dataset source = threshold_dataset(40, 5);
    FeatureTrainer trainer("x");
    CVOptions options;
    options.folds = 5;
    options.seed = 8;
    options.stratify = true;
    XRegionResult result = cross_region(source, source, "general_two_year", trainer,
                                        HyperGrid::single_point(), options);
    REQUIRE(result.target_auc.size() == result.source_holdout_auc.size());
    CHECK(result.mean_target == 1.0);
    CHECK(result.mean_source == 1.0);
}

TEST_CASE("cross_region: inverted target scores below one half") {
    Dataset source = threshold_dataset(40, 5);
    Dataset target = threshold_dataset(40, 5, /*invert=*/true);
    FeatureTrainer trainer("x");
    CVOptions options;
    options.folds = 5;
    options.seed = 8;
    options.stratify = true;
    XRegionResult result = cross_region(source, target, "general_two_year", trainer,
                                        HyperGrid::single_point(), options);
    CHECK(result.mean_source > 0.5);
    CHECK(result.mean_target < 0.5);
}

TEST_CASE("cross_region rejects disjoint schemas") {
    Dataset source = threshold_dataset(20, 5);
    Dataset other(labeled_schema({"z"}));
    for (int i = 0; i < 20; ++i)
        other.append(labeled_row({{"z", 1.0 * i}}, i % 2, "o" + std::to_string(i)));
    FeatureTrainer trainer("x");
    CVOptions options;
    CHECK_THROWS_AS(cross_region(source, other, "general_two_year", trainer,
                                 HyperGrid::single_point(), options),
                    SchemaError);
}
