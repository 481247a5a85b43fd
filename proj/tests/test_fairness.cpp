#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "riskscore/errors.hpp"
#include "riskscore/fairness.hpp"
#include "riskscore/rng.hpp"

using namespace riskscore;
using test_helpers::pairwise_auc;

namespace {

GroupedScores two_identical_groups() {
    GroupedScores g;
    g.kind = ScoreKind::Probability;
    Rng rng(19);
    for (int i = 0; i < 400; ++i) {
        double score = rng.uniform();
        int label = rng.bernoulli(score) ? 1 : 0;
        for (const char* name : {"A", "B"}) {
            g.scores.push_back(score);
            g.labels.push_back(label);
            g.groups.push_back(name);
        }
    }
    return g;
}

}  // namespace

TEST_CASE("identical groups satisfy every audit with zero gaps") {
    GroupedScores g = two_identical_groups();
    FairnessThresholds t;
    FairnessReport report = audit(g, t);
    CHECK(report.calibration.group_calibrated);
    CHECK(report.calibration.max_gap == 0.0);
    CHECK(report.balance.bpc_satisfied);
    CHECK(report.balance.bnc_satisfied);
    CHECK(report.balance.max_positive_gap == 0.0);
    CHECK(report.balance.max_negative_gap == 0.0);
    CHECK(report.bg_auc.satisfied);
    CHECK(report.bg_auc.range == 0.0);
}

TEST_CASE("a diverging top bin is caught at that bin") {
    // Integer scores 0..13; the groups agree except at 13.
    GroupedScores g;
    g.kind = ScoreKind::RawInteger;
    Rng rng(23);
    for (int score = 0; score <= 13; ++score) {
        double base = 0.05 + 0.02 * score;
        for (int i = 0; i < 60; ++i) {
            double pa = base;
            double pb = score == 13 ? base + 0.5 : base;
            g.scores.push_back(score);
            g.labels.push_back(rng.bernoulli(pa) ? 1 : 0);
            g.groups.push_back("A");
            g.scores.push_back(score);
            g.labels.push_back(rng.bernoulli(pb) ? 1 : 0);
            g.groups.push_back("B");
        }
    }
    FairnessThresholds t;
    CalibrationResult result = calibration(g, t);
    CHECK_FALSE(result.group_calibrated);
    CHECK(result.max_gap_bin == 13.0);
    CHECK(result.max_gap > t.calibration_gap);
}

TEST_CASE("well-calibrated synthetic scores stay near the diagonal") {
    GroupedScores g;
    g.kind = ScoreKind::Probability;
    Rng rng(29);
    for (int i = 0; i < 10000; ++i) {
        double score = rng.uniform();
        g.scores.push_back(score);
        g.labels.push_back(rng.bernoulli(score) ? 1 : 0);
        g.groups.push_back(i % 2 ? "A" : "B");
    }
    FairnessThresholds t;
    CalibrationResult result = calibration(g, t);
    CHECK(result.monotonic);
    for (const auto& cell : result.pooled) {
        double center = (cell.bin_low + cell.bin_high) / 2;
        CHECK(std::abs(cell.positive_fraction - center) < 0.03);
    }
}

TEST_CASE("monotonic tolerance allows small dips only") {
    GroupedScores g;
    g.kind = ScoreKind::RawInteger;
    // Bin fractions 0.10, 0.30, 0.295: dip of 0.005 tolerated.
    auto add_bin = [&](double score, int positives, int total) {
        for (int i = 0; i < total; ++i) {
            g.scores.push_back(score);
            g.labels.push_back(i < positives ? 1 : 0);
            g.groups.push_back("A");
        }
    };
    add_bin(0, 100, 1000);
    add_bin(1, 300, 1000);
    add_bin(2, 295, 1000);
    FairnessThresholds t;
    CHECK(calibration(g, t).monotonic);

    GroupedScores bad = g;
    for (size_t i = 0; i < bad.scores.size(); ++i)
        if (bad.scores[i] == 2.0) bad.labels[i] = i % 4 == 0 ? 1 : 0;  // drops to 0.25
    CalibrationResult result = calibration(bad, t);
    CHECK_FALSE(result.monotonic);
    CHECK(result.worst_decrease > t.monotonic_tolerance);
}

TEST_CASE("balance examples from printed gap values") {
    FairnessThresholds t;
    // Group A positives average 0.7; group B positives average 0.7.
    GroupedScores equal;
    equal.kind = ScoreKind::Probability;
    equal.scores = {0.6, 0.8, 0.7, 0.7};
    equal.labels = {1, 1, 1, 1};
    equal.groups = {"A", "A", "B", "B"};
    BalanceResult r = bpc_bnc(equal, t);
    CHECK(r.max_positive_gap == 0.0);
    CHECK(r.bpc_satisfied);
    CHECK_FALSE(r.warnings.empty());  // no negatives anywhere

    // Probability scores with a 0.04 positive-class gender gap: violated at 0.03.
    GroupedScores prob;
    prob.kind = ScoreKind::Probability;
    prob.scores = {0.30, 0.30, 0.34, 0.34, 0.1, 0.1};
    prob.labels = {1, 1, 1, 1, 0, 0};
    prob.groups = {"female", "female", "male", "male", "female", "male"};
    r = bpc_bnc(prob, t);
    CHECK(r.max_positive_gap == doctest::Approx(0.04).epsilon(1e-12));
    CHECK_FALSE(r.bpc_satisfied);
    CHECK(r.bnc_satisfied);
    CHECK(r.threshold_used == 0.03);

    // Raw scores with a 0.79 negative-class race gap: violated at 0.4.
    GroupedScores raw;
    raw.kind = ScoreKind::RawInteger;
    raw.scores = {3.0, 3.0, 3.79, 3.79, 5, 5};
    raw.labels = {0, 0, 0, 0, 1, 1};
    raw.groups = {"Cauc", "Cauc", "AfrAm", "AfrAm", "Cauc", "AfrAm"};
    r = bpc_bnc(raw, t);
    CHECK(r.max_negative_gap == doctest::Approx(0.79).epsilon(1e-12));
    CHECK_FALSE(r.bnc_satisfied);
    CHECK(r.threshold_used == 0.4);
}

TEST_CASE("balance gaps are symmetric in group naming") {
    GroupedScores g;
    g.kind = ScoreKind::Probability;
    Rng rng(31);
    for (int i = 0; i < 200; ++i) {
        g.scores.push_back(rng.uniform());
        g.labels.push_back(rng.bernoulli(0.4) ? 1 : 0);
        g.groups.push_back(i % 3 == 0 ? "x" : (i % 3 == 1 ? "y" : "z"));
    }
    FairnessThresholds t;
    BalanceResult forward = bpc_bnc(g, t);
    GroupedScores renamed = g;
    for (auto& name : renamed.groups) name = name == "x" ? "z" : (name == "z" ? "x" : "y");
    BalanceResult backward = bpc_bnc(renamed, t);
    CHECK(forward.max_positive_gap == doctest::Approx(backward.max_positive_gap));
    CHECK(forward.max_negative_gap == doctest::Approx(backward.max_negative_gap));
}

TEST_CASE("per-group AUC matches the pairwise oracle and excludes single-class groups") {
    GroupedScores g;
    g.kind = ScoreKind::Probability;
    Rng rng(37);
    std::vector<double> a_scores, b_scores;
    std::vector<int> a_labels, b_labels;
    for (int i = 0; i < 30; ++i) {
        double s = rng.uniform();
        int label = rng.bernoulli(s) ? 1 : 0;
        if (i % 2) {
            a_scores.push_back(s);
            a_labels.push_back(label);
            g.groups.push_back("A");
        } else {
            b_scores.push_back(s);
            b_labels.push_back(label);
            g.groups.push_back("B");
        }
        g.scores.push_back(s);
        g.labels.push_back(label);
    }
    a_labels[0] = 0;
    a_labels[1] = 1;
    b_labels[0] = 0;
    b_labels[1] = 1;
    // Rebuild the flat arrays after the tweaks.
    g.scores.clear();
    g.labels.clear();
    g.groups.clear();
    for (size_t i = 0; i < a_scores.size(); ++i) {
        g.scores.push_back(a_scores[i]);
        g.labels.push_back(a_labels[i]);
        g.groups.push_back("A");
    }
    for (size_t i = 0; i < b_scores.size(); ++i) {
        g.scores.push_back(b_scores[i]);
        g.labels.push_back(b_labels[i]);
        g.groups.push_back("B");
    }
    // And one single-class group.
    for (int i = 0; i < 5; ++i) {
        g.scores.push_back(0.9);
        g.labels.push_back(1);
        g.groups.push_back("C");
    }
    FairnessThresholds t;
    BgAucResult result = bg_auc(g, t);
    REQUIRE(result.per_group.size() == 2);
    CHECK(result.per_group[0].mean_score == pairwise_auc(a_scores, a_labels));
    CHECK(result.per_group[1].mean_score == pairwise_auc(b_scores, b_labels));
    REQUIRE(result.excluded.size() == 1);
    CHECK(result.excluded[0].find("C") != std::string::npos);
}

TEST_CASE("bg_auc verdict arithmetic on reference per-group values") {
    double range = 0;
    CHECK(bg_auc_verdict(std::vector<double>{0.692, 0.713}, 0.03, range));
    CHECK(range == doctest::Approx(0.021).epsilon(1e-9));
    CHECK(bg_auc_verdict(std::vector<double>{0.705, 0.708}, 0.03, range));
    CHECK(range == doctest::Approx(0.003).epsilon(1e-9));
    // Including the small third group blows the range past the rule.
    CHECK_FALSE(bg_auc_verdict(std::vector<double>{0.705, 0.708, 0.620}, 0.03, range));
    CHECK(range == doctest::Approx(0.088).epsilon(1e-9));
}

TEST_CASE("kleinberg consistency: equal base rates and calibrated scores pass all three") {
    GroupedScores g;
    g.kind = ScoreKind::Probability;
    Rng rng(41);
    for (int i = 0; i < 200000; ++i) {
        double score = rng.uniform();
        g.scores.push_back(score);
        g.labels.push_back(rng.bernoulli(score) ? 1 : 0);
        g.groups.push_back(i % 2 ? "A" : "B");
    }
    FairnessThresholds t;
    FairnessReport report = audit(g, t);
    CHECK(report.calibration.group_calibrated);
    CHECK(report.calibration.monotonic);
    CHECK(report.balance.bpc_satisfied);
    CHECK(report.balance.bnc_satisfied);
    CHECK(report.bg_auc.satisfied);
}

TEST_CASE("audit input validation") {
    GroupedScores empty;
    FairnessThresholds t;
    CHECK_THROWS_AS(calibration(empty, t), AuditError);
    GroupedScores ragged;
    ragged.scores = {0.5};
    CHECK_THROWS_AS(bpc_bnc(ragged, t), AuditError);
}

TEST_CASE("base rates per group and overall") {
    Schema schema = test_helpers::labeled_schema({"x"}, /*with_sensitive=*/true);
    Dataset data(schema);
    Rng rng(43);
    int positives = 0;
    for (int i = 0; i < 5000; ++i) {
        RecordData rec = test_helpers::row({{"x", 1.0}}, "r" + std::to_string(i));
        rec.strings["race"] = i % 2 ? "A" : "B";
        rec.has_labels = true;
        for (int t2 = 0; t2 < 6; ++t2) {
            rec.labels.two_year[t2] = rng.bernoulli(0.2);
            rec.labels.six_month[t2] = rec.labels.two_year[t2] && rng.bernoulli(0.3);
        }
        positives += rec.labels.two_year[0];
        data.append(rec);
    }
    auto rows = base_rates(data, "race");
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows)
        for (int i = 0; i < 12; i += 2) CHECK(std::abs(row.rates[i] - 0.2) < 0.04);
    CHECK_THROWS_AS(base_rates(data, "unknown"), SchemaError);

    // Single group: the one row equals the overall rate.
    Dataset solo(schema);
    for (int i = 0; i < 100; ++i) {
        RecordData rec = test_helpers::row({{"x", 1.0}}, "s" + std::to_string(i));
        rec.strings["race"] = "only";
        rec.has_labels = true;
        rec.labels.two_year[0] = i < 30;
        solo.append(rec);
    }
    auto solo_rows = base_rates(solo, "race");
    REQUIRE(solo_rows.size() == 1);
    CHECK(solo_rows[0].rates[0] == doctest::Approx(0.3));
}
