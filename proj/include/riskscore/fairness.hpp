#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "riskscore/dataset.hpp"

namespace riskscore {

enum class ScoreKind { Probability, RawInteger };

// One row per record: score, outcome, and the value of a single sensitive
// attribute.
struct GroupedScores {
    std::vector<double> scores;
    std::vector<int> labels;
    std::vector<std::string> groups;
    ScoreKind kind = ScoreKind::Probability;

    void validate() const;
    std::vector<std::string> group_names() const;  // sorted, distinct
};

struct FairnessThresholds {
    double calibration_gap = 0.03;
    double probability_balance = 0.03;  // BPC/BNC threshold for probabilities
    double raw_balance = 0.4;           // BPC/BNC threshold for raw scores
    double auc_range = 0.03;
    double monotonic_tolerance = 0.01;  // tolerated adjacent-bin decrease
    int min_cell_count = 30;            // calibration cells below this are flagged
    int probability_bins = 10;

    double balance_for(ScoreKind kind) const {
        return kind == ScoreKind::Probability ? probability_balance : raw_balance;
    }
};

struct CalibrationCell {
    std::string group;
    double bin_low = 0;
    double bin_high = 0;
    double positive_fraction = 0;
    int count = 0;
    bool low_count = false;  // excluded from the verdict, still reported
};

struct CalibrationResult {
    std::vector<CalibrationCell> cells;   // per (bin, group), bin-major
    std::vector<CalibrationCell> pooled;  // all groups together, per bin
    bool group_calibrated = true;
    double max_gap = 0;
    double max_gap_bin = 0;
    std::string max_gap_group_a, max_gap_group_b;
    bool monotonic = true;
    double worst_decrease = 0;
    double threshold_used = 0;
    double monotonic_tolerance_used = 0;
    std::vector<std::string> flags;
};

struct BalanceEntry {
    std::string group;
    double mean_score = 0;
    int count = 0;
};

struct BalanceGap {
    std::string group_a, group_b;
    double gap = 0;
};

// BPC/BNC: mean score per (group, class) with pairwise gaps and verdicts.
struct BalanceResult {
    std::vector<BalanceEntry> positive_means, negative_means;
    std::vector<BalanceGap> positive_gaps, negative_gaps;
    double max_positive_gap = 0, max_negative_gap = 0;
    bool bpc_satisfied = true, bnc_satisfied = true;
    double threshold_used = 0;
    std::vector<std::string> warnings;  // empty (group, class) cells
};

struct BgAucResult {
    std::vector<BalanceEntry> per_group;  // mean_score holds the group AUC
    double range = 0;
    bool satisfied = true;
    double threshold_used = 0;
    std::vector<std::string> excluded;  // single-class groups, with reasons
};

struct FairnessReport {
    CalibrationResult calibration;
    BalanceResult balance;
    BgAucResult bg_auc;
    FairnessThresholds thresholds;
    ScoreKind kind = ScoreKind::Probability;

    std::string to_json_text() const;
    // group,bin_low,bin_high,positive_fraction,count rows for plotting.
    std::string curves_csv() const;
    std::string summary_text() const;
};

CalibrationResult calibration(const GroupedScores& grouped,
                              const FairnessThresholds& thresholds);
BalanceResult bpc_bnc(const GroupedScores& grouped, const FairnessThresholds& thresholds);
BgAucResult bg_auc(const GroupedScores& grouped, const FairnessThresholds& thresholds);
FairnessReport audit(const GroupedScores& grouped, const FairnessThresholds& thresholds);

// The range <= threshold arithmetic on already-computed per-group AUCs.
bool bg_auc_verdict(std::span<const double> per_group_auc, double threshold,
                    double& range);

// P(label = 1 | group) for each of the twelve labels.
struct BaseRateRow {
    std::string group;
    int count = 0;
    std::array<double, 12> rates{};  // order matches LabelSet::names()
};
std::vector<BaseRateRow> base_rates(const Dataset& data, const std::string& attribute);

}  // namespace riskscore
