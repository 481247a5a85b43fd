#pragma once

#include <cstdint>
#include <vector>

#include "riskscore/config.hpp"
#include "riskscore/logistic.hpp"

namespace riskscore {

// Everything the trainers read from a flat key-value config file. Defaults
// follow the published training setup: C grid {1e-4..1}, coefficient range
// [-5, 5], offset range [-100, 100], l0 weight 1e-6, 1000 s budget, 5% gap.
struct TrainConfig {
    // Decade ladder of inverse penalty strengths; the penalty weight on the
    // mean loss is 1/C.
    std::vector<double> penalty_grid = {0.01, 0.1, 1.0, 10.0, 100.0};
    int max_iterations = 5000;
    double tolerance = 1e-7;
    std::uint64_t seed = 0;
    ClassWeight weighting = ClassWeight::Balanced;
    bool standardize = true;  // raw-feature logistic baselines only

    // riskslim-lite
    int coef_min = -5;
    int coef_max = 5;
    int offset_min = -100;
    int offset_max = 100;
    double l0_weight = 1e-6;
    double time_budget_s = 1000.0;
    double target_gap = 0.05;
    int max_selected_stumps = 20;

    // additive stumps
    int max_original_features = 15;

    // cart
    std::vector<double> depth_grid = {5, 6, 7, 8, 9, 10};
    double min_gain = 0.0;
    int min_leaf = 1;

    // cross validation
    int folds = 5;
    bool stratify = false;

    void validate() const;
    LogisticConfig logistic(Penalty penalty, double C, bool standardize_override) const;

    static TrainConfig from_config(const KeyValueConfig& kv);
    static TrainConfig from_file(const std::string& path);
};

}  // namespace riskscore
