#pragma once

#include <span>
#include <string>
#include <vector>

#include "riskscore/dataset.hpp"
#include "riskscore/logistic.hpp"
#include "riskscore/scoring_table.hpp"
#include "riskscore/stumps.hpp"
#include "riskscore/train_config.hpp"

namespace riskscore {

struct IntegerSearchOptions {
    int coef_min = -5;
    int coef_max = 5;
    int offset_min = -100;
    int offset_max = 100;
    double l0_weight = 1e-6;
    double time_budget_s = 1000.0;
    double target_gap = 0.05;  // stop once (ub - lb) / ub falls below this
};

struct IntegerFit {
    std::vector<int> coefficients;
    int intercept = 0;
    double objective = 0;    // mean logistic loss + l0_weight * nonzeros
    double lower_bound = 0;  // proven
    double gap = 0;          // achieved optimality gap
    bool proven_optimal = false;
};

// Mean logistic loss of an integer model plus the l0 penalty (the intercept
// is not counted as a nonzero).
double integer_objective(const MatrixView& X, std::span<const int> y,
                         std::span<const int> coefficients, int intercept,
                         double l0_weight);

// Best integer intercept for fixed coefficients; the loss is strictly convex
// in the intercept, so a ternary search over the range is exact.
int best_integer_intercept(const MatrixView& X, std::span<const int> y,
                           std::span<const int> coefficients, int offset_min,
                           int offset_max, double* loss_out = nullptr);

// Exact search over integer coefficient vectors by best-first branch and
// bound. Lower bounds come from box-constrained real relaxations on the
// fixed prefix; incumbents from rounding. Stops at the target gap or the
// time budget, whichever comes first, and reports the achieved gap.
IntegerFit solve_integer_logistic(const MatrixView& X, std::span<const int> y,
                                  const IntegerSearchOptions& options);

struct RiskSlimModel {
    ScoringTable table;
    IntegerFit fit;
    std::vector<StumpColumn> screened_columns;
    double screening_C = 0;
};

// Two stages: L1 screening over the stump expansion picks at most
// max_selected_stumps columns, then the integer search assigns points.
RiskSlimModel fit_riskslim_lite(const Dataset& data, std::span<const int> rows,
                                const StumpBasis& basis, const std::string& label,
                                const TrainConfig& config);

}  // namespace riskscore
