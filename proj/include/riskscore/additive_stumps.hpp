#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "riskscore/dataset.hpp"
#include "riskscore/logistic.hpp"
#include "riskscore/stumps.hpp"
#include "riskscore/train_config.hpp"

namespace riskscore {

struct ContributionPoint {
    double value = 0;
    double contribution = 0;
};

// L1-penalized logistic model over stump columns, kept sparse enough in
// original features to stay visualizable.
struct AdditiveStumpsModel {
    LogisticModel model;  // coefficients aligned with columns
    std::vector<StumpColumn> columns;
    double chosen_C = 0;
    std::vector<std::string> used_features;  // originals with any nonzero stump
    std::map<std::string, std::vector<ContributionPoint>> curves;

    double probability(const RecordView& record) const;
    double contribution(const std::string& feature, double value) const;
};

// Fits at each C in the grid and keeps the largest C whose model touches at
// most config.max_original_features original features. Throws ConfigError
// when no grid value meets the cap.
AdditiveStumpsModel fit_additive_stumps(const Dataset& data, std::span<const int> rows,
                                        const StumpBasis& basis, const std::string& label,
                                        const TrainConfig& config);

// Single-C fit with the cap enforced; used by the CV harness.
AdditiveStumpsModel fit_additive_stumps_at(const Dataset& data, std::span<const int> rows,
                                           const StumpBasis& basis,
                                           const std::string& label, double C,
                                           const TrainConfig& config);

void save_coefficient_csv(const std::string& path, std::span<const std::string> names,
                          std::span<const double> coefficients, double intercept);

}  // namespace riskscore
