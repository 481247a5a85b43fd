#pragma once

#include <span>
#include <string>
#include <vector>

#include "riskscore/dataset.hpp"

namespace riskscore {

enum class StumpDirection { Increasing, Decreasing, Binary };

std::string to_string(StumpDirection direction);

// Thresholds for one original feature. Binary features pass through without
// expansion and carry no thresholds.
struct FeatureStumps {
    std::string feature;
    StumpDirection direction = StumpDirection::Increasing;
    std::vector<double> thresholds;  // strictly increasing
};

// Per-feature direction and threshold sets driving the binary expansion.
// Age-family features default to decreasing stumps over 18..60, count
// features to increasing stumps over a pruned integer grid.
struct StumpBasis {
    std::vector<FeatureStumps> features;

    void validate() const;
    const FeatureStumps* find(const std::string& feature) const;

    std::string to_text() const;
    static StumpBasis from_text(const std::string& text, const std::string& origin);
    static StumpBasis load(const std::string& path);
    void save(const std::string& path) const;

    // Data-driven default: decreasing {18..60} for age features, increasing
    // {1..min(max,10)} pruned of degenerate and extreme-tail cuts for counts,
    // passthrough for bool columns. Features with no usable cuts are dropped.
    static StumpBasis defaults(const Dataset& data, std::span<const int> rows,
                               const std::vector<std::string>& features = {},
                               double tail_fraction = 0.01);
    static StumpBasis defaults(const Dataset& data,
                               const std::vector<std::string>& features = {},
                               double tail_fraction = 0.01);
};

struct StumpColumn {
    std::string name;     // feature<=k, feature>=k, or the feature itself
    std::string feature;  // original feature
    StumpDirection direction = StumpDirection::Increasing;
    double threshold = 0;  // unused for Binary
};

// Binary design matrix produced by expanding records against a basis.
struct StumpMatrix {
    std::vector<StumpColumn> columns;
    std::vector<double> values;  // row-major, entries in {0, 1}
    size_t rows = 0;
    size_t cols = 0;

    double at(size_t r, size_t c) const { return values[r * cols + c]; }
    std::vector<std::string> column_names() const;
};

StumpMatrix expand(const Dataset& data, std::span<const int> rows, const StumpBasis& basis);
StumpMatrix expand(const Dataset& data, const StumpBasis& basis);

// Applies Eq. 1 to a single value: the 0/1 stump vector for one feature.
std::vector<double> stump_vector(const FeatureStumps& spec, double value);

// Sum of the coefficients of the feature's stumps active at the given value —
// the per-feature contribution curve of an additive stump model.
double aggregate_contribution(std::span<const double> coefficients,
                              std::span<const StumpColumn> columns,
                              const std::string& feature, double value);

void save_stump_matrix_csv(const std::string& path, const StumpMatrix& matrix);

}  // namespace riskscore
