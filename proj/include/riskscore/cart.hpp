#pragma once

#include <span>
#include <string>
#include <vector>

#include "riskscore/logistic.hpp"

namespace riskscore {

struct CartConfig {
    int max_depth = 5;
    double min_gain = 0.0;  // information-gain floor, in nats
    int min_leaf = 1;
};

struct CartNode {
    int feature = -1;  // -1 for leaves
    double threshold = 0;
    int left = -1;   // rows with value <= threshold
    int right = -1;
    double probability = 0;  // leaf positive fraction
    int count = 0;

    bool is_leaf() const { return feature < 0; }
};

// Greedy binary tree split on the largest information gain. Ties break to the
// lowest feature index, then the smallest threshold.
struct CartModel {
    std::vector<CartNode> nodes;  // nodes[0] is the root
    CartConfig config;
    std::vector<std::string> feature_names;

    double predict(std::span<const double> features) const;
    std::string to_text() const;
    static CartModel from_text(const std::string& text);
};

CartModel fit_cart(const MatrixView& X, std::span<const int> y,
                   const std::vector<std::string>& feature_names,
                   const CartConfig& config);

}  // namespace riskscore
