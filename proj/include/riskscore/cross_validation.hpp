#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskscore/dataset.hpp"
#include "riskscore/stumps.hpp"
#include "riskscore/train_config.hpp"

namespace riskscore {

struct HyperPoint {
    std::map<std::string, double> values;

    double get(const std::string& key, double fallback) const;
    std::string describe() const;
};

struct HyperGrid {
    std::vector<HyperPoint> points;

    static HyperGrid single_point() { return HyperGrid{{HyperPoint{}}}; }
    static HyperGrid over(const std::string& key, std::span<const double> values);
};

// Batch scorer produced by a fitted model; rows index into the given dataset.
using ScoreFn = std::function<std::vector<double>(const Dataset&, std::span<const int>)>;

class Trainer {
public:
    virtual ~Trainer() = default;
    virtual ScoreFn fit(const Dataset& data, std::span<const int> rows,
                        const std::string& label, const HyperPoint& params) const = 0;
};

// Model kinds: l1, l2, stumps, riskslim, cart. A null basis means each fit
// derives the default basis from its own training rows.
std::unique_ptr<Trainer> make_trainer(const std::string& kind, const TrainConfig& config,
                                      std::shared_ptr<const StumpBasis> basis = nullptr);
HyperGrid default_grid(const std::string& kind, const TrainConfig& config);

struct CVOptions {
    int folds = 5;
    std::uint64_t seed = 0;
    bool stratify = false;
};

// Seeded shuffle then contiguous blocks; with stratify, per-class blocks are
// dealt proportionally. Folds partition 0..n-1.
std::vector<std::vector<int>> make_folds(size_t n, const CVOptions& options,
                                         std::span<const int> labels);

struct FoldResult {
    int fold = 0;
    double auc = 0;
    HyperPoint params;
    bool skipped = false;
    std::string skip_reason;
};

struct CVResult {
    std::vector<FoldResult> folds;
    double mean_auc = 0;  // over non-skipped folds
    double std_auc = 0;
    int skipped_count = 0;
};

CVResult nested_cv(const Dataset& data, const std::string& label, const Trainer& trainer,
                   const HyperGrid& grid, const CVOptions& options);

struct XRegionResult {
    std::vector<std::string> shared_features;
    std::vector<FoldResult> target_auc;          // model applied to the full target
    std::vector<FoldResult> source_holdout_auc;  // same model on the held-out fold
    double mean_target = 0, std_target = 0;
    double mean_source = 0, std_source = 0;
};

// Train on one region, test on the other: restrict both to shared features,
// rotate a held-out source fold, grid-search on the remaining folds, refit,
// then evaluate on the full target and the holdout.
XRegionResult cross_region(const Dataset& source, const Dataset& target,
                           const std::string& label, const Trainer& trainer,
                           const HyperGrid& grid, const CVOptions& options);

void summarize(std::span<const FoldResult> folds, double& mean, double& stdev,
               int& skipped);

}  // namespace riskscore
