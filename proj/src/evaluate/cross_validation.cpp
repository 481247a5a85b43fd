#include "riskscore/cross_validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "riskscore/additive_stumps.hpp"
#include "riskscore/auc.hpp"
#include "riskscore/cart.hpp"
#include "riskscore/errors.hpp"
#include "riskscore/logistic.hpp"
#include "riskscore/riskslim.hpp"
#include "riskscore/rng.hpp"
#include "riskscore/text.hpp"

namespace riskscore {

double HyperPoint::get(const std::string& key, double fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

std::string HyperPoint::describe() const {
    if (values.empty()) return "default";
    std::vector<std::string> parts;
    for (const auto& [k, v] : values) parts.push_back(k + "=" + format_number(v));
    return join(parts, " ");
}

HyperGrid HyperGrid::over(const std::string& key, std::span<const double> values) {
    HyperGrid grid;
    for (double v : values) {
        HyperPoint p;
        p.values[key] = v;
        grid.points.push_back(std::move(p));
    }
    return grid;
}

namespace {

// Scores rows by resolving the training feature order against the evaluation
// dataset once per call, so cross-region scoring works when column order
// differs.
ScoreFn matrix_scorer(std::vector<std::string> features,
                      std::function<double(std::span<const double>)> predict) {
    return [features = std::move(features), predict = std::move(predict)](
               const Dataset& data, std::span<const int> rows) {
        Dataset::Matrix m = data.feature_matrix(rows, features);
        std::vector<double> out(rows.size());
        for (size_t i = 0; i < rows.size(); ++i)
            out[i] = predict(std::span<const double>(m.values).subspan(i * m.cols, m.cols));
        return out;
    };
}

class PenalizedLogisticTrainer : public Trainer {
public:
    PenalizedLogisticTrainer(Penalty penalty, TrainConfig config)
        : penalty_(penalty), config_(std::move(config)) {}

    ScoreFn fit(const Dataset& data, std::span<const int> rows, const std::string& label,
                const HyperPoint& params) const override {
        double C = params.get("C", config_.penalty_grid.back());
        auto X = data.feature_matrix(rows);
        auto y = data.label_column(label, rows);
        MatrixView view{X.values.data(), X.rows, X.cols};
        LogisticModel model =
            fit_logistic(view, y, config_.logistic(penalty_, C, config_.standardize));
        return matrix_scorer(X.column_names,
                             [model = std::move(model)](std::span<const double> x) {
                                 return model.probability(x);
                             });
    }

private:
    Penalty penalty_;
    TrainConfig config_;
};

class AdditiveStumpsTrainer : public Trainer {
public:
    AdditiveStumpsTrainer(TrainConfig config, std::shared_ptr<const StumpBasis> basis)
        : config_(std::move(config)), basis_(std::move(basis)) {}

    ScoreFn fit(const Dataset& data, std::span<const int> rows, const std::string& label,
                const HyperPoint& params) const override {
        StumpBasis local;
        const StumpBasis* basis = basis_.get();
        if (!basis) {
            local = StumpBasis::defaults(data, rows);
            basis = &local;
        }
        double C = params.get("C", config_.penalty_grid.back());
        AdditiveStumpsModel model =
            fit_additive_stumps_at(data, rows, *basis, label, C, config_);
        return [model = std::move(model)](const Dataset& eval,
                                          std::span<const int> eval_rows) {
            std::vector<double> out(eval_rows.size());
            for (size_t i = 0; i < eval_rows.size(); ++i)
                out[i] = model.probability(eval.record(eval_rows[i]));
            return out;
        };
    }

private:
    TrainConfig config_;
    std::shared_ptr<const StumpBasis> basis_;
};

class RiskSlimTrainer : public Trainer {
public:
    RiskSlimTrainer(TrainConfig config, std::shared_ptr<const StumpBasis> basis)
        : config_(std::move(config)), basis_(std::move(basis)) {}

    ScoreFn fit(const Dataset& data, std::span<const int> rows, const std::string& label,
                const HyperPoint& params) const override {
        StumpBasis local;
        const StumpBasis* basis = basis_.get();
        if (!basis) {
            local = StumpBasis::defaults(data, rows);
            basis = &local;
        }
        TrainConfig config = config_;
        if (double c = params.get("screen_C", 0); c > 0) config.penalty_grid = {c};
        RiskSlimModel model = fit_riskslim_lite(data, rows, *basis, label, config);
        return [table = model.table](const Dataset& eval, std::span<const int> eval_rows) {
            std::vector<double> out(eval_rows.size());
            for (size_t i = 0; i < eval_rows.size(); ++i)
                out[i] = table.evaluate(eval.record(eval_rows[i])).probability;
            return out;
        };
    }

private:
    TrainConfig config_;
    std::shared_ptr<const StumpBasis> basis_;
};

class CartTrainer : public Trainer {
public:
    explicit CartTrainer(TrainConfig config) : config_(std::move(config)) {}

    ScoreFn fit(const Dataset& data, std::span<const int> rows, const std::string& label,
                const HyperPoint& params) const override {
        auto X = data.feature_matrix(rows);
        auto y = data.label_column(label, rows);
        size_t positives = 0;
        for (int v : y) positives += v != 0;
        if (positives == 0 || positives == y.size())
            throw DegenerateLabelError("labels contain a single class");
        CartConfig cart;
        cart.max_depth = static_cast<int>(
            params.get("max_depth", config_.depth_grid.front()));
        cart.min_gain = config_.min_gain;
        cart.min_leaf = config_.min_leaf;
        MatrixView view{X.values.data(), X.rows, X.cols};
        CartModel model = fit_cart(view, y, X.column_names, cart);
        return matrix_scorer(X.column_names,
                             [model = std::move(model)](std::span<const double> x) {
                                 return model.predict(x);
                             });
    }

private:
    TrainConfig config_;
};

}  // namespace

std::unique_ptr<Trainer> make_trainer(const std::string& kind, const TrainConfig& config,
                                      std::shared_ptr<const StumpBasis> basis) {
    if (kind == "l1")
        return std::make_unique<PenalizedLogisticTrainer>(Penalty::L1, config);
    if (kind == "l2")
        return std::make_unique<PenalizedLogisticTrainer>(Penalty::L2, config);
    if (kind == "stumps")
        return std::make_unique<AdditiveStumpsTrainer>(config, std::move(basis));
    if (kind == "riskslim")
        return std::make_unique<RiskSlimTrainer>(config, std::move(basis));
    if (kind == "cart") return std::make_unique<CartTrainer>(config);
    throw ConfigError("unknown model kind '" + kind +
                      "' (expected l1|l2|stumps|riskslim|cart)");
}

HyperGrid default_grid(const std::string& kind, const TrainConfig& config) {
    if (kind == "l1" || kind == "l2" || kind == "stumps")
        return HyperGrid::over("C", config.penalty_grid);
    if (kind == "cart") return HyperGrid::over("max_depth", config.depth_grid);
    if (kind == "riskslim") return HyperGrid::single_point();
    throw ConfigError("unknown model kind '" + kind + "'");
}

std::vector<std::vector<int>> make_folds(size_t n, const CVOptions& options,
                                         std::span<const int> labels) {
    if (options.folds < 2) throw ConfigError("need at least 2 folds");
    if (n < static_cast<size_t>(options.folds))
        throw UserError("fewer records than folds");
    size_t k = static_cast<size_t>(options.folds);
    Rng rng(options.seed);
    std::vector<std::vector<int>> folds(k);

    auto deal_blocks = [&](std::vector<int>& indices) {
        // Contiguous blocks after the shuffle, remainder spread over the
        // leading folds.
        size_t base = indices.size() / k, extra = indices.size() % k, pos = 0;
        for (size_t f = 0; f < k; ++f) {
            size_t len = base + (f < extra ? 1 : 0);
            for (size_t i = 0; i < len; ++i) folds[f].push_back(indices[pos++]);
        }
    };

    if (options.stratify && !labels.empty()) {
        std::vector<int> pos_rows, neg_rows;
        for (size_t i = 0; i < n; ++i)
            (labels[i] ? pos_rows : neg_rows).push_back(static_cast<int>(i));
        rng.shuffle(neg_rows);
        rng.shuffle(pos_rows);
        deal_blocks(neg_rows);
        deal_blocks(pos_rows);
        for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    } else {
        std::vector<int> indices(n);
        std::iota(indices.begin(), indices.end(), 0);
        rng.shuffle(indices);
        deal_blocks(indices);
    }
    return folds;
}

void summarize(std::span<const FoldResult> folds, double& mean, double& stdev,
               int& skipped) {
    mean = 0;
    stdev = 0;
    skipped = 0;
    size_t used = 0;
    for (const auto& f : folds) {
        if (f.skipped) {
            ++skipped;
            continue;
        }
        mean += f.auc;
        ++used;
    }
    if (used == 0) return;
    mean /= used;
    for (const auto& f : folds) {
        if (f.skipped) continue;
        stdev += (f.auc - mean) * (f.auc - mean);
    }
    stdev = std::sqrt(stdev / used);
}

namespace {

struct GridSelection {
    const HyperPoint* best = nullptr;
    std::vector<std::string> notes;
};

// Inner grid search: mean validation AUC per point over the inner folds.
GridSelection select_hyperparameters(const Dataset& data, const std::string& label,
                                     const Trainer& trainer, const HyperGrid& grid,
                                     std::span<const int> train_rows,
                                     const CVOptions& options, std::uint64_t inner_seed) {
    GridSelection selection;
    if (grid.points.empty()) throw ConfigError("hyperparameter grid is empty");
    if (grid.points.size() == 1) {
        selection.best = &grid.points[0];
        return selection;
    }
    CVOptions inner_options = options;
    inner_options.seed = inner_seed;
    auto inner_labels = data.label_column(label, train_rows);
    auto inner_folds =
        make_folds(train_rows.size(), inner_options, inner_labels);

    double best_mean = -1;
    for (const auto& point : grid.points) {
        double total = 0;
        size_t used = 0;
        for (size_t f = 0; f < inner_folds.size(); ++f) {
            std::vector<int> fit_rows, val_rows;
            for (size_t g = 0; g < inner_folds.size(); ++g)
                for (int local : inner_folds[g])
                    (g == f ? val_rows : fit_rows).push_back(train_rows[local]);
            try {
                ScoreFn scorer = trainer.fit(data, fit_rows, label, point);
                auto scores = scorer(data, val_rows);
                auto val_labels = data.label_column(label, val_rows);
                total += auc(scores, val_labels);
                ++used;
            } catch (const UserError& e) {
                selection.notes.push_back("inner fold " + std::to_string(f) + " [" +
                                          point.describe() + "]: " + e.what());
            }
        }
        if (used == 0) continue;
        double mean = total / used;
        if (mean > best_mean) {
            best_mean = mean;
            selection.best = &point;
        }
    }
    return selection;
}

}  // namespace

CVResult nested_cv(const Dataset& data, const std::string& label, const Trainer& trainer,
                   const HyperGrid& grid, const CVOptions& options) {
    if (grid.points.empty()) throw ConfigError("hyperparameter grid is empty");
    auto labels = data.label_column(label);
    auto folds = make_folds(data.size(), options, labels);

    CVResult result;
    for (size_t outer = 0; outer < folds.size(); ++outer) {
        std::vector<int> train_rows, test_rows;
        for (size_t f = 0; f < folds.size(); ++f)
            for (int row : folds[f]) (f == outer ? test_rows : train_rows).push_back(row);

        FoldResult fold;
        fold.fold = static_cast<int>(outer);
        try {
            GridSelection selection =
                select_hyperparameters(data, label, trainer, grid, train_rows, options,
                                       options.seed * 31 + outer + 1);
            if (!selection.best)
                throw DegenerateLabelError("no usable hyperparameter point");
            fold.params = *selection.best;
            ScoreFn scorer = trainer.fit(data, train_rows, label, fold.params);
            auto scores = scorer(data, test_rows);
            auto test_labels = data.label_column(label, test_rows);
            fold.auc = auc(scores, test_labels);
        } catch (const UserError& e) {
            fold.skipped = true;
            fold.skip_reason = e.what();
        }
        result.folds.push_back(std::move(fold));
    }
    summarize(result.folds, result.mean_auc, result.std_auc, result.skipped_count);
    return result;
}

XRegionResult cross_region(const Dataset& source, const Dataset& target,
                           const std::string& label, const Trainer& trainer,
                           const HyperGrid& grid, const CVOptions& options) {
    if (grid.points.empty()) throw ConfigError("hyperparameter grid is empty");
    XRegionResult result;
    result.shared_features = shared_schema(source.schema(), target.schema());
    if (result.shared_features.empty())
        throw SchemaError("regions share no features");
    Dataset src = source.restricted(result.shared_features);
    Dataset tgt = target.restricted(result.shared_features);

    auto labels = src.label_column(label);
    auto folds = make_folds(src.size(), options, labels);
    std::vector<int> target_rows(tgt.size());
    std::iota(target_rows.begin(), target_rows.end(), 0);
    auto target_labels = tgt.label_column(label);

    for (size_t outer = 0; outer < folds.size(); ++outer) {
        std::vector<int> train_rows, holdout_rows;
        for (size_t f = 0; f < folds.size(); ++f)
            for (int row : folds[f])
                (f == outer ? holdout_rows : train_rows).push_back(row);

        FoldResult on_target, on_holdout;
        on_target.fold = on_holdout.fold = static_cast<int>(outer);
        try {
            GridSelection selection =
                select_hyperparameters(src, label, trainer, grid, train_rows, options,
                                       options.seed * 31 + outer + 1);
            if (!selection.best)
                throw DegenerateLabelError("no usable hyperparameter point");
            on_target.params = on_holdout.params = *selection.best;
            ScoreFn scorer = trainer.fit(src, train_rows, label, *selection.best);
            on_target.auc = auc(scorer(tgt, target_rows), target_labels);
            auto holdout_labels = src.label_column(label, holdout_rows);
            on_holdout.auc = auc(scorer(src, holdout_rows), holdout_labels);
        } catch (const UserError& e) {
            on_target.skipped = on_holdout.skipped = true;
            on_target.skip_reason = on_holdout.skip_reason = e.what();
        }
        result.target_auc.push_back(std::move(on_target));
        result.source_holdout_auc.push_back(std::move(on_holdout));
    }
    int skipped = 0;
    summarize(result.target_auc, result.mean_target, result.std_target, skipped);
    summarize(result.source_holdout_auc, result.mean_source, result.std_source, skipped);
    return result;
}

}  // namespace riskscore
