#include "riskscore/train_config.hpp"

#include "riskscore/errors.hpp"

namespace riskscore {

void TrainConfig::validate() const {
    if (penalty_grid.empty()) throw ConfigError("penalty_grid must be non-empty");
    for (double c : penalty_grid)
        if (!(c > 0)) throw ConfigError("penalty_grid entries must be positive");
    if (!(tolerance > 0)) throw ConfigError("tolerance must be positive");
    if (max_iterations <= 0) throw ConfigError("max_iterations must be positive");
    if (coef_min > coef_max) throw ConfigError("coefficient range is empty");
    if (offset_min > offset_max) throw ConfigError("offset range is empty");
    if (!(l0_weight >= 0)) throw ConfigError("l0_weight must be >= 0");
    if (!(time_budget_s > 0)) throw ConfigError("time_budget_s must be positive");
    if (target_gap < 0) throw ConfigError("target_gap must be >= 0");
    if (max_selected_stumps < 0) throw ConfigError("max_selected_stumps must be >= 0");
    if (max_original_features <= 0)
        throw ConfigError("max_original_features must be positive");
    if (depth_grid.empty()) throw ConfigError("depth_grid must be non-empty");
    if (folds < 2) throw ConfigError("folds must be at least 2");
}

LogisticConfig TrainConfig::logistic(Penalty penalty, double C,
                                     bool standardize_override) const {
    LogisticConfig cfg;
    cfg.penalty = penalty;
    cfg.C = C;
    cfg.weighting = weighting;
    cfg.max_iterations = max_iterations;
    cfg.tolerance = tolerance;
    cfg.standardize = standardize_override;
    return cfg;
}

TrainConfig TrainConfig::from_config(const KeyValueConfig& kv) {
    TrainConfig cfg;
    cfg.penalty_grid = kv.get_doubles("penalty_grid", cfg.penalty_grid);
    cfg.max_iterations = static_cast<int>(kv.get_long("max_iterations", cfg.max_iterations));
    cfg.tolerance = kv.get_double("tolerance", cfg.tolerance);
    cfg.seed = static_cast<std::uint64_t>(kv.get_long("seed", static_cast<long>(cfg.seed)));
    std::string weighting = kv.get_string("class_weight", "balanced");
    if (weighting == "balanced")
        cfg.weighting = ClassWeight::Balanced;
    else if (weighting == "none")
        cfg.weighting = ClassWeight::None;
    else
        throw ConfigError("class_weight must be balanced or none");
    cfg.standardize = kv.get_bool("standardize", cfg.standardize);
    cfg.coef_min = static_cast<int>(kv.get_long("coef_min", cfg.coef_min));
    cfg.coef_max = static_cast<int>(kv.get_long("coef_max", cfg.coef_max));
    cfg.offset_min = static_cast<int>(kv.get_long("offset_min", cfg.offset_min));
    cfg.offset_max = static_cast<int>(kv.get_long("offset_max", cfg.offset_max));
    cfg.l0_weight = kv.get_double("l0_weight", cfg.l0_weight);
    cfg.time_budget_s = kv.get_double("time_budget_s", cfg.time_budget_s);
    cfg.target_gap = kv.get_double("target_gap", cfg.target_gap);
    cfg.max_selected_stumps =
        static_cast<int>(kv.get_long("max_selected_stumps", cfg.max_selected_stumps));
    cfg.max_original_features =
        static_cast<int>(kv.get_long("max_original_features", cfg.max_original_features));
    cfg.depth_grid = kv.get_doubles("depth_grid", cfg.depth_grid);
    cfg.min_gain = kv.get_double("min_gain", cfg.min_gain);
    cfg.min_leaf = static_cast<int>(kv.get_long("min_leaf", cfg.min_leaf));
    cfg.folds = static_cast<int>(kv.get_long("folds", cfg.folds));
    cfg.stratify = kv.get_bool("stratify", cfg.stratify);
    cfg.validate();
    return cfg;
}

TrainConfig TrainConfig::from_file(const std::string& path) {
    return from_config(KeyValueConfig::load(path));
}

}  // namespace riskscore
