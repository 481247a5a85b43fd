#include "riskscore/additive_stumps.hpp"

#include <algorithm>
#include <set>

#include "riskscore/csv.hpp"
#include "riskscore/errors.hpp"
#include "riskscore/scoring_table.hpp"
#include "riskscore/text.hpp"

namespace riskscore {

namespace {

std::vector<std::string> touched_features(const LogisticModel& model,
                                          std::span<const StumpColumn> columns) {
    std::set<std::string> used;
    for (size_t j = 0; j < columns.size(); ++j)
        if (model.coefficients[j] != 0.0) used.insert(columns[j].feature);
    return {used.begin(), used.end()};
}

AdditiveStumpsModel assemble(const StumpBasis& basis, StumpMatrix&& matrix,
                             LogisticModel&& model, double C) {
    AdditiveStumpsModel out;
    out.columns = std::move(matrix.columns);
    out.model = std::move(model);
    out.chosen_C = C;
    out.used_features = touched_features(out.model, out.columns);
    for (const auto& feature : out.used_features) {
        const FeatureStumps* spec = basis.find(feature);
        if (!spec) continue;
        std::vector<double> xs;
        if (spec->direction == StumpDirection::Binary) {
            xs = {0.0, 1.0};
        } else {
            xs = spec->thresholds;
            if (spec->direction == StumpDirection::Increasing)
                xs.insert(xs.begin(), spec->thresholds.front() - 1);
            else
                xs.push_back(spec->thresholds.back() + 1);
        }
        std::vector<ContributionPoint> curve;
        for (double x : xs)
            curve.push_back({x, aggregate_contribution(out.model.coefficients,
                                                       out.columns, feature, x)});
        out.curves[feature] = std::move(curve);
    }
    return out;
}

}  // namespace

double AdditiveStumpsModel::probability(const RecordView& record) const {
    double eta = model.intercept;
    for (size_t j = 0; j < columns.size(); ++j) {
        if (model.coefficients[j] == 0.0) continue;
        double v = record.numeric(columns[j].feature);
        bool hit;
        switch (columns[j].direction) {
            case StumpDirection::Binary: hit = v != 0.0; break;
            case StumpDirection::Decreasing: hit = v <= columns[j].threshold; break;
            default: hit = v >= columns[j].threshold; break;
        }
        if (hit) eta += model.coefficients[j];
    }
    return logistic(eta);
}

double AdditiveStumpsModel::contribution(const std::string& feature, double value) const {
    return aggregate_contribution(model.coefficients, columns, feature, value);
}

AdditiveStumpsModel fit_additive_stumps_at(const Dataset& data, std::span<const int> rows,
                                           const StumpBasis& basis,
                                           const std::string& label, double C,
                                           const TrainConfig& config) {
    StumpMatrix matrix = expand(data, rows, basis);
    auto y = data.label_column(label, rows);
    MatrixView X{matrix.values.data(), matrix.rows, matrix.cols};
    LogisticModel model = fit_logistic(X, y, config.logistic(Penalty::L1, C, false));
    auto used = touched_features(model, matrix.columns);
    if (static_cast<int>(used.size()) > config.max_original_features)
        throw ConfigError("additive stumps model at C=" + format_number(C) + " touches " +
                          std::to_string(used.size()) + " original features (cap " +
                          std::to_string(config.max_original_features) +
                          "); use a stronger penalty");
    return assemble(basis, std::move(matrix), std::move(model), C);
}

AdditiveStumpsModel fit_additive_stumps(const Dataset& data, std::span<const int> rows,
                                        const StumpBasis& basis, const std::string& label,
                                        const TrainConfig& config) {
    config.validate();
    StumpMatrix matrix = expand(data, rows, basis);
    auto y = data.label_column(label, rows);
    MatrixView X{matrix.values.data(), matrix.rows, matrix.cols};

    std::vector<double> grid = config.penalty_grid;
    std::sort(grid.begin(), grid.end(), std::greater<double>());
    for (double C : grid) {
        LogisticModel model = fit_logistic(X, y, config.logistic(Penalty::L1, C, false));
        auto used = touched_features(model, matrix.columns);
        if (static_cast<int>(used.size()) <= config.max_original_features)
            return assemble(basis, std::move(matrix), std::move(model), C);
    }
    throw ConfigError("no penalty in the grid keeps the model within " +
                      std::to_string(config.max_original_features) +
                      " original features; add stronger penalties (smaller C)");
}

void save_coefficient_csv(const std::string& path, std::span<const std::string> names,
                          std::span<const double> coefficients, double intercept) {
    CsvTable table;
    table.header = {"term", "coefficient"};
    table.rows.push_back({"(intercept)", format_number(intercept)});
    for (size_t j = 0; j < names.size(); ++j)
        table.rows.push_back({names[j], format_number(coefficients[j])});
    write_csv(path, table);
}

}  // namespace riskscore
