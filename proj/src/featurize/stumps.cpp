#include "riskscore/stumps.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "riskscore/csv.hpp"
#include "riskscore/errors.hpp"
#include "riskscore/text.hpp"

namespace riskscore {

std::string to_string(StumpDirection direction) {
    switch (direction) {
        case StumpDirection::Increasing: return "increasing";
        case StumpDirection::Decreasing: return "decreasing";
        case StumpDirection::Binary: return "binary";
    }
    return "?";
}

void StumpBasis::validate() const {
    for (const auto& spec : features) {
        if (spec.direction == StumpDirection::Binary) {
            if (!spec.thresholds.empty())
                throw ValidationError("binary feature '" + spec.feature +
                                      "' must not carry thresholds");
            continue;
        }
        if (spec.thresholds.empty())
            throw ValidationError("feature '" + spec.feature + "' has no thresholds");
        for (size_t i = 1; i < spec.thresholds.size(); ++i)
            if (spec.thresholds[i] <= spec.thresholds[i - 1])
                throw ValidationError("thresholds for '" + spec.feature +
                                      "' must be strictly increasing");
    }
}

const FeatureStumps* StumpBasis::find(const std::string& feature) const {
    for (const auto& spec : features)
        if (spec.feature == feature) return &spec;
    return nullptr;
}

std::string StumpBasis::to_text() const {
    std::string out;
    for (const auto& spec : features) {
        out += spec.feature + " " + to_string(spec.direction);
        if (spec.direction != StumpDirection::Binary) {
            out += " ";
            std::vector<std::string> parts;
            for (double t : spec.thresholds) parts.push_back(format_number(t));
            out += join(parts, ",");
        }
        out += "\n";
    }
    return out;
}

StumpBasis StumpBasis::from_text(const std::string& text, const std::string& origin) {
    StumpBasis basis;
    int line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        std::string_view line = trim(raw);
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        std::istringstream tok{std::string(line)};
        std::string feature, direction, thresholds;
        tok >> feature >> direction >> thresholds;
        FeatureStumps spec;
        spec.feature = feature;
        if (direction == "increasing")
            spec.direction = StumpDirection::Increasing;
        else if (direction == "decreasing")
            spec.direction = StumpDirection::Decreasing;
        else if (direction == "binary")
            spec.direction = StumpDirection::Binary;
        else
            throw ParseError(origin + ": bad direction '" + direction + "'", line_no);
        if (spec.direction != StumpDirection::Binary) {
            if (thresholds.empty())
                throw ParseError(origin + ": feature '" + feature + "' needs thresholds",
                                 line_no);
            for (const auto& part : split(thresholds, ','))
                spec.thresholds.push_back(parse_double(part, origin + " threshold"));
        }
        basis.features.push_back(std::move(spec));
    }
    basis.validate();
    return basis;
}

StumpBasis StumpBasis::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UserError("cannot open basis " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str(), path);
}

void StumpBasis::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw UserError("cannot write basis " + path);
    out << to_text();
}

StumpBasis StumpBasis::defaults(const Dataset& data, std::span<const int> rows,
                                const std::vector<std::string>& features,
                                double tail_fraction) {
    std::vector<std::string> wanted =
        features.empty() ? data.schema().feature_names() : features;
    StumpBasis basis;
    for (const auto& name : wanted) {
        const Column* col = data.schema().find(name);
        if (!col) throw SchemaError("unknown feature '" + name + "'");
        if (col->type == ColumnType::Str) continue;
        if (col->type == ColumnType::Bool) {
            basis.features.push_back({name, StumpDirection::Binary, {}});
            continue;
        }
        if (name.rfind("age", 0) == 0) {
            FeatureStumps spec{name, StumpDirection::Decreasing, {}};
            for (int k = 18; k <= 60; ++k) spec.thresholds.push_back(k);
            basis.features.push_back(std::move(spec));
            continue;
        }
        // Count feature: integer grid 1..min(max, 10), pruned where either
        // side of the cut falls below the tail fraction.
        int idx = data.schema().index(name);
        double max_value = 0;
        std::vector<double> values;
        values.reserve(rows.size());
        for (int r : rows) {
            double v = data.number_at(r, idx);
            values.push_back(v);
            max_value = std::max(max_value, v);
        }
        int top = static_cast<int>(std::min(max_value, 10.0));
        size_t min_count = std::max<size_t>(
            1, static_cast<size_t>(std::ceil(tail_fraction * values.size())));
        FeatureStumps spec{name, StumpDirection::Increasing, {}};
        for (int k = 1; k <= top; ++k) {
            size_t active = 0;
            for (double v : values)
                if (v >= k) ++active;
            if (active >= min_count && values.size() - active >= min_count)
                spec.thresholds.push_back(k);
        }
        if (!spec.thresholds.empty()) basis.features.push_back(std::move(spec));
    }
    basis.validate();
    return basis;
}

StumpBasis StumpBasis::defaults(const Dataset& data,
                                const std::vector<std::string>& features,
                                double tail_fraction) {
    std::vector<int> all(data.size());
    std::iota(all.begin(), all.end(), 0);
    return defaults(data, all, features, tail_fraction);
}

std::vector<std::string> StumpMatrix::column_names() const {
    std::vector<std::string> names;
    names.reserve(columns.size());
    for (const auto& c : columns) names.push_back(c.name);
    return names;
}

std::vector<double> stump_vector(const FeatureStumps& spec, double value) {
    if (spec.direction == StumpDirection::Binary) return {value != 0.0 ? 1.0 : 0.0};
    std::vector<double> out;
    out.reserve(spec.thresholds.size());
    for (double k : spec.thresholds) {
        bool hit = spec.direction == StumpDirection::Decreasing ? value <= k : value >= k;
        out.push_back(hit ? 1.0 : 0.0);
    }
    return out;
}

StumpMatrix expand(const Dataset& data, std::span<const int> rows, const StumpBasis& basis) {
    basis.validate();
    StumpMatrix matrix;
    std::vector<int> feature_index;
    for (const auto& spec : basis.features) {
        int idx = data.schema().index(spec.feature);
        if (idx < 0) throw SchemaError("basis feature '" + spec.feature + "' not in data");
        const Column& col = data.schema().columns[idx];
        if (col.type == ColumnType::Str || col.role != ColumnRole::Feature)
            throw ValueTypeError("basis feature '" + spec.feature + "' is not numeric");
        if (spec.direction == StumpDirection::Binary) {
            matrix.columns.push_back({spec.feature, spec.feature, spec.direction, 0});
            feature_index.push_back(idx);
        } else {
            const char* op = spec.direction == StumpDirection::Decreasing ? "<=" : ">=";
            for (double k : spec.thresholds) {
                matrix.columns.push_back(
                    {spec.feature + op + format_number(k), spec.feature, spec.direction, k});
                feature_index.push_back(idx);
            }
        }
    }
    matrix.rows = rows.size();
    matrix.cols = matrix.columns.size();
    matrix.values.assign(matrix.rows * matrix.cols, 0.0);
    for (size_t r = 0; r < rows.size(); ++r) {
        for (size_t c = 0; c < matrix.cols; ++c) {
            double v = data.number_at(rows[r], feature_index[c]);
            const StumpColumn& col = matrix.columns[c];
            bool hit;
            switch (col.direction) {
                case StumpDirection::Binary: hit = v != 0.0; break;
                case StumpDirection::Decreasing: hit = v <= col.threshold; break;
                default: hit = v >= col.threshold; break;
            }
            matrix.values[r * matrix.cols + c] = hit ? 1.0 : 0.0;
        }
    }
    return matrix;
}

StumpMatrix expand(const Dataset& data, const StumpBasis& basis) {
    std::vector<int> all(data.size());
    std::iota(all.begin(), all.end(), 0);
    return expand(data, all, basis);
}

double aggregate_contribution(std::span<const double> coefficients,
                              std::span<const StumpColumn> columns,
                              const std::string& feature, double value) {
    if (coefficients.size() != columns.size())
        throw Error("coefficient count does not match stump columns");
    double total = 0;
    bool seen = false;
    for (size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].feature != feature) continue;
        seen = true;
        bool hit;
        switch (columns[c].direction) {
            case StumpDirection::Binary: hit = value != 0.0; break;
            case StumpDirection::Decreasing: hit = value <= columns[c].threshold; break;
            default: hit = value >= columns[c].threshold; break;
        }
        if (hit) total += coefficients[c];
    }
    if (!seen) throw SchemaError("no stump columns for feature '" + feature + "'");
    return total;
}

void save_stump_matrix_csv(const std::string& path, const StumpMatrix& matrix) {
    CsvTable table;
    table.header = matrix.column_names();
    table.rows.reserve(matrix.rows);
    for (size_t r = 0; r < matrix.rows; ++r) {
        std::vector<std::string> row;
        row.reserve(matrix.cols);
        for (size_t c = 0; c < matrix.cols; ++c)
            row.push_back(matrix.at(r, c) != 0.0 ? "1" : "0");
        table.rows.push_back(std::move(row));
    }
    write_csv(path, table);
}

}  // namespace riskscore
