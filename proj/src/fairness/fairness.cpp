#include "riskscore/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "riskscore/auc.hpp"
#include "riskscore/csv.hpp"
#include "riskscore/errors.hpp"
#include "riskscore/text.hpp"

namespace riskscore {

using json = nlohmann::json;

void GroupedScores::validate() const {
    if (scores.size() != labels.size() || scores.size() != groups.size())
        throw AuditError("scores, labels and groups must be the same length");
    if (scores.empty()) throw AuditError("audit input is empty");
}

std::vector<std::string> GroupedScores::group_names() const {
    std::set<std::string> names(groups.begin(), groups.end());
    return {names.begin(), names.end()};
}

namespace {

struct Bin {
    double low = 0, high = 0;
};

std::vector<Bin> make_bins(const GroupedScores& grouped,
                           const FairnessThresholds& thresholds) {
    std::vector<Bin> bins;
    if (grouped.kind == ScoreKind::RawInteger) {
        std::set<double> distinct(grouped.scores.begin(), grouped.scores.end());
        for (double v : distinct) bins.push_back({v, v});
    } else {
        int k = thresholds.probability_bins;
        if (k < 1) throw ConfigError("probability_bins must be >= 1");
        for (int b = 0; b < k; ++b)
            bins.push_back({static_cast<double>(b) / k, static_cast<double>(b + 1) / k});
    }
    return bins;
}

int bin_of(double score, const GroupedScores& grouped, const std::vector<Bin>& bins) {
    if (grouped.kind == ScoreKind::RawInteger) {
        for (size_t b = 0; b < bins.size(); ++b)
            if (bins[b].low == score) return static_cast<int>(b);
        return -1;
    }
    int k = static_cast<int>(bins.size());
    int b = static_cast<int>(std::floor(score * k));
    return std::clamp(b, 0, k - 1);
}

}  // namespace

CalibrationResult calibration(const GroupedScores& grouped,
                              const FairnessThresholds& thresholds) {
    grouped.validate();
    CalibrationResult result;
    result.threshold_used = thresholds.calibration_gap;
    result.monotonic_tolerance_used = thresholds.monotonic_tolerance;
    auto bins = make_bins(grouped, thresholds);
    auto names = grouped.group_names();

    struct Tally {
        int count = 0;
        int positives = 0;
    };
    std::vector<std::map<std::string, Tally>> per_bin(bins.size());
    std::vector<Tally> pooled(bins.size());
    for (size_t i = 0; i < grouped.scores.size(); ++i) {
        int b = bin_of(grouped.scores[i], grouped, bins);
        if (b < 0) continue;
        Tally& cell = per_bin[b][grouped.groups[i]];
        ++cell.count;
        cell.positives += grouped.labels[i] != 0;
        ++pooled[b].count;
        pooled[b].positives += grouped.labels[i] != 0;
    }

    bool any_cell = false;
    for (size_t b = 0; b < bins.size(); ++b) {
        if (pooled[b].count > 0) {
            any_cell = true;
            result.pooled.push_back({"(all)", bins[b].low, bins[b].high,
                                     static_cast<double>(pooled[b].positives) /
                                         pooled[b].count,
                                     pooled[b].count, false});
        }
        for (const auto& name : names) {
            auto it = per_bin[b].find(name);
            if (it == per_bin[b].end()) continue;
            CalibrationCell cell;
            cell.group = name;
            cell.bin_low = bins[b].low;
            cell.bin_high = bins[b].high;
            cell.count = it->second.count;
            cell.positive_fraction =
                static_cast<double>(it->second.positives) / it->second.count;
            cell.low_count = cell.count < thresholds.min_cell_count;
            if (cell.low_count)
                result.flags.push_back("low-count cell: group " + name + ", bin [" +
                                       format_number(cell.bin_low) + ", " +
                                       format_number(cell.bin_high) + "], n=" +
                                       std::to_string(cell.count));
            result.cells.push_back(std::move(cell));
        }
    }
    if (!any_cell) throw AuditError("calibration undefined: every bin is empty");

    // Group calibration: largest pairwise per-bin gap among cells with enough
    // data.
    for (size_t b = 0; b < bins.size(); ++b) {
        std::vector<const CalibrationCell*> eligible;
        for (const auto& cell : result.cells)
            if (cell.bin_low == bins[b].low && cell.bin_high == bins[b].high &&
                !cell.low_count)
                eligible.push_back(&cell);
        for (size_t i = 0; i < eligible.size(); ++i) {
            for (size_t j = i + 1; j < eligible.size(); ++j) {
                double gap =
                    std::abs(eligible[i]->positive_fraction - eligible[j]->positive_fraction);
                if (gap > result.max_gap) {
                    result.max_gap = gap;
                    result.max_gap_bin = bins[b].low;
                    result.max_gap_group_a = eligible[i]->group;
                    result.max_gap_group_b = eligible[j]->group;
                }
            }
        }
    }
    result.group_calibrated = result.max_gap <= thresholds.calibration_gap;

    // Monotonic calibration over the pooled curve.
    for (size_t i = 1; i < result.pooled.size(); ++i) {
        double decrease =
            result.pooled[i - 1].positive_fraction - result.pooled[i].positive_fraction;
        result.worst_decrease = std::max(result.worst_decrease, decrease);
    }
    result.monotonic = result.worst_decrease <= thresholds.monotonic_tolerance;
    return result;
}

BalanceResult bpc_bnc(const GroupedScores& grouped, const FairnessThresholds& thresholds) {
    grouped.validate();
    BalanceResult result;
    result.threshold_used = thresholds.balance_for(grouped.kind);
    auto names = grouped.group_names();

    for (int positive_class = 1; positive_class >= 0; --positive_class) {
        std::vector<BalanceEntry>& means =
            positive_class ? result.positive_means : result.negative_means;
        std::vector<BalanceGap>& gaps =
            positive_class ? result.positive_gaps : result.negative_gaps;
        for (const auto& name : names) {
            double total = 0;
            int count = 0;
            for (size_t i = 0; i < grouped.scores.size(); ++i) {
                if (grouped.groups[i] != name) continue;
                if ((grouped.labels[i] != 0) != (positive_class == 1)) continue;
                total += grouped.scores[i];
                ++count;
            }
            if (count == 0) {
                result.warnings.push_back(
                    "group " + name + " has no " +
                    (positive_class ? "positive" : "negative") +
                    " examples; excluded from the verdict");
                continue;
            }
            means.push_back({name, total / count, count});
        }
        double max_gap = 0;
        for (size_t i = 0; i < means.size(); ++i) {
            for (size_t j = i + 1; j < means.size(); ++j) {
                BalanceGap gap{means[i].group, means[j].group,
                               std::abs(means[i].mean_score - means[j].mean_score)};
                max_gap = std::max(max_gap, gap.gap);
                gaps.push_back(std::move(gap));
            }
        }
        if (positive_class) {
            result.max_positive_gap = max_gap;
            result.bpc_satisfied = max_gap <= result.threshold_used;
        } else {
            result.max_negative_gap = max_gap;
            result.bnc_satisfied = max_gap <= result.threshold_used;
        }
    }
    return result;
}

bool bg_auc_verdict(std::span<const double> per_group_auc, double threshold,
                    double& range) {
    range = 0;
    if (per_group_auc.size() >= 2) {
        auto [lo, hi] = std::minmax_element(per_group_auc.begin(), per_group_auc.end());
        range = *hi - *lo;
    }
    return range <= threshold;
}

BgAucResult bg_auc(const GroupedScores& grouped, const FairnessThresholds& thresholds) {
    grouped.validate();
    BgAucResult result;
    result.threshold_used = thresholds.auc_range;
    for (const auto& name : grouped.group_names()) {
        std::vector<double> scores;
        std::vector<int> labels;
        for (size_t i = 0; i < grouped.scores.size(); ++i) {
            if (grouped.groups[i] != name) continue;
            scores.push_back(grouped.scores[i]);
            labels.push_back(grouped.labels[i]);
        }
        try {
            double value = auc(scores, labels);
            result.per_group.push_back({name, value, static_cast<int>(scores.size())});
        } catch (const UndefinedAucError&) {
            result.excluded.push_back("group " + name +
                                      " has a single class; AUC undefined");
        }
    }
    std::vector<double> values;
    for (const auto& entry : result.per_group) values.push_back(entry.mean_score);
    result.satisfied = bg_auc_verdict(values, result.threshold_used, result.range);
    return result;
}

FairnessReport audit(const GroupedScores& grouped, const FairnessThresholds& thresholds) {
    FairnessReport report;
    report.thresholds = thresholds;
    report.kind = grouped.kind;
    report.calibration = calibration(grouped, thresholds);
    report.balance = bpc_bnc(grouped, thresholds);
    report.bg_auc = bg_auc(grouped, thresholds);
    return report;
}

namespace {

json cells_json(const std::vector<CalibrationCell>& cells) {
    json arr = json::array();
    for (const auto& cell : cells) {
        arr.push_back({{"group", cell.group},
                       {"bin_low", cell.bin_low},
                       {"bin_high", cell.bin_high},
                       {"positive_fraction", cell.positive_fraction},
                       {"count", cell.count},
                       {"low_count", cell.low_count}});
    }
    return arr;
}

json means_json(const std::vector<BalanceEntry>& means) {
    json arr = json::array();
    for (const auto& m : means)
        arr.push_back({{"group", m.group}, {"mean", m.mean_score}, {"count", m.count}});
    return arr;
}

json gaps_json(const std::vector<BalanceGap>& gaps) {
    json arr = json::array();
    for (const auto& g : gaps)
        arr.push_back({{"group_a", g.group_a}, {"group_b", g.group_b}, {"gap", g.gap}});
    return arr;
}

}  // namespace

std::string FairnessReport::to_json_text() const {
    json doc;
    doc["score_kind"] = kind == ScoreKind::Probability ? "probability" : "raw_integer";
    doc["thresholds"] = {{"calibration_gap", thresholds.calibration_gap},
                         {"balance", thresholds.balance_for(kind)},
                         {"auc_range", thresholds.auc_range},
                         {"monotonic_tolerance", thresholds.monotonic_tolerance},
                         {"min_cell_count", thresholds.min_cell_count}};
    doc["calibration"] = {
        {"cells", cells_json(calibration.cells)},
        {"pooled", cells_json(calibration.pooled)},
        {"group_calibrated", calibration.group_calibrated},
        {"max_gap", calibration.max_gap},
        {"max_gap_bin", calibration.max_gap_bin},
        {"max_gap_groups", {calibration.max_gap_group_a, calibration.max_gap_group_b}},
        {"monotonic", calibration.monotonic},
        {"worst_decrease", calibration.worst_decrease},
        {"threshold", calibration.threshold_used},
        {"flags", calibration.flags}};
    doc["balance"] = {{"positive_means", means_json(balance.positive_means)},
                      {"negative_means", means_json(balance.negative_means)},
                      {"positive_gaps", gaps_json(balance.positive_gaps)},
                      {"negative_gaps", gaps_json(balance.negative_gaps)},
                      {"max_positive_gap", balance.max_positive_gap},
                      {"max_negative_gap", balance.max_negative_gap},
                      {"bpc_satisfied", balance.bpc_satisfied},
                      {"bnc_satisfied", balance.bnc_satisfied},
                      {"threshold", balance.threshold_used},
                      {"warnings", balance.warnings}};
    json groups = json::array();
    for (const auto& entry : bg_auc.per_group)
        groups.push_back(
            {{"group", entry.group}, {"auc", entry.mean_score}, {"count", entry.count}});
    doc["bg_auc"] = {{"per_group", groups},
                     {"range", bg_auc.range},
                     {"satisfied", bg_auc.satisfied},
                     {"threshold", bg_auc.threshold_used},
                     {"excluded", bg_auc.excluded}};
    return doc.dump(2) + "\n";
}

std::string FairnessReport::curves_csv() const {
    std::string out = "group,bin_low,bin_high,positive_fraction,count\n";
    auto emit = [&](const std::vector<CalibrationCell>& cells) {
        for (const auto& cell : cells)
            out += csv_escape(cell.group) + "," + format_number(cell.bin_low) + "," +
                   format_number(cell.bin_high) + "," +
                   format_number(cell.positive_fraction) + "," +
                   std::to_string(cell.count) + "\n";
    };
    emit(calibration.pooled);
    emit(calibration.cells);
    return out;
}

std::string FairnessReport::summary_text() const {
    auto verdict = [](bool ok) { return ok ? "satisfied" : "VIOLATED"; };
    std::string out;
    out += std::string("group calibration: ") + verdict(calibration.group_calibrated) +
           " (max gap " + format_number(calibration.max_gap) + ", threshold " +
           format_number(calibration.threshold_used) + ")\n";
    out += std::string("monotonic calibration: ") + verdict(calibration.monotonic) +
           " (worst decrease " + format_number(calibration.worst_decrease) + ")\n";
    out += std::string("BPC: ") + verdict(balance.bpc_satisfied) + " (max gap " +
           format_number(balance.max_positive_gap) + ", threshold " +
           format_number(balance.threshold_used) + ")\n";
    out += std::string("BNC: ") + verdict(balance.bnc_satisfied) + " (max gap " +
           format_number(balance.max_negative_gap) + ", threshold " +
           format_number(balance.threshold_used) + ")\n";
    out += std::string("BG-AUC: ") + verdict(bg_auc.satisfied) + " (range " +
           format_number(bg_auc.range) + ", threshold " +
           format_number(bg_auc.threshold_used) + ")\n";
    return out;
}

std::vector<BaseRateRow> base_rates(const Dataset& data, const std::string& attribute) {
    int column = data.schema().index(attribute);
    if (column < 0) throw SchemaError("unknown attribute '" + attribute + "'");
    const Column& col = data.schema().columns[column];
    if (col.role != ColumnRole::Sensitive && col.type != ColumnType::Str)
        throw ValueTypeError("attribute '" + attribute + "' is not categorical");
    if (!data.has_labels()) throw SchemaError("dataset carries no labels");

    std::map<std::string, BaseRateRow> rows;
    std::map<std::string, std::array<int, 12>> positives;
    for (size_t r = 0; r < data.size(); ++r) {
        const std::string& group = data.string_at(r, column);
        auto& row = rows[group];
        row.group = group;
        ++row.count;
        auto& pos = positives[group];
        const LabelSet& labels = data.labels(r);
        for (int t = 0; t < 6; ++t) {
            pos[2 * t] += labels.two_year[t] ? 1 : 0;
            pos[2 * t + 1] += labels.six_month[t] ? 1 : 0;
        }
    }
    std::vector<BaseRateRow> out;
    for (auto& [group, row] : rows) {
        for (int i = 0; i < 12; ++i)
            row.rates[i] = static_cast<double>(positives[group][i]) / row.count;
        out.push_back(row);
    }
    return out;
}

}  // namespace riskscore
