#pragma once

#include <map>
#include <string>
#include <vector>

#include "riskscore/dataset.hpp"
#include "riskscore/schema.hpp"

namespace test_helpers {

using riskscore::ColumnRole;
using riskscore::ColumnType;
using riskscore::Dataset;
using riskscore::RecordData;
using riskscore::Schema;

// Schema with numeric feature columns only, plus an id.
inline Schema feature_schema(const std::vector<std::string>& features,
                             ColumnType type = ColumnType::Real) {
    Schema s;
    s.columns.push_back({"person_id", ColumnType::Str, ColumnRole::Id});
    for (const auto& f : features) s.columns.push_back({f, type, ColumnRole::Feature});
    return s;
}

inline RecordData row(const std::map<std::string, double>& numbers,
                      const std::string& id = "r") {
    RecordData rec;
    rec.id = id;
    rec.numbers = numbers;
    return rec;
}

// Dataset holding a single numeric record; handy for scorer tests.
inline Dataset single_record(const std::map<std::string, double>& numbers) {
    std::vector<std::string> names;
    for (const auto& [k, v] : numbers) names.push_back(k);
    Dataset data(feature_schema(names));
    data.append(row(numbers));
    return data;
}

// Adds the twelve label columns so test datasets can feed the CV harness.
inline Schema labeled_schema(const std::vector<std::string>& features,
                             bool with_sensitive = false,
                             ColumnType type = ColumnType::Real) {
    Schema s = feature_schema(features, type);
    if (with_sensitive)
        s.columns.push_back({"race", ColumnType::Str, ColumnRole::Sensitive});
    for (const auto& label : riskscore::LabelSet::names())
        s.columns.push_back({label, ColumnType::Bool, ColumnRole::Label});
    return s;
}

inline RecordData labeled_row(const std::map<std::string, double>& numbers,
                              bool general_two_year, const std::string& id = "r") {
    RecordData rec = row(numbers, id);
    rec.has_labels = true;
    rec.labels.two_year[0] = general_two_year;
    return rec;
}

// O(n^2) pairwise AUC with half-credit ties; the oracle the fast path is
// checked against.
inline double pairwise_auc(const std::vector<double>& scores,
                           const std::vector<int>& labels) {
    double wins = 0;
    long pairs = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        for (size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            ++pairs;
            if (scores[i] > scores[j])
                wins += 1.0;
            else if (scores[i] == scores[j])
                wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

}  // namespace test_helpers
