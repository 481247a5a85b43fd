#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "riskscore/schema.hpp"

namespace riskscore {

// A single post-baseline charge, used only for label construction.
struct ChargeEvent {
    int offset_days = 0;            // days after the current charge / release date
    std::vector<std::string> tags;  // e.g. violent, drug, property
    std::string level = "other";    // felony | misdemeanor | other
    bool convicted = true;
};

inline constexpr std::array<const char*, 6> kRecidivismTypes = {
    "general", "violent", "drug", "property", "felony", "misdemeanor"};
inline constexpr int kSixMonthDays = 183;
inline constexpr int kTwoYearDays = 730;

// Twelve binary outcomes: six charge types at two horizons.
struct LabelSet {
    std::array<bool, 6> two_year{};
    std::array<bool, 6> six_month{};

    bool get(int type_idx, bool six_month_horizon) const {
        return six_month_horizon ? six_month[type_idx] : two_year[type_idx];
    }
    static std::vector<std::string> names();
    static std::string name(int type_idx, bool six_month_horizon);
    // -1 if not a recognized label name.
    static int type_index(const std::string& label_name, bool& six_month_horizon);
};

// A label fires when a qualifying charge lands inside its horizon. With
// convicted_only set, non-convicted charges are invisible.
LabelSet build_labels(std::span<const ChargeEvent> events, bool convicted_only = false);

std::string render_events(std::span<const ChargeEvent> events);
std::vector<ChargeEvent> parse_events(const std::string& cell, const std::string& context);

// Row data in transit: used to append to a Dataset.
struct RecordData {
    std::string id;
    std::map<std::string, double> numbers;
    std::map<std::string, std::string> strings;
    std::vector<ChargeEvent> events;
    LabelSet labels;
    bool has_labels = false;
};

struct LoadOptions {
    bool convicted_only = false;
};

class Dataset;

// Lightweight view of one row; what the scorers consume.
class RecordView {
public:
    RecordView(const Dataset& data, size_t row) : data_(&data), row_(row) {}
    // Numeric feature lookup; throws SchemaError / ValueTypeError.
    double numeric(const std::string& name) const;
    // String lookup for sensitive or str-typed columns.
    const std::string& text(const std::string& name) const;
    bool is_numeric(const std::string& name) const;
    bool has(const std::string& name) const;
    size_t row() const { return row_; }
    const Dataset& dataset() const { return *data_; }

private:
    const Dataset* data_;
    size_t row_;
};

class Dataset {
public:
    explicit Dataset(Schema schema);

    const Schema& schema() const { return schema_; }
    size_t size() const { return size_; }
    RecordView record(size_t row) const { return RecordView(*this, row); }

    void append(const RecordData& record);

    double number_at(size_t row, int column_index) const;
    const std::string& string_at(size_t row, int column_index) const;
    const std::vector<ChargeEvent>& events(size_t row) const;
    bool has_labels() const { return has_labels_; }
    const LabelSet& labels(size_t row) const;

    // Column of a single label as 0/1 ints; throws if the name is unknown.
    std::vector<int> label_column(const std::string& label_name) const;
    std::vector<int> label_column(const std::string& label_name,
                                  std::span<const int> rows) const;

    // Dense row-major matrix restricted to the given feature names (defaults
    // to every feature column, schema order).
    struct Matrix {
        std::vector<double> values;  // row-major
        std::vector<std::string> column_names;
        size_t rows = 0;
        size_t cols = 0;
        double at(size_t r, size_t c) const { return values[r * cols + c]; }
    };
    Matrix feature_matrix(std::span<const int> rows,
                          const std::vector<std::string>& features = {}) const;
    Matrix feature_matrix(const std::vector<std::string>& features = {}) const;

    // Restrict to a feature subset (plus id/sensitive/label/event columns).
    Dataset restricted(const std::vector<std::string>& features) const;

    static Dataset load(const std::string& csv_path, const Schema& schema,
                        const LoadOptions& options = {});
    void save(const std::string& csv_path) const;

private:
    friend class RecordView;
    struct ColumnData {
        std::vector<double> nums;
        std::vector<std::string> strs;
    };
    void validate_invariants(const Column& col, double value, size_t row_display) const;

    Schema schema_;
    std::vector<ColumnData> columns_;
    std::vector<std::vector<ChargeEvent>> events_;
    std::vector<LabelSet> labels_;
    bool has_labels_ = false;
    int events_column_ = -1;
    size_t size_ = 0;
};

}  // namespace riskscore
