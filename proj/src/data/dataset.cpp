#include "riskscore/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "riskscore/csv.hpp"
#include "riskscore/errors.hpp"
#include "riskscore/text.hpp"

namespace riskscore {

std::vector<std::string> LabelSet::names() {
    std::vector<std::string> out;
    for (int t = 0; t < 6; ++t) {
        out.push_back(name(t, false));
        out.push_back(name(t, true));
    }
    return out;
}

std::string LabelSet::name(int type_idx, bool six_month_horizon) {
    return std::string(kRecidivismTypes[type_idx]) +
           (six_month_horizon ? "_six_month" : "_two_year");
}

int LabelSet::type_index(const std::string& label_name, bool& six_month_horizon) {
    for (int t = 0; t < 6; ++t) {
        if (label_name == name(t, false)) {
            six_month_horizon = false;
            return t;
        }
        if (label_name == name(t, true)) {
            six_month_horizon = true;
            return t;
        }
    }
    return -1;
}

LabelSet build_labels(std::span<const ChargeEvent> events, bool convicted_only) {
    LabelSet labels;
    for (const auto& event : events) {
        if (convicted_only && !event.convicted) continue;
        if (event.offset_days > kTwoYearDays) continue;
        bool within_six = event.offset_days <= kSixMonthDays;
        auto mark = [&](int type_idx) {
            labels.two_year[type_idx] = true;
            if (within_six) labels.six_month[type_idx] = true;
        };
        mark(0);  // any charge counts as general
        for (const auto& tag : event.tags) {
            if (tag == "violent") mark(1);
            if (tag == "drug") mark(2);
            if (tag == "property") mark(3);
        }
        if (event.level == "felony") mark(4);
        if (event.level == "misdemeanor") mark(5);
    }
    return labels;
}

std::string render_events(std::span<const ChargeEvent> events) {
    std::vector<std::string> parts;
    for (const auto& e : events) {
        std::string tags = join(e.tags, "|");
        parts.push_back(std::to_string(e.offset_days) + ":" + tags + ":" + e.level + ":" +
                        (e.convicted ? "1" : "0"));
    }
    return join(parts, ";");
}

std::vector<ChargeEvent> parse_events(const std::string& cell, const std::string& context) {
    std::vector<ChargeEvent> events;
    std::string_view trimmed = trim(cell);
    if (trimmed.empty()) return events;
    for (const auto& part : split(trimmed, ';')) {
        auto fields = split(trim(part), ':');
        if (fields.size() != 4)
            throw ValueTypeError(context + ": event must be offset:tags:level:convicted, got '" +
                                 std::string(part) + "'");
        ChargeEvent e;
        e.offset_days = static_cast<int>(parse_long(fields[0], context + " event offset"));
        if (e.offset_days < 0)
            throw ValidationError(context + ": event offset must be >= 0 days");
        if (!trim(fields[1]).empty())
            for (auto& tag : split(fields[1], '|')) e.tags.emplace_back(trim(tag));
        e.level = std::string(trim(fields[2]));
        if (e.level != "felony" && e.level != "misdemeanor" && e.level != "other")
            throw ValueTypeError(context + ": event level must be felony|misdemeanor|other");
        std::string_view conv = trim(fields[3]);
        if (conv == "1")
            e.convicted = true;
        else if (conv == "0")
            e.convicted = false;
        else
            throw ValueTypeError(context + ": event convicted flag must be 0 or 1");
        events.push_back(std::move(e));
    }
    return events;
}

Dataset::Dataset(Schema schema) : schema_(std::move(schema)) {
    columns_.resize(schema_.columns.size());
    for (size_t i = 0; i < schema_.columns.size(); ++i) {
        if (schema_.columns[i].role == ColumnRole::Events) {
            if (events_column_ >= 0)
                throw SchemaError("schema declares more than one events column");
            events_column_ = static_cast<int>(i);
        }
    }
    // Labels are available when the schema names all twelve, or when events
    // are present to derive them from.
    auto label_names = LabelSet::names();
    bool all_label_columns = std::all_of(
        label_names.begin(), label_names.end(), [&](const std::string& n) {
            const Column* c = schema_.find(n);
            return c && c->role == ColumnRole::Label;
        });
    has_labels_ = all_label_columns || events_column_ >= 0;
}

void Dataset::validate_invariants(const Column& col, double value,
                                  size_t row_display) const {
    std::string where = "row " + std::to_string(row_display) + ", column " + col.name;
    if (!std::isfinite(value)) throw ValidationError(where + ": non-finite value");
    if (col.type == ColumnType::Bool && value != 0.0 && value != 1.0)
        throw ValidationError(where + ": flag must be 0 or 1");
    if (col.type == ColumnType::Int) {
        if (value != std::floor(value))
            throw ValueTypeError(where + ": expected integer");
        if (col.role == ColumnRole::Feature && value < 0)
            throw ValidationError(where + ": counts must be >= 0");
    }
    if (col.name == "age_at_current_charge" && (value < 18 || value > 70))
        throw ValidationError(where + ": age must be in [18, 70]");
}

void Dataset::append(const RecordData& record) {
    size_t row_display = size_ + 1;
    for (size_t i = 0; i < schema_.columns.size(); ++i) {
        const Column& col = schema_.columns[i];
        switch (col.role) {
            case ColumnRole::Id:
                columns_[i].strs.push_back(record.id);
                break;
            case ColumnRole::Events:
                columns_[i].strs.push_back(render_events(record.events));
                break;
            case ColumnRole::Sensitive: {
                auto it = record.strings.find(col.name);
                if (it == record.strings.end())
                    throw SchemaError("missing sensitive attribute '" + col.name + "'");
                columns_[i].strs.push_back(it->second);
                break;
            }
            case ColumnRole::Label: {
                bool six = false;
                int t = LabelSet::type_index(col.name, six);
                if (t < 0 || !record.has_labels)
                    throw SchemaError("missing label '" + col.name + "'");
                columns_[i].nums.push_back(record.labels.get(t, six) ? 1.0 : 0.0);
                break;
            }
            case ColumnRole::Feature: {
                if (col.type == ColumnType::Str) {
                    auto it = record.strings.find(col.name);
                    if (it == record.strings.end())
                        throw SchemaError("missing feature '" + col.name + "'");
                    columns_[i].strs.push_back(it->second);
                } else {
                    auto it = record.numbers.find(col.name);
                    if (it == record.numbers.end())
                        throw SchemaError("missing feature '" + col.name + "'");
                    validate_invariants(col, it->second, row_display);
                    columns_[i].nums.push_back(it->second);
                }
                break;
            }
        }
    }
    events_.push_back(record.events);
    if (has_labels_) {
        if (record.has_labels)
            labels_.push_back(record.labels);
        else
            labels_.push_back(build_labels(record.events));
    }
    ++size_;
}

double Dataset::number_at(size_t row, int column_index) const {
    return columns_[column_index].nums[row];
}

const std::string& Dataset::string_at(size_t row, int column_index) const {
    return columns_[column_index].strs[row];
}

const std::vector<ChargeEvent>& Dataset::events(size_t row) const { return events_[row]; }

const LabelSet& Dataset::labels(size_t row) const {
    if (!has_labels_) throw SchemaError("dataset carries no labels");
    return labels_[row];
}

std::vector<int> Dataset::label_column(const std::string& label_name) const {
    std::vector<int> all(size_);
    std::iota(all.begin(), all.end(), 0);
    return label_column(label_name, all);
}

std::vector<int> Dataset::label_column(const std::string& label_name,
                                       std::span<const int> rows) const {
    bool six = false;
    int t = LabelSet::type_index(label_name, six);
    if (t < 0) throw SchemaError("unknown label '" + label_name + "'");
    if (!has_labels_) throw SchemaError("dataset carries no labels");
    std::vector<int> out;
    out.reserve(rows.size());
    for (int r : rows) out.push_back(labels_[r].get(t, six) ? 1 : 0);
    return out;
}

Dataset::Matrix Dataset::feature_matrix(std::span<const int> rows,
                                        const std::vector<std::string>& features) const {
    std::vector<std::string> cols = features.empty() ? schema_.feature_names() : features;
    Matrix m;
    m.column_names = cols;
    m.rows = rows.size();
    m.cols = cols.size();
    std::vector<int> idx;
    for (const auto& name : cols) {
        int i = schema_.index(name);
        if (i < 0) throw SchemaError("unknown feature '" + name + "'");
        if (schema_.columns[i].type == ColumnType::Str)
            throw ValueTypeError("feature '" + name + "' is not numeric");
        idx.push_back(i);
    }
    m.values.resize(m.rows * m.cols);
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < idx.size(); ++c)
            m.values[r * m.cols + c] = columns_[idx[c]].nums[rows[r]];
    return m;
}

Dataset::Matrix Dataset::feature_matrix(const std::vector<std::string>& features) const {
    std::vector<int> all(size_);
    std::iota(all.begin(), all.end(), 0);
    return feature_matrix(all, features);
}

Dataset Dataset::restricted(const std::vector<std::string>& features) const {
    Schema sub;
    for (const auto& col : schema_.columns) {
        bool keep = col.role != ColumnRole::Feature ||
                    std::find(features.begin(), features.end(), col.name) != features.end();
        if (keep) sub.columns.push_back(col);
    }
    Dataset out(sub);
    for (size_t r = 0; r < size_; ++r) {
        RecordData rec;
        for (size_t i = 0; i < sub.columns.size(); ++i) {
            const Column& col = sub.columns[i];
            int src = schema_.index(col.name);
            switch (col.role) {
                case ColumnRole::Id: rec.id = columns_[src].strs[r]; break;
                case ColumnRole::Events: break;  // copied via rec.events
                case ColumnRole::Sensitive:
                    rec.strings[col.name] = columns_[src].strs[r];
                    break;
                case ColumnRole::Label: break;  // copied via rec.labels
                case ColumnRole::Feature:
                    if (col.type == ColumnType::Str)
                        rec.strings[col.name] = columns_[src].strs[r];
                    else
                        rec.numbers[col.name] = columns_[src].nums[r];
                    break;
            }
        }
        rec.events = events_[r];
        if (has_labels_) {
            rec.labels = labels_[r];
            rec.has_labels = true;
        }
        out.append(rec);
    }
    return out;
}

Dataset Dataset::load(const std::string& csv_path, const Schema& schema,
                      const LoadOptions& options) {
    CsvTable table = read_csv(csv_path);
    std::vector<int> csv_index(schema.columns.size());
    for (size_t i = 0; i < schema.columns.size(); ++i) {
        int c = table.column(schema.columns[i].name);
        if (c < 0)
            throw SchemaError(csv_path + ": missing column '" + schema.columns[i].name + "'");
        csv_index[i] = c;
    }
    Dataset data(schema);
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        std::string where = csv_path + " row " + std::to_string(r + 1);
        RecordData rec;
        for (size_t i = 0; i < schema.columns.size(); ++i) {
            const Column& col = schema.columns[i];
            const std::string& cell = row[csv_index[i]];
            switch (col.role) {
                case ColumnRole::Id: rec.id = cell; break;
                case ColumnRole::Events:
                    rec.events = parse_events(cell, where);
                    break;
                case ColumnRole::Sensitive: rec.strings[col.name] = cell; break;
                case ColumnRole::Label: {
                    double v = parse_double(cell, where + " column " + col.name);
                    if (v != 0.0 && v != 1.0)
                        throw ValidationError(where + ": label " + col.name +
                                              " must be 0 or 1");
                    rec.numbers[col.name] = v;  // placed into labels below
                    break;
                }
                case ColumnRole::Feature:
                    if (col.type == ColumnType::Str)
                        rec.strings[col.name] = cell;
                    else
                        rec.numbers[col.name] = parse_double(
                            cell, where + " column " + col.name);
                    break;
            }
        }
        // Assemble the LabelSet: explicit label columns win over events.
        auto label_names = LabelSet::names();
        bool explicit_labels = std::all_of(
            label_names.begin(), label_names.end(),
            [&](const std::string& n) { return rec.numbers.count(n) > 0; });
        if (explicit_labels) {
            for (int t = 0; t < 6; ++t) {
                rec.labels.two_year[t] = rec.numbers[LabelSet::name(t, false)] != 0.0;
                rec.labels.six_month[t] = rec.numbers[LabelSet::name(t, true)] != 0.0;
            }
            rec.has_labels = true;
            for (const auto& n : label_names) rec.numbers.erase(n);
        } else if (!rec.events.empty() || data.events_column_ >= 0) {
            rec.labels = build_labels(rec.events, options.convicted_only);
            rec.has_labels = true;
        }
        try {
            data.append(rec);
        } catch (const UserError& e) {
            throw ValidationError(where + ": " + e.what());
        }
    }
    return data;
}

void Dataset::save(const std::string& csv_path) const {
    CsvTable table;
    for (const auto& col : schema_.columns) table.header.push_back(col.name);
    table.rows.reserve(size_);
    for (size_t r = 0; r < size_; ++r) {
        std::vector<std::string> row;
        row.reserve(schema_.columns.size());
        for (size_t i = 0; i < schema_.columns.size(); ++i) {
            const Column& col = schema_.columns[i];
            bool text = col.role == ColumnRole::Id || col.role == ColumnRole::Sensitive ||
                        col.role == ColumnRole::Events || col.type == ColumnType::Str;
            if (text)
                row.push_back(columns_[i].strs[r]);
            else
                row.push_back(format_number(columns_[i].nums[r]));
        }
        table.rows.push_back(std::move(row));
    }
    write_csv(csv_path, table);
}

// ---- RecordView ----

bool RecordView::has(const std::string& name) const {
    return data_->schema_.index(name) >= 0;
}

bool RecordView::is_numeric(const std::string& name) const {
    const Column* col = data_->schema_.find(name);
    if (!col) throw SchemaError("record has no feature '" + name + "'");
    return col->type != ColumnType::Str && col->role != ColumnRole::Id &&
           col->role != ColumnRole::Sensitive && col->role != ColumnRole::Events;
}

double RecordView::numeric(const std::string& name) const {
    int i = data_->schema_.index(name);
    if (i < 0) throw SchemaError("record has no feature '" + name + "'");
    const Column& col = data_->schema_.columns[i];
    if (col.type == ColumnType::Str || col.role == ColumnRole::Id ||
        col.role == ColumnRole::Sensitive || col.role == ColumnRole::Events)
        throw ValueTypeError("feature '" + name + "' is not numeric");
    return data_->columns_[i].nums[row_];
}

const std::string& RecordView::text(const std::string& name) const {
    int i = data_->schema_.index(name);
    if (i < 0) throw SchemaError("record has no feature '" + name + "'");
    const Column& col = data_->schema_.columns[i];
    if (!(col.type == ColumnType::Str || col.role == ColumnRole::Id ||
          col.role == ColumnRole::Sensitive))
        throw ValueTypeError("feature '" + name + "' is not categorical");
    return data_->columns_[i].strs[row_];
}

}  // namespace riskscore
