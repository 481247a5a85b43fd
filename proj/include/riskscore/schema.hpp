#pragma once

#include <string>
#include <vector>

namespace riskscore {

enum class ColumnType { Int, Real, Bool, Str };
enum class ColumnRole { Id, Sensitive, Feature, Label, Events };

struct Column {
    std::string name;
    ColumnType type = ColumnType::Real;
    ColumnRole role = ColumnRole::Feature;
};

// Declares the columns of a tabular data file: `name type role` per line.
// Types: int real bool str. Roles: id sensitive feature label events.
struct Schema {
    std::vector<Column> columns;

    int index(const std::string& name) const;  // -1 if absent
    const Column* find(const std::string& name) const;
    std::vector<std::string> names(ColumnRole role) const;
    std::vector<std::string> feature_names() const { return names(ColumnRole::Feature); }

    static Schema load(const std::string& path);
    static Schema parse(const std::string& text, const std::string& origin);
    void save(const std::string& path) const;
    std::string to_text() const;
};

std::string to_string(ColumnType type);
std::string to_string(ColumnRole role);

// Sorted intersection of two schemas' feature names. Id and sensitive columns
// stay out unless include_sensitive is set.
std::vector<std::string> shared_schema(const Schema& a, const Schema& b,
                                       bool include_sensitive = false);

}  // namespace riskscore
