#include "riskscore/schema.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "riskscore/errors.hpp"
#include "riskscore/text.hpp"

namespace riskscore {

namespace {

ColumnType parse_type(std::string_view token, int line) {
    if (token == "int") return ColumnType::Int;
    if (token == "real") return ColumnType::Real;
    if (token == "bool") return ColumnType::Bool;
    if (token == "str") return ColumnType::Str;
    throw ParseError("unknown column type '" + std::string(token) + "'", line);
}

ColumnRole parse_role(std::string_view token, int line) {
    if (token == "id") return ColumnRole::Id;
    if (token == "sensitive") return ColumnRole::Sensitive;
    if (token == "feature") return ColumnRole::Feature;
    if (token == "label") return ColumnRole::Label;
    if (token == "events") return ColumnRole::Events;
    throw ParseError("unknown column role '" + std::string(token) + "'", line);
}

}  // namespace

std::string to_string(ColumnType type) {
    switch (type) {
        case ColumnType::Int: return "int";
        case ColumnType::Real: return "real";
        case ColumnType::Bool: return "bool";
        case ColumnType::Str: return "str";
    }
    return "?";
}

std::string to_string(ColumnRole role) {
    switch (role) {
        case ColumnRole::Id: return "id";
        case ColumnRole::Sensitive: return "sensitive";
        case ColumnRole::Feature: return "feature";
        case ColumnRole::Label: return "label";
        case ColumnRole::Events: return "events";
    }
    return "?";
}

int Schema::index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == name) return static_cast<int>(i);
    return -1;
}

const Column* Schema::find(const std::string& name) const {
    int i = index(name);
    return i < 0 ? nullptr : &columns[i];
}

std::vector<std::string> Schema::names(ColumnRole role) const {
    std::vector<std::string> out;
    for (const auto& c : columns)
        if (c.role == role) out.push_back(c.name);
    return out;
}

Schema Schema::parse(const std::string& text, const std::string& origin) {
    Schema schema;
    std::set<std::string> seen;
    int line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        std::string_view line = trim(raw);
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        std::istringstream tok{std::string(line)};
        std::string name, type, role;
        tok >> name >> type >> role;
        if (name.empty() || type.empty() || role.empty())
            throw ParseError(origin + ": expected 'name type role'", line_no);
        if (!seen.insert(name).second)
            throw ParseError(origin + ": duplicate column '" + name + "'", line_no);
        Column col;
        col.name = name;
        col.type = parse_type(type, line_no);
        col.role = parse_role(role, line_no);
        if (col.role == ColumnRole::Events && col.type != ColumnType::Str)
            throw ParseError(origin + ": events column must have type str", line_no);
        if (col.role == ColumnRole::Label && col.type != ColumnType::Bool)
            throw ParseError(origin + ": label column must have type bool", line_no);
        schema.columns.push_back(std::move(col));
    }
    if (schema.columns.empty()) throw ParseError(origin + ": empty schema");
    return schema;
}

Schema Schema::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UserError("cannot open schema " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

std::string Schema::to_text() const {
    std::string out;
    for (const auto& c : columns)
        out += c.name + " " + to_string(c.type) + " " + to_string(c.role) + "\n";
    return out;
}

void Schema::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw UserError("cannot write schema " + path);
    out << to_text();
}

std::vector<std::string> shared_schema(const Schema& a, const Schema& b,
                                       bool include_sensitive) {
    auto collect = [&](const Schema& s) {
        std::set<std::string> names;
        for (const auto& c : s.columns) {
            if (c.role == ColumnRole::Feature ||
                (include_sensitive && c.role == ColumnRole::Sensitive))
                names.insert(c.name);
        }
        return names;
    };
    auto na = collect(a);
    auto nb = collect(b);
    std::vector<std::string> out;
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(),
                          std::back_inserter(out));
    return out;
}

}  // namespace riskscore
