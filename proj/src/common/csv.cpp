#include "riskscore/csv.hpp"

#include <fstream>
#include <sstream>

#include "riskscore/errors.hpp"

namespace riskscore {

namespace {

std::vector<std::string> parse_line(const std::string& line, int line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c == '\r') {
            // tolerated at line end
        } else {
            cur += c;
        }
    }
    if (quoted) throw ParseError("unterminated quote", line_no);
    fields.push_back(std::move(cur));
    return fields;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable read_csv_stream(std::istream& in, const std::string& name) {
    CsvTable table;
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw ParseError(name + ": empty file");
    ++line_no;
    table.header = parse_line(line, line_no);
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = parse_line(line, line_no);
        if (fields.size() != table.header.size())
            throw ParseError(name + ": expected " + std::to_string(table.header.size()) +
                                 " fields, got " + std::to_string(fields.size()),
                             line_no);
        table.rows.push_back(std::move(fields));
    }
    return table;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UserError("cannot open " + path);
    return read_csv_stream(in, path);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path);
    if (!out) throw UserError("cannot write " + path);
    for (size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(table.header[i]);
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << csv_escape(row[i]);
        }
        out << '\n';
    }
}

}  // namespace riskscore
