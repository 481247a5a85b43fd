#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace riskscore {

// Minimal RFC-4180-ish table: quoted fields with embedded commas/quotes are
// understood, rows are vectors of strings. Good enough for the data files
// this toolkit reads and writes; not a general CSV library.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 if absent
};

CsvTable read_csv(const std::string& path);
CsvTable read_csv_stream(std::istream& in, const std::string& name);
void write_csv(const std::string& path, const CsvTable& table);
std::string csv_escape(const std::string& field);

}  // namespace riskscore
