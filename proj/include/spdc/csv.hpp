#pragma once

#include <map>
#include <string>
#include <vector>

namespace spdc {

// CSV with '#'-prefixed header lines. "# key: value" pairs carry run
// metadata, "# columns: a,b,c" names the data columns. Numeric payload only;
// floats are written with %.17g in the C locale so equal runs produce equal
// bytes. Writes land in a temp file and are renamed into place.

struct CsvTable {
    std::map<std::string, std::string> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column_index(const std::string& name) const;  // throws data_error if absent
};

void write_csv(const std::string& path, const std::map<std::string, std::string>& meta,
               const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows);

// Throws data_error with file:line:column context on malformed input.
CsvTable read_csv(const std::string& path);

std::string format_double(double v);  // %.17g

}  // namespace spdc
