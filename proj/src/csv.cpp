#include "spdc/csv.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spdc/errors.hpp"

namespace spdc {

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    for (auto& t : out) {
        const auto b = t.find_first_not_of(" \t");
        const auto e = t.find_last_not_of(" \t\r");
        t = (b == std::string::npos) ? std::string{} : t.substr(b, e - b + 1);
    }
    return out;
}

[[noreturn]] void fail(const std::string& path, int line, int col, const std::string& msg) {
    std::ostringstream os;
    os << path << ":" << line;
    if (col > 0) os << ":" << col;
    os << ": " << msg;
    throw data_error(os.str());
}

}  // namespace

int CsvTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    throw data_error("missing column \"" + name + "\"");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::map<std::string, std::string>& meta,
               const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw data_error("cannot open " + tmp + " for writing");
        for (const auto& [k, v] : meta) os << "# " << k << ": " << v << "\n";
        if (!columns.empty()) {
            os << "# columns: ";
            for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
            os << "\n";
        }
        for (const auto& r : rows) {
            if (!columns.empty() && r.size() != columns.size())
                throw data_error("row width " + std::to_string(r.size()) + " does not match column count");
            for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
            os << "\n";
        }
        if (!os) throw data_error("short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw data_error("cannot open " + path);
    CsvTable t;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            const auto b = body.find_first_not_of(" \t");
            if (b == std::string::npos) continue;
            body = body.substr(b);
            const auto colon = body.find(':');
            if (colon == std::string::npos) continue;  // free-form comment
            const std::string key = body.substr(0, colon);
            std::string val = body.substr(colon + 1);
            const auto vb = val.find_first_not_of(" \t");
            val = (vb == std::string::npos) ? std::string{} : val.substr(vb);
            if (key == "columns")
                t.columns = split_commas(val);
            else
                t.meta[key] = val;
            continue;
        }
        const auto cells = split_commas(line);
        if (!t.columns.empty() && cells.size() != t.columns.size())
            fail(path, lineno, 0,
                 "expected " + std::to_string(t.columns.size()) + " columns, got " + std::to_string(cells.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (size_t c = 0; c < cells.size(); ++c) {
            double v = 0.0;
            const auto& cell = cells[c];
            const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || p != cell.data() + cell.size())
                fail(path, lineno, static_cast<int>(c) + 1, "cannot parse \"" + cell + "\" as a number");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace spdc
