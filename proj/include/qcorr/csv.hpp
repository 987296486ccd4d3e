#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcorr {

// Fixed CSV dialect: comma separator, header row, '.' decimal point,
// LF line endings, 12 significant digits for reals.
inline std::string format_real(double v, int significant = 12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant, v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }

    int require_column(const std::string& name) const {
        const int c = column(name);
        if (c < 0) throw std::out_of_range("csv: missing column '" + name + "'");
        return c;
    }
};

inline std::string csv_to_string(const CsvTable& t) {
    std::ostringstream out;
    for (std::size_t i = 0; i < t.header.size(); ++i)
        out << t.header[i] << (i + 1 < t.header.size() ? "," : "");
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "");
        out << "\n";
    }
    return out.str();
}

inline void write_csv(const CsvTable& t, const std::string& path) {
    std::ofstream f(path, std::ios::binary);  // binary: keep LF endings everywhere
    if (!f) throw std::runtime_error("csv: cannot open '" + path + "' for writing");
    f << csv_to_string(t);
}

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(field);
            field.clear();
        } else if (ch != '\r') {
            field.push_back(ch);
        }
    }
    out.push_back(field);
    return out;
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("csv: cannot open '" + path + "'");
    CsvTable t;
    std::string line;
    if (std::getline(f, line)) t.header = split_line(line);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        t.rows.push_back(split_line(line));
    }
    return t;
}

}  // namespace qcorr
