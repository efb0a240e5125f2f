#include "rankscreen/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace rankscreen {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        // Trim surrounding whitespace.
        const auto first = cell.find_first_not_of(" \t\r");
        const auto last = cell.find_last_not_of(" \t\r");
        cells.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open '" + path + "'");
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (table.header.empty()) {
            table.header = std::move(cells);
            if (table.header.empty()) throw CsvError(path + ": empty header row");
            continue;
        }
        if (cells.size() != table.header.size())
            throw CsvError(path + ":" + std::to_string(lineno) + ": expected " +
                           std::to_string(table.header.size()) + " cells, got " +
                           std::to_string(cells.size()));
        table.rows.push_back(std::move(cells));
    }
    if (table.header.empty()) throw CsvError(path + ": empty file");
    return table;
}

NumericTable read_numeric_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    if (table.rows.empty()) throw CsvError(path + ": no data rows");
    NumericTable out;
    out.columns = table.header;
    out.values.resize(static_cast<Eigen::Index>(table.rows.size()),
                      static_cast<Eigen::Index>(table.header.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            const std::string& cell = table.rows[r][c];
            double v = 0.0;
            const auto* begin = cell.data();
            const auto* end = begin + cell.size();
            const auto res = std::from_chars(begin, end, v);
            if (res.ec != std::errc() || res.ptr != end)
                throw CsvError(path + ": non-numeric cell '" + cell + "' in column '" +
                               table.header[c] + "' (data row " + std::to_string(r + 1) + ")");
            out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        }
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CsvError("cannot write '" + path + "'");
    out << content;
}

}  // namespace rankscreen
