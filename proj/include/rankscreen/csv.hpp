#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankscreen {

class CsvError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // each row has header.size() cells
};

// Strict comma-separated parser: one header row, no quoting, every row must
// match the header width. Throws CsvError with the offending line number.
CsvTable read_csv(const std::string& path);

struct NumericTable {
    std::vector<std::string> columns;
    Eigen::MatrixXd values;  // rows x columns
};

// read_csv plus numeric parsing of every cell.
NumericTable read_numeric_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace rankscreen
