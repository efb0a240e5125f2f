#pragma once

#include <Eigen/Dense>
#include <span>
#include <stdexcept>
#include <vector>

namespace rankscreen {

enum class ColumnKind { continuous, categorical };

// Predictor matrix plus response. X is column-major (Eigen default), so
// X.col(k) is a contiguous view suitable for the rank kernels.
struct Dataset {
    Eigen::MatrixXd X;  // n x p
    Eigen::VectorXd y;  // n
    std::vector<ColumnKind> column_kinds;  // empty means all-continuous

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index p() const { return X.cols(); }

    std::span<const double> column(Eigen::Index k) const {
        return {X.col(k).data(), static_cast<std::size_t>(X.rows())};
    }
    std::span<const double> response() const {
        return {y.data(), static_cast<std::size_t>(y.size())};
    }

    // Throws std::invalid_argument on shape violations or non-finite
    // entries. Score functions validate once up front.
    void validate() const {
        if (X.rows() < 2) throw std::invalid_argument("Dataset: need n >= 2");
        if (X.cols() < 1) throw std::invalid_argument("Dataset: need p >= 1");
        if (y.size() != X.rows()) throw std::invalid_argument("Dataset: y length != n");
        if (!column_kinds.empty() && static_cast<Eigen::Index>(column_kinds.size()) != X.cols())
            throw std::invalid_argument("Dataset: column_kinds length != p");
        if (!X.allFinite()) throw std::invalid_argument("Dataset: non-finite entry in X");
        if (!y.allFinite()) throw std::invalid_argument("Dataset: non-finite entry in y");
    }

    // Submatrix view over the given columns, same response.
    Dataset subset(std::span<const int> columns) const {
        Dataset d;
        d.X.resize(X.rows(), static_cast<Eigen::Index>(columns.size()));
        for (std::size_t j = 0; j < columns.size(); ++j) d.X.col(static_cast<Eigen::Index>(j)) = X.col(columns[j]);
        d.y = y;
        if (!column_kinds.empty()) {
            d.column_kinds.reserve(columns.size());
            for (int c : columns) d.column_kinds.push_back(column_kinds[static_cast<std::size_t>(c)]);
        }
        return d;
    }
};

}  // namespace rankscreen
