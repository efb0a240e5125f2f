#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

namespace rankscreen {

// Rank (1-based, descending |score|, ties to the smaller index) of the
// worst-ranked true variable: the smallest d such that the top-d selection
// covers the true support. Requires a nonempty true support.
int minimum_model_size(const Eigen::VectorXd& scores, std::span<const int> true_support);

// Median (midpoint of the two central order statistics for even counts)
// and IQR/1.34 with linear-interpolation (type-7) quartiles.
std::pair<double, double> mmms_rsd(std::span<const int> sizes);

// Fraction of replications whose selected set covers the true support.
double inclusion_proportion(const std::vector<std::vector<int>>& selected_sets,
                            std::span<const int> true_support);

// True iff `selected` (any order) covers `true_support`.
bool covers(std::span<const int> selected, std::span<const int> true_support);

}  // namespace rankscreen
