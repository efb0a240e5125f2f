// Marginal screening over all p predictors and submodel selection.
//
// rrcs_scores ranks by the rank-correlation statistic; sis_scores by the
// standardized inner product with the response; gcorr_scores by polynomial
// generalized correlation; mmle_scores by the marginal logistic slope.
// Score computation parallelizes over columns into disjoint slots, so the
// result is identical for any thread count.

#pragma once

#include "rankscreen/dataset.hpp"

#include <Eigen/Dense>
#include <vector>

namespace rankscreen {

enum class ScreenMethod { rrcs, sis, gcorr, mmle };

struct ThresholdRule {
    enum class Kind { top_d, threshold };
    Kind kind = Kind::top_d;
    int d = 0;            // top_d: number of indices to keep
    double gamma = 0.0;   // threshold: keep |score| > gamma

    static ThresholdRule top(int d);
    // top_d with d resolved to n - 1 by the consumer (harness contract).
    static ThresholdRule top_default() { return ThresholdRule{}; }
    static ThresholdRule above(double gamma);
    // gamma_n = c5 * n^(-kappa); requires c5 > 0 and 0 < kappa < 1/2.
    static ThresholdRule power(double c5, double kappa, int n);
};

// Marginal rank correlation score per column: kendall_tau(X_k, y) / 4.
// On tie-free data this equals the strict-indicator omega statistic
// exactly; under ties it keeps the null at zero for every column type, so
// ranking magnitudes stays meaningful for categorical predictors and
// binary responses. Bit-exactly invariant under strictly increasing
// transformations of y or of any individual column.
Eigen::VectorXd rrcs_scores(const Dataset& d, int threads = 1);

// Each column standardized to mean 0, variance 1 ((n-1)-divisor), then
// score_k = <x_k_std, y>. Throws DegenerateColumnError naming the first
// zero-variance column.
Eigen::VectorXd sis_scores(const Dataset& d, int threads = 1);

struct GcorrResult {
    Eigen::VectorXd scores;
    std::vector<int> fallback_columns;  // rank-deficient basis, reduced fit
};

// score_k = sqrt(R^2) from least squares of y on the centered polynomial
// basis {x_k, x_k^2, ..., x_k^degree}. A rank-deficient basis falls back
// to the largest well-conditioned sub-basis (column-pivoted QR) and the
// column is flagged.
GcorrResult gcorr_scores(const Dataset& d, int degree = 3, int threads = 1);

struct MmleResult {
    Eigen::VectorXd scores;
    std::vector<int> separated_columns;  // perfect separation, +inf sentinel
};

// score_k = |slope| of the intercept+slope logistic fit of y on the
// standardized column, Newton-Raphson (max 50 iterations, gradient
// tolerance 1e-8). Requires y in {0,1}^n with both classes present.
MmleResult mmle_scores(const Dataset& d, int threads = 1);

// Permutation of 0..p-1 ordering |scores| descending, ties broken by
// smaller index.
std::vector<int> rank_order(const Eigen::VectorXd& scores);

// top_d: exactly d indices of largest |score| in rank order.
// threshold: {k : |score_k| > gamma} in ascending index order.
std::vector<int> select(const Eigen::VectorXd& scores, const ThresholdRule& rule);

// floor(n / ln n); requires n >= 3. Callers clamp to [1, p].
int default_model_size(int n);

struct ScreeningResult {
    Eigen::VectorXd scores;     // |score| magnitudes
    ScreenMethod method = ScreenMethod::rrcs;
    std::vector<int> order;     // rank_order of the signed scores
    std::vector<int> selected;
    std::vector<int> flagged;   // gcorr fallbacks / mmle separations
};

ScreeningResult screen(const Dataset& d, ScreenMethod method, const ThresholdRule& rule,
                       int gcorr_degree = 3, int threads = 1);

}  // namespace rankscreen
