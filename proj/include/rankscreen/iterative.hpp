// Iterative screening: alternate marginal screening on residual-type
// quantities with penalized refitting until the accumulated model reaches
// the size budget. The RRCS comparator refits with Huber M-estimation
// (linear), PSMRC (transformation) or penalized logistic IRLS; the SIS
// comparator screens by Pearson-type scores and refits by least squares.

#pragma once

#include "rankscreen/dataset.hpp"
#include "rankscreen/estimation.hpp"

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace rankscreen {

enum class ModelKind { linear, transformation, logistic };
enum class Comparator { rrcs, sis };

struct IterativeConfig {
    ModelKind model = ModelKind::linear;
    Comparator comparator = Comparator::rrcs;
    int per_round_screen_size = 0;  // 0 -> floor(n / ln n)
    int size_budget = 0;            // 0 -> n - 1
    int max_rounds = 5;
    PenaltyFamily penalty = PenaltyFamily::scad;
    SmoothingSpec smoothing;        // transformation refits
    int lambda_grid_points = 20;
    int threads = 1;
};

enum class StopReason { budget_reached, max_rounds, no_new_variables, refit_failure };

struct IterationRound {
    std::vector<int> screened;     // columns added to the candidate set
    std::vector<int> candidate;    // columns the refit ran over
    FitResult refit;               // beta aligned with candidate
    std::vector<int> added;        // support newly entering the union
    std::vector<int> accumulated;  // union of supports after this round
};

struct IterationTrace {
    std::vector<IterationRound> rounds;
    StopReason stop_reason = StopReason::max_rounds;
    std::string failure_message;  // set when stop_reason == refit_failure
};

struct IterativeResult {
    std::vector<int> selected;  // the accumulated union, ascending
    IterationTrace trace;
};

// Rank scores of the inactive columns against the working residual
// y* = y - X_active * beta: score_l = kendall_tau(x_l, y*) / 4 (the same
// tie-robust form rrcs_scores uses, so a zero fit reduces to plain
// rrcs_scores). beta is aligned with `active`; fitted support must lie in
// `active`.
struct ResidualScores {
    std::vector<int> columns;  // inactive columns, ascending
    Eigen::VectorXd scores;    // aligned with columns
};
ResidualScores residual_rank_scores_linear(const Dataset& d, const FitResult& fitted,
                                           std::span<const int> active, int threads = 1);

// Transformation-model residual scores, literal form:
//   omega_l = (1/(n(n-1))) sum_{i != j} [I(y_i < y_j) - I(v_i < v_j)]
//             * I(x_il < x_jl) - 1/4,  v = X_active * beta.
// The bracket difference makes the score range shift by -1/4 when the
// fitted index already rank-matches y. Computed as
// omega(x_l, y) - omega(x_l, v) - 1/4, which equals the double loop exactly.
ResidualScores residual_rank_scores_transformation(const Dataset& d, const FitResult& fitted,
                                                   std::span<const int> active, int threads = 1);

IterativeResult irrcs(const Dataset& d, const IterativeConfig& cfg);
IterativeResult isis(const Dataset& d, const IterativeConfig& cfg);

}  // namespace rankscreen
