#include "rankscreen/iterative.hpp"

#include "rankscreen/core_stats.hpp"
#include "rankscreen/parallel.hpp"
#include "rankscreen/screening.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace rankscreen {

namespace {

std::vector<int> complement_of(std::span<const int> active, Eigen::Index p) {
    std::vector<char> in_active(static_cast<std::size_t>(p), 0);
    for (int a : active) in_active[static_cast<std::size_t>(a)] = 1;
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(p) - active.size());
    for (Eigen::Index k = 0; k < p; ++k)
        if (!in_active[static_cast<std::size_t>(k)]) out.push_back(static_cast<int>(k));
    return out;
}

void check_fitted(const Dataset& d, const FitResult& fitted, std::span<const int> active) {
    if (fitted.beta.size() != static_cast<Eigen::Index>(active.size()))
        throw std::invalid_argument("residual scores: beta not aligned with active set");
    for (int a : active)
        if (a < 0 || a >= d.p()) throw std::invalid_argument("residual scores: active index out of range");
}

}  // namespace

ResidualScores residual_rank_scores_linear(const Dataset& d, const FitResult& fitted,
                                           std::span<const int> active, int threads) {
    d.validate();
    check_fitted(d, fitted, active);
    Eigen::VectorXd ystar = d.y;
    for (std::size_t j = 0; j < active.size(); ++j)
        ystar -= fitted.beta[static_cast<Eigen::Index>(j)] * d.X.col(active[j]);

    ResidualScores out;
    out.columns = complement_of(active, d.p());
    out.scores.resize(static_cast<Eigen::Index>(out.columns.size()));
    const std::span<const double> ys{ystar.data(), static_cast<std::size_t>(ystar.size())};
    parallel_for_index(out.columns.size(), threads, [&](std::size_t i) {
        out.scores[static_cast<Eigen::Index>(i)] = kendall_tau(d.column(out.columns[i]), ys) / 4.0;
    });
    return out;
}

ResidualScores residual_rank_scores_transformation(const Dataset& d, const FitResult& fitted,
                                                   std::span<const int> active, int threads) {
    d.validate();
    check_fitted(d, fitted, active);
    Eigen::VectorXd index_values = Eigen::VectorXd::Zero(d.n());
    for (std::size_t j = 0; j < active.size(); ++j)
        index_values += fitted.beta[static_cast<Eigen::Index>(j)] * d.X.col(active[j]);

    ResidualScores out;
    out.columns = complement_of(active, d.p());
    out.scores.resize(static_cast<Eigen::Index>(out.columns.size()));
    const std::span<const double> y = d.response();
    const std::span<const double> v{index_values.data(), static_cast<std::size_t>(index_values.size())};
    const auto n = static_cast<std::int64_t>(d.n());
    const auto ordered = n * (n - 1);
    parallel_for_index(out.columns.size(), threads, [&](std::size_t i) {
        const auto x = d.column(out.columns[i]);
        // sum_{i!=j} [I(y_i<y_j) - I(v_i<v_j)] I(x_il<x_jl) splits into two
        // strict-concordance counts; keeping the arithmetic in integers
        // makes the empty-active reduction to omega exact.
        const std::int64_t count_y = concordance_counts(x, y).concordant;
        const std::int64_t count_v = concordance_counts(x, v).concordant;
        out.scores[static_cast<Eigen::Index>(i)] =
            static_cast<double>(4 * (count_y - count_v) - ordered) /
            static_cast<double>(4 * ordered);
    });
    return out;
}

namespace {

// Pearson-type residual scores for the SIS comparator: standardized column
// against the working residual.
ResidualScores residual_pearson_scores(const Dataset& d, const FitResult& fitted,
                                       std::span<const int> active, int threads) {
    check_fitted(d, fitted, active);
    Eigen::VectorXd ystar = d.y;
    for (std::size_t j = 0; j < active.size(); ++j)
        ystar -= fitted.beta[static_cast<Eigen::Index>(j)] * d.X.col(active[j]);

    ResidualScores out;
    out.columns = complement_of(active, d.p());
    out.scores.resize(static_cast<Eigen::Index>(out.columns.size()));
    parallel_for_index(out.columns.size(), threads, [&](std::size_t i) {
        const auto k = out.columns[i];
        const Eigen::VectorXd xc = d.X.col(k).array() - d.X.col(k).mean();
        const double norm = xc.norm();
        out.scores[static_cast<Eigen::Index>(i)] = norm == 0.0 ? 0.0 : xc.dot(ystar) / norm;
    });
    return out;
}

// Top `take` column indices by |score|, ties to the smaller column index.
std::vector<int> top_columns(const std::vector<int>& columns, const Eigen::VectorXd& scores,
                             int take) {
    std::vector<std::size_t> order(columns.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double sa = std::abs(scores[static_cast<Eigen::Index>(a)]);
        const double sb = std::abs(scores[static_cast<Eigen::Index>(b)]);
        if (sa != sb) return sa > sb;
        return columns[a] < columns[b];
    });
    std::vector<int> picked;
    picked.reserve(static_cast<std::size_t>(take));
    for (int i = 0; i < take && i < static_cast<int>(order.size()); ++i)
        picked.push_back(columns[order[static_cast<std::size_t>(i)]]);
    std::sort(picked.begin(), picked.end());
    return picked;
}

IterativeResult run_iterative(const Dataset& d, const IterativeConfig& cfg) {
    d.validate();
    const int n = static_cast<int>(d.n());
    const int p = static_cast<int>(d.p());
    int screen_size = cfg.per_round_screen_size > 0 ? cfg.per_round_screen_size
                                                    : default_model_size(n);
    screen_size = std::clamp(screen_size, 1, p);
    int budget = cfg.size_budget > 0 ? cfg.size_budget : n - 1;
    budget = std::min(budget, p);
    if (budget >= n) throw std::invalid_argument("iterative: size_budget must be < n");
    if (cfg.max_rounds < 1) throw std::invalid_argument("iterative: max_rounds must be >= 1");

    IterativeResult result;
    auto& trace = result.trace;
    std::vector<int> accumulated;         // union of round supports, ascending
    std::vector<int> latest_candidate;    // columns of the latest refit
    FitResult latest_fit;

    trace.stop_reason = StopReason::max_rounds;
    for (int round = 0; round < cfg.max_rounds; ++round) {
        const int cap = std::min(screen_size, budget - static_cast<int>(accumulated.size()));
        if (cap <= 0) {
            trace.stop_reason = StopReason::budget_reached;
            break;
        }

        // Screen: marginal scores in round 1, residual-type scores after.
        std::vector<int> pool;
        Eigen::VectorXd pool_scores;
        if (round == 0) {
            pool = complement_of(std::span<const int>{}, p);
            pool_scores = cfg.comparator == Comparator::rrcs ? rrcs_scores(d, cfg.threads)
                                                             : sis_scores(d, cfg.threads);
        } else {
            ResidualScores rs;
            if (cfg.model == ModelKind::transformation) {
                rs = residual_rank_scores_transformation(d, latest_fit, latest_candidate, cfg.threads);
            } else if (cfg.model == ModelKind::logistic) {
                // Rank screening on the raw response, restricted to inactive
                // columns; the binary y never yields usable residuals.
                rs.columns = complement_of(accumulated, p);
                rs.scores.resize(static_cast<Eigen::Index>(rs.columns.size()));
                const auto y = d.response();
                parallel_for_index(rs.columns.size(), cfg.threads, [&](std::size_t i) {
                    rs.scores[static_cast<Eigen::Index>(i)] =
                        kendall_tau(d.column(rs.columns[i]), y) / 4.0;
                });
            } else if (cfg.comparator == Comparator::rrcs) {
                rs = residual_rank_scores_linear(d, latest_fit, latest_candidate, cfg.threads);
            } else {
                rs = residual_pearson_scores(d, latest_fit, latest_candidate, cfg.threads);
            }
            // Screening never revisits columns already in the union.
            pool.clear();
            std::vector<double> kept_scores;
            for (std::size_t i = 0; i < rs.columns.size(); ++i) {
                if (!std::binary_search(accumulated.begin(), accumulated.end(), rs.columns[i])) {
                    pool.push_back(rs.columns[i]);
                    kept_scores.push_back(rs.scores[static_cast<Eigen::Index>(i)]);
                }
            }
            pool_scores = Eigen::Map<Eigen::VectorXd>(kept_scores.data(),
                                                      static_cast<Eigen::Index>(kept_scores.size()));
        }

        IterationRound r;
        r.screened = top_columns(pool, pool_scores, cap);
        r.candidate = accumulated;
        r.candidate.insert(r.candidate.end(), r.screened.begin(), r.screened.end());
        std::sort(r.candidate.begin(), r.candidate.end());
        r.candidate.erase(std::unique(r.candidate.begin(), r.candidate.end()), r.candidate.end());

        // Refit on the joint candidate set.
        Dataset sub = d.subset(r.candidate);
        try {
            switch (cfg.model) {
                case ModelKind::linear: {
                    const FitKind kind = cfg.comparator == Comparator::rrcs ? FitKind::linear_huber
                                                                            : FitKind::linear_ls;
                    const auto grid = default_lambda_grid(sub, kind, cfg.lambda_grid_points);
                    r.refit = select_lambda_bic(sub, cfg.penalty, kind, grid).fit;
                    break;
                }
                case ModelKind::transformation: {
                    const auto grid = default_lambda_grid(sub, FitKind::psmrc, cfg.lambda_grid_points);
                    r.refit = select_lambda_bic(sub, cfg.penalty, FitKind::psmrc, grid, cfg.smoothing).fit;
                    break;
                }
                case ModelKind::logistic: {
                    const auto grid = default_lambda_grid(sub, FitKind::logistic, cfg.lambda_grid_points);
                    r.refit = select_lambda_bic(sub, cfg.penalty, FitKind::logistic, grid).fit;
                    break;
                }
            }
        } catch (const std::exception& err) {
            trace.stop_reason = StopReason::refit_failure;
            trace.failure_message = err.what();
            break;
        }

        std::vector<int> support_cols;
        for (int local : r.refit.support) support_cols.push_back(r.candidate[static_cast<std::size_t>(local)]);
        for (int c : support_cols)
            if (!std::binary_search(accumulated.begin(), accumulated.end(), c)) r.added.push_back(c);

        std::vector<int> merged = accumulated;
        merged.insert(merged.end(), r.added.begin(), r.added.end());
        std::sort(merged.begin(), merged.end());
        accumulated = merged;
        r.accumulated = accumulated;

        latest_candidate = r.candidate;
        latest_fit = r.refit;
        const bool no_new = r.added.empty();
        trace.rounds.push_back(std::move(r));

        if (no_new) {
            trace.stop_reason = StopReason::no_new_variables;
            break;
        }
        if (static_cast<int>(accumulated.size()) >= budget) {
            trace.stop_reason = StopReason::budget_reached;
            break;
        }
        trace.stop_reason = StopReason::max_rounds;
    }

    result.selected = accumulated;
    return result;
}

}  // namespace

IterativeResult irrcs(const Dataset& d, const IterativeConfig& cfg) {
    IterativeConfig c = cfg;
    c.comparator = Comparator::rrcs;
    return run_iterative(d, c);
}

IterativeResult isis(const Dataset& d, const IterativeConfig& cfg) {
    IterativeConfig c = cfg;
    c.comparator = Comparator::sis;
    return run_iterative(d, c);
}

}  // namespace rankscreen
