#include "rankscreen/estimation.hpp"

#include "rankscreen/core_stats.hpp"
#include "rankscreen/screening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rankscreen {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kSupportCutoff = 1e-6;
constexpr double kObjectiveTol = 1e-8;
constexpr double kCoefTol = 1e-8;
constexpr double kRidgeJitter = 1e-8;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

double median_inplace(std::vector<double>& v) {
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (n % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

// 1.4826 * median |r - median(r)|, the usual normal-consistent scale.
double mad(const Eigen::VectorXd& r) {
    std::vector<double> v(r.data(), r.data() + r.size());
    const double med = median_inplace(v);
    for (double& x : v) x = std::abs(x - med);
    return 1.482602 * median_inplace(v);
}

// Ordered pairs with y_i > y_j; the only pairs the MRC sums ever touch.
std::vector<std::pair<int, int>> descending_pairs(const Eigen::VectorXd& y) {
    const auto n = y.size();
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (y[i] > y[j]) pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return pairs;
}

double smoothed_mrc_from_pairs(const std::vector<std::pair<int, int>>& pairs,
                               const Eigen::VectorXd& index_values, double h, Eigen::Index n) {
    double sum = 0.0;
    for (const auto& [i, j] : pairs) sum += normal_cdf((index_values[i] - index_values[j]) / h);
    return sum / (static_cast<double>(n) * static_cast<double>(n - 1));
}

std::vector<int> support_of(const Eigen::VectorXd& beta) {
    std::vector<int> s;
    for (Eigen::Index k = 0; k < beta.size(); ++k)
        if (beta[k] != 0.0) s.push_back(static_cast<int>(k));
    return s;
}

double penalty_total(const PenaltySpec& pen, const Eigen::VectorXd& beta) {
    double total = 0.0;
    for (Eigen::Index k = 0; k < beta.size(); ++k) total += penalty_value(pen, std::abs(beta[k]));
    return total;
}

}  // namespace

double resolve_bandwidth(const SmoothingSpec& spec, const Dataset& d, const Eigen::VectorXd& beta_init) {
    spec.validate();
    if (spec.rule == SmoothingSpec::Rule::fixed) return spec.h;
    Eigen::VectorXd b = beta_init;
    const double norm = b.norm();
    if (norm > 0.0) b /= norm;
    const Eigen::VectorXd v = d.X * b;
    const auto n = v.size();
    std::vector<double> diffs;
    diffs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) diffs.push_back(std::abs(v[i] - v[j]));
    double scale = diffs.empty() ? 1.0 : median_inplace(diffs);
    if (!(scale > 0.0)) scale = 1.0;
    return spec.constant * std::pow(static_cast<double>(n), spec.exponent) * scale;
}

double smoothed_mrc_objective(const Eigen::VectorXd& beta, const Dataset& d, double h) {
    d.validate();
    if (!(h > 0.0)) throw std::invalid_argument("smoothed_mrc_objective: h must be > 0");
    if (beta.size() != d.p()) throw std::invalid_argument("smoothed_mrc_objective: beta size != p");
    const Eigen::VectorXd v = d.X * beta;
    const auto pairs = descending_pairs(d.y);
    return smoothed_mrc_from_pairs(pairs, v, h, d.n());
}

Eigen::VectorXd smoothed_mrc_gradient(const Eigen::VectorXd& beta, const Dataset& d, double h) {
    d.validate();
    if (!(h > 0.0)) throw std::invalid_argument("smoothed_mrc_gradient: h must be > 0");
    if (beta.size() != d.p()) throw std::invalid_argument("smoothed_mrc_gradient: beta size != p");
    const auto n = d.n();
    const Eigen::VectorXd v = d.X * beta;
    // sum_{y_i > y_j} phi(d_ij/h)(x_i - x_j) = sum_k (row_k - col_k) x_k
    Eigen::VectorXd row_w = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd col_w = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (d.y[i] > d.y[j]) {
                const double w = normal_pdf((v[i] - v[j]) / h);
                row_w[i] += w;
                col_w[j] += w;
            }
        }
    }
    const Eigen::VectorXd net = row_w - col_w;
    Eigen::VectorXd grad = d.X.transpose() * net;
    grad /= static_cast<double>(n) * static_cast<double>(n - 1) * h;
    return grad;
}

// -----------------------------------------------------------------------------
// PSMRC: LLA outer loop + proximal-gradient ascent on the unit sphere
// -----------------------------------------------------------------------------
//
// The inner loop maximizes the LLA surrogate
//   Q(beta) = S_n(beta) - sum_j w_j |beta_j|,  w_j = p'_lambda(|beta_j^outer|),
// which minorizes L_n up to a constant because the penalties are concave in
// |beta_j|, so every accepted inner step keeps the L_n trace non-decreasing.
//
// Sign convention: the reported point has its first nonzero coordinate
// positive. S_n is not symmetric under beta -> -beta (the transformation
// model identifies the sign), so the flip is applied only when it leaves
// the objective unchanged up to 1e-12; otherwise the maximizer's sign wins.

FitResult fit_psmrc(const Dataset& d, const PenaltySpec& pen, const SmoothingSpec& smooth,
                    const Eigen::VectorXd& init) {
    d.validate();
    pen.validate();
    if (init.size() != d.p()) throw std::invalid_argument("fit_psmrc: init size != p");
    if (init.norm() == 0.0) throw std::invalid_argument("fit_psmrc: init must be nonzero");

    const auto n = d.n();
    const auto p = d.p();
    const double h = resolve_bandwidth(smooth, d, init);
    const auto pairs = descending_pairs(d.y);
    const auto objective_s = [&](const Eigen::VectorXd& b) {
        return smoothed_mrc_from_pairs(pairs, d.X * b, h, n);
    };

    Eigen::VectorXd beta = init / init.norm();
    FitResult out;

    constexpr int kMaxOuter = 500;
    constexpr int kMaxInner = 100;
    double l_prev = -std::numeric_limits<double>::infinity();
    double step = 1.0;

    for (int outer = 0; outer < kMaxOuter; ++outer) {
        Eigen::VectorXd w(p);
        for (Eigen::Index k = 0; k < p; ++k) w[k] = penalty_derivative(pen, std::abs(beta[k]));

        const auto surrogate = [&](const Eigen::VectorXd& b) {
            return objective_s(b) - w.dot(b.cwiseAbs());
        };

        double q = surrogate(beta);
        for (int inner = 0; inner < kMaxInner; ++inner) {
            const double q_before = q;
            const Eigen::VectorXd grad = smoothed_mrc_gradient(beta, d, h);
            double t = step;
            bool accepted = false;
            for (int half = 0; half < 40; ++half) {
                Eigen::VectorXd trial = beta + t * grad;
                for (Eigen::Index k = 0; k < p; ++k) trial[k] = soft_threshold(trial[k], t * w[k]);
                const double trial_norm = trial.norm();
                if (trial_norm > 0.0) {
                    trial /= trial_norm;
                    const double q_trial = surrogate(trial);
                    const double move = (trial - beta).squaredNorm();
                    if (move > 0.0 && q_trial >= q + kArmijo * move / t) {
                        beta = trial;
                        q = q_trial;
                        step = std::min(t * 2.0, 1e3);
                        accepted = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if (!accepted || q - q_before < 1e-10) break;
        }

        const double l_now = objective_s(beta) - penalty_total(pen, beta);
        out.objective_trace.push_back(l_now);
        out.iterations = outer + 1;
        if (std::abs(l_now - l_prev) < kObjectiveTol) {
            out.converged = true;
            break;
        }
        l_prev = l_now;
    }

    // Hard-threshold tiny coordinates and renormalize.
    for (Eigen::Index k = 0; k < p; ++k)
        if (std::abs(beta[k]) < kSupportCutoff) beta[k] = 0.0;
    const double norm = beta.norm();
    if (norm == 0.0) {
        out.beta = beta;
        out.all_zero = true;
        out.converged = true;
        return out;
    }
    beta /= norm;

    for (Eigen::Index k = 0; k < p; ++k) {
        if (beta[k] != 0.0) {
            if (beta[k] < 0.0 && objective_s(-beta) >= objective_s(beta) - 1e-12) beta = -beta;
            break;
        }
    }

    out.beta = beta;
    out.support = support_of(beta);
    return out;
}

// -----------------------------------------------------------------------------
// Penalized linear regression: coordinate descent with LLA, optional Huber
// -----------------------------------------------------------------------------

FitResult fit_penalized_linear(const Dataset& d, const PenaltySpec& pen, LinearLoss loss) {
    d.validate();
    pen.validate();
    const auto n = d.n();
    const auto p = d.p();
    if (n <= p)
        throw std::invalid_argument("fit_penalized_linear: candidate set must be smaller than n");

    const double inv_n = 1.0 / static_cast<double>(n);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd residual = d.y;

    FitResult out;
    constexpr int kMaxOuter = 100;
    constexpr int kMaxSweeps = 1000;

    double delta = 0.0;  // Huber scale, refreshed every outer sweep
    for (int outer = 0; outer < kMaxOuter; ++outer) {
        Eigen::VectorXd obs_w = Eigen::VectorXd::Ones(n);
        if (loss == LinearLoss::huber) {
            delta = std::max(1.345 * mad(residual), 1e-8);
            for (Eigen::Index i = 0; i < n; ++i) {
                const double a = std::abs(residual[i]);
                obs_w[i] = a <= delta ? 1.0 : delta / a;
            }
        }
        Eigen::VectorXd lla_w(p);
        for (Eigen::Index k = 0; k < p; ++k) lla_w[k] = penalty_derivative(pen, std::abs(beta[k]));

        Eigen::VectorXd denom(p);
        for (Eigen::Index k = 0; k < p; ++k) {
            denom[k] = inv_n * d.X.col(k).cwiseProduct(obs_w).dot(d.X.col(k));
            if (denom[k] < kRidgeJitter) {
                denom[k] += kRidgeJitter;
                out.ridge_jitter = true;
            }
        }

        const Eigen::VectorXd beta_outer = beta;
        for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
            double max_change = 0.0;
            for (Eigen::Index k = 0; k < p; ++k) {
                const double old = beta[k];
                const double z =
                    inv_n * d.X.col(k).cwiseProduct(obs_w).dot(residual) + denom[k] * old;
                const double updated = soft_threshold(z, lla_w[k]) / denom[k];
                if (updated != old) {
                    residual -= (updated - old) * d.X.col(k);
                    beta[k] = updated;
                    max_change = std::max(max_change, std::abs(updated - old));
                }
            }
            if (max_change < kCoefTol) break;
        }

        double fit_loss = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r = residual[i];
            if (loss == LinearLoss::least_squares) {
                fit_loss += 0.5 * r * r;
            } else {
                const double a = std::abs(r);
                fit_loss += a <= delta ? 0.5 * r * r : delta * a - 0.5 * delta * delta;
            }
        }
        out.objective_trace.push_back(fit_loss * inv_n + penalty_total(pen, beta));
        out.iterations = outer + 1;
        if ((beta - beta_outer).cwiseAbs().maxCoeff() < kCoefTol && outer > 0) {
            out.converged = true;
            break;
        }
    }

    out.beta = beta;
    out.support = support_of(beta);
    out.all_zero = out.support.empty();
    return out;
}

// -----------------------------------------------------------------------------
// Penalized logistic IRLS (unpenalized intercept)
// -----------------------------------------------------------------------------

LogisticFit fit_penalized_logistic(const Dataset& d, const PenaltySpec& pen) {
    d.validate();
    pen.validate();
    const auto n = d.n();
    const auto p = d.p();
    for (Eigen::Index i = 0; i < n; ++i)
        if (d.y[i] != 0.0 && d.y[i] != 1.0)
            throw std::invalid_argument("fit_penalized_logistic: response must be binary 0/1");
    const double ybar = d.y.mean();
    if (ybar == 0.0 || ybar == 1.0)
        throw std::invalid_argument("fit_penalized_logistic: response must attain both classes");

    const double inv_n = 1.0 / static_cast<double>(n);
    double b0 = std::log(ybar / (1.0 - ybar));
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);

    LogisticFit result;
    FitResult& out = result.fit;
    constexpr int kMaxOuter = 100;
    constexpr double kMinWeight = 1e-5;

    for (int outer = 0; outer < kMaxOuter; ++outer) {
        Eigen::VectorXd eta = (d.X * beta).array() + b0;
        eta = eta.cwiseMax(-30.0).cwiseMin(30.0);
        Eigen::VectorXd mu(n), w(n), z(n);
        double loglik = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            mu[i] = 1.0 / (1.0 + std::exp(-eta[i]));
            w[i] = std::max(mu[i] * (1.0 - mu[i]), kMinWeight);
            z[i] = eta[i] + (d.y[i] - mu[i]) / w[i];
            loglik += d.y[i] * eta[i] - std::log1p(std::exp(eta[i]));
        }
        out.objective_trace.push_back(-loglik * inv_n + penalty_total(pen, beta));
        out.iterations = outer + 1;

        Eigen::VectorXd lla_w(p);
        for (Eigen::Index k = 0; k < p; ++k) lla_w[k] = penalty_derivative(pen, std::abs(beta[k]));

        Eigen::VectorXd denom(p);
        for (Eigen::Index k = 0; k < p; ++k) {
            denom[k] = inv_n * d.X.col(k).cwiseProduct(w).dot(d.X.col(k));
            if (denom[k] < kRidgeJitter) {
                denom[k] += kRidgeJitter;
                out.ridge_jitter = true;
            }
        }

        const double b0_old = b0;
        const Eigen::VectorXd beta_old = beta;
        Eigen::VectorXd residual = z - d.X * beta;
        residual.array() -= b0;
        const double wsum = w.sum();
        for (int sweep = 0; sweep < 200; ++sweep) {
            double max_change = 0.0;
            const double b0_new = b0 + w.dot(residual) / wsum;
            residual.array() -= (b0_new - b0);
            max_change = std::max(max_change, std::abs(b0_new - b0));
            b0 = b0_new;
            for (Eigen::Index k = 0; k < p; ++k) {
                const double old = beta[k];
                const double zk =
                    inv_n * d.X.col(k).cwiseProduct(w).dot(residual) + denom[k] * old;
                const double updated = soft_threshold(zk, lla_w[k]) / denom[k];
                if (updated != old) {
                    residual -= (updated - old) * d.X.col(k);
                    beta[k] = updated;
                    max_change = std::max(max_change, std::abs(updated - old));
                }
            }
            if (max_change < kCoefTol) break;
        }

        const double change =
            std::max((beta - beta_old).cwiseAbs().maxCoeff(), std::abs(b0 - b0_old));
        if (change < 1e-7 && outer > 0) {
            out.converged = true;
            break;
        }
    }

    out.beta = beta;
    out.support = support_of(beta);
    out.all_zero = out.support.empty();
    result.intercept = b0;
    return result;
}

// -----------------------------------------------------------------------------
// BIC lambda selection
// -----------------------------------------------------------------------------

namespace {

double linear_criterion(const Dataset& d, const FitResult& fit, LinearLoss loss) {
    const auto n = d.n();
    const Eigen::VectorXd r = d.y - d.X * fit.beta;
    double mean_loss;
    if (loss == LinearLoss::least_squares) {
        mean_loss = r.squaredNorm() / static_cast<double>(n);
    } else {
        const double delta = std::max(1.345 * mad(r), 1e-8);
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double a = std::abs(r[i]);
            total += a <= delta ? 0.5 * r[i] * r[i] : delta * a - 0.5 * delta * delta;
        }
        mean_loss = total / static_cast<double>(n);
    }
    const double df = static_cast<double>(fit.support.size());
    return static_cast<double>(n) * std::log(std::max(mean_loss, 1e-300)) +
           df * std::log(static_cast<double>(n));
}

double logistic_criterion(const Dataset& d, const FitResult& fit, double intercept) {
    const auto n = d.n();
    Eigen::VectorXd eta = (d.X * fit.beta).array() + intercept;
    eta = eta.cwiseMax(-30.0).cwiseMin(30.0);
    double loglik = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) loglik += d.y[i] * eta[i] - std::log1p(std::exp(eta[i]));
    const double df = static_cast<double>(fit.support.size());
    return -2.0 * loglik + df * std::log(static_cast<double>(n));
}

}  // namespace

LambdaSelection select_lambda_bic(const Dataset& d, PenaltyFamily family, FitKind kind,
                                  std::span<const double> grid, const SmoothingSpec& smooth,
                                  const Eigen::VectorXd* psmrc_init) {
    if (grid.empty()) throw std::invalid_argument("select_lambda_bic: empty grid");
    d.validate();

    // PSMRC initialization and bandwidth are shared across the whole grid:
    // unit-normalized marginal rank scores, bandwidth resolved once.
    Eigen::VectorXd init;
    SmoothingSpec fixed_smooth = smooth;
    if (kind == FitKind::psmrc) {
        if (psmrc_init != nullptr) {
            init = *psmrc_init;
        } else {
            init = rrcs_scores(d);
        }
        if (init.norm() == 0.0) init = Eigen::VectorXd::Ones(d.p());
        init /= init.norm();
        fixed_smooth.h = resolve_bandwidth(smooth, d, init);
        fixed_smooth.rule = SmoothingSpec::Rule::fixed;
    }

    LambdaSelection best;
    best.criteria.assign(grid.size(), 0.0);
    bool have_best = false;

    // Evaluate in descending-lambda order so ties keep the larger lambda,
    // regardless of the caller's grid order.
    std::vector<std::size_t> eval_order(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) eval_order[i] = i;
    std::sort(eval_order.begin(), eval_order.end(),
              [&grid](std::size_t a, std::size_t b) { return grid[a] > grid[b]; });

    for (std::size_t idx : eval_order) {
        PenaltySpec pen;
        pen.family = family;
        pen.lambda = grid[idx];

        FitResult fit;
        double intercept = 0.0;
        double criterion = 0.0;
        switch (kind) {
            case FitKind::linear_ls:
                fit = fit_penalized_linear(d, pen, LinearLoss::least_squares);
                criterion = linear_criterion(d, fit, LinearLoss::least_squares);
                break;
            case FitKind::linear_huber:
                fit = fit_penalized_linear(d, pen, LinearLoss::huber);
                criterion = linear_criterion(d, fit, LinearLoss::huber);
                break;
            case FitKind::logistic: {
                auto lf = fit_penalized_logistic(d, pen);
                fit = std::move(lf.fit);
                intercept = lf.intercept;
                criterion = logistic_criterion(d, fit, intercept);
                break;
            }
            case FitKind::psmrc: {
                fit = fit_psmrc(d, pen, fixed_smooth, init);
                const double s_n = smoothed_mrc_objective(fit.beta, d, fixed_smooth.h);
                const double df = static_cast<double>(fit.support.size());
                criterion = -(s_n - df * std::log(static_cast<double>(d.n())) /
                                        (2.0 * static_cast<double>(d.n())));
                break;
            }
        }
        best.criteria[idx] = criterion;
        if (!have_best || criterion < best.criterion) {
            best.criterion = criterion;
            best.lambda = grid[idx];
            best.fit = std::move(fit);
            best.intercept = intercept;
            have_best = true;
        }
    }
    return best;
}

std::vector<double> default_lambda_grid(const Dataset& d, FitKind kind, int points) {
    if (points < 1) throw std::invalid_argument("default_lambda_grid: points must be >= 1");
    double lambda_max;
    if (kind == FitKind::psmrc) {
        lambda_max = 0.5;
    } else {
        const auto n = d.n();
        Eigen::VectorXd target = d.y;
        if (kind == FitKind::logistic) target.array() -= d.y.mean();
        lambda_max = (d.X.transpose() * target).cwiseAbs().maxCoeff() / static_cast<double>(n);
        lambda_max = std::max(lambda_max, 1e-8);
    }
    const double lambda_min = kind == FitKind::psmrc ? 5e-4 : lambda_max * 1e-3;
    std::vector<double> grid(static_cast<std::size_t>(points));
    if (points == 1) {
        grid[0] = lambda_max;
        return grid;
    }
    const double log_hi = std::log(lambda_max);
    const double log_lo = std::log(lambda_min);
    for (int i = 0; i < points; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(points - 1);
        grid[static_cast<std::size_t>(i)] = std::exp(log_hi + frac * (log_lo - log_hi));
    }
    return grid;
}

}  // namespace rankscreen
