#include "rankscreen/screening.hpp"

#include "rankscreen/core_stats.hpp"
#include "rankscreen/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace rankscreen {

namespace {

// Standardize to mean 0, variance 1 with the (n-1)-divisor. Throws when the
// column is constant.
Eigen::VectorXd standardize_column(const Eigen::Ref<const Eigen::VectorXd>& x, int column) {
    const double mean = x.mean();
    const Eigen::VectorXd centered = x.array() - mean;
    const double ss = centered.squaredNorm();
    if (ss == 0.0)
        throw DegenerateColumnError("column " + std::to_string(column + 1) + " has zero variance",
                                    column);
    const double sd = std::sqrt(ss / static_cast<double>(x.size() - 1));
    return centered / sd;
}

}  // namespace

ThresholdRule ThresholdRule::top(int d) {
    if (d < 1) throw std::invalid_argument("ThresholdRule::top: d must be >= 1");
    ThresholdRule r;
    r.kind = Kind::top_d;
    r.d = d;
    return r;
}

ThresholdRule ThresholdRule::above(double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("ThresholdRule::above: gamma must be > 0");
    ThresholdRule r;
    r.kind = Kind::threshold;
    r.gamma = gamma;
    return r;
}

ThresholdRule ThresholdRule::power(double c5, double kappa, int n) {
    if (!(c5 > 0.0)) throw std::invalid_argument("ThresholdRule::power: c5 must be > 0");
    if (!(kappa > 0.0 && kappa < 0.5))
        throw std::invalid_argument("ThresholdRule::power: need 0 < kappa < 1/2");
    if (n < 1) throw std::invalid_argument("ThresholdRule::power: n must be >= 1");
    return above(c5 * std::pow(static_cast<double>(n), -kappa));
}

Eigen::VectorXd rrcs_scores(const Dataset& d, int threads) {
    d.validate();
    const auto p = d.p();
    Eigen::VectorXd scores(p);
    const auto y = d.response();
    parallel_for_index(static_cast<std::size_t>(p), threads, [&](std::size_t k) {
        const auto ki = static_cast<Eigen::Index>(k);
        scores[ki] = kendall_tau(d.column(ki), y) / 4.0;
    });
    return scores;
}

Eigen::VectorXd sis_scores(const Dataset& d, int threads) {
    d.validate();
    const auto p = d.p();
    Eigen::VectorXd scores(p);
    std::exception_ptr error;
    std::mutex error_mutex;
    parallel_for_index(static_cast<std::size_t>(p), threads, [&](std::size_t k) {
        const auto ki = static_cast<Eigen::Index>(k);
        try {
            scores[ki] = standardize_column(d.X.col(ki), static_cast<int>(k)).dot(d.y);
        } catch (...) {
            std::scoped_lock lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    });
    if (error) std::rethrow_exception(error);
    return scores;
}

GcorrResult gcorr_scores(const Dataset& d, int degree, int threads) {
    d.validate();
    if (degree < 1) throw std::invalid_argument("gcorr_scores: degree must be >= 1");
    const auto n = d.n();
    const auto p = d.p();

    const Eigen::VectorXd yc = d.y.array() - d.y.mean();
    const double ynorm2 = yc.squaredNorm();

    GcorrResult out;
    out.scores.resize(p);
    std::vector<char> flagged(static_cast<std::size_t>(p), 0);

    parallel_for_index(static_cast<std::size_t>(p), threads, [&](std::size_t k) {
        const auto ki = static_cast<Eigen::Index>(k);
        if (ynorm2 == 0.0) {
            out.scores[ki] = 0.0;
            return;
        }
        // Centered, unit-scaled power basis. Scaling leaves R^2 unchanged
        // and keeps the QR threshold meaningful across column scales.
        Eigen::MatrixXd basis(n, degree);
        Eigen::VectorXd power = d.X.col(ki);
        int usable = 0;
        for (int deg = 0; deg < degree; ++deg) {
            if (deg > 0) power = power.cwiseProduct(d.X.col(ki));
            Eigen::VectorXd col = power.array() - power.mean();
            const double norm = col.norm();
            if (norm > 0.0 && std::isfinite(norm)) {
                basis.col(usable++) = col / norm;
            }
        }
        if (usable == 0) {
            out.scores[ki] = 0.0;
            flagged[k] = 1;
            return;
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
        qr.setThreshold(1e-8);
        qr.compute(basis.leftCols(usable));
        const auto rank = qr.rank();
        if (rank == 0) {
            out.scores[ki] = 0.0;
            flagged[k] = 1;
            return;
        }
        // R^2 from the projection onto the first rank() Householder
        // directions; avoids the ill-conditioned coefficient solve when
        // the basis is rank deficient.
        const Eigen::VectorXd qty = qr.householderQ().adjoint() * yc;
        const double explained = qty.head(rank).squaredNorm();
        const double r2 = std::clamp(explained / ynorm2, 0.0, 1.0);
        out.scores[ki] = std::sqrt(r2);
        if (rank < degree) flagged[k] = 1;
    });

    for (Eigen::Index k = 0; k < p; ++k)
        if (flagged[static_cast<std::size_t>(k)]) out.fallback_columns.push_back(static_cast<int>(k));
    return out;
}

MmleResult mmle_scores(const Dataset& d, int threads) {
    d.validate();
    const auto n = d.n();
    const auto p = d.p();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (d.y[i] != 0.0 && d.y[i] != 1.0)
            throw std::invalid_argument("mmle_scores: response must be binary 0/1");
    }
    const double ybar = d.y.mean();
    if (ybar == 0.0 || ybar == 1.0)
        throw std::invalid_argument("mmle_scores: response must attain both classes");

    constexpr int kMaxIter = 50;
    constexpr double kGradTol = 1e-8;
    constexpr double kSeparationSlope = 30.0;  // on a standardized column

    MmleResult out;
    out.scores.resize(p);
    std::vector<char> separated(static_cast<std::size_t>(p), 0);
    std::exception_ptr error;
    std::mutex error_mutex;

    parallel_for_index(static_cast<std::size_t>(p), threads, [&](std::size_t k) {
        const auto ki = static_cast<Eigen::Index>(k);
        Eigen::VectorXd x;
        try {
            x = standardize_column(d.X.col(ki), static_cast<int>(k));
        } catch (...) {
            std::scoped_lock lock(error_mutex);
            if (!error) error = std::current_exception();
            return;
        }
        double b0 = std::log(ybar / (1.0 - ybar));
        double b1 = 0.0;
        bool sep = false;
        for (int iter = 0; iter < kMaxIter; ++iter) {
            double g0 = 0.0, g1 = 0.0, h00 = 0.0, h01 = 0.0, h11 = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double eta = b0 + b1 * x[i];
                const double mu = 1.0 / (1.0 + std::exp(-eta));
                const double w = mu * (1.0 - mu);
                const double r = d.y[i] - mu;
                g0 += r;
                g1 += r * x[i];
                h00 += w;
                h01 += w * x[i];
                h11 += w * x[i] * x[i];
            }
            if (std::max(std::abs(g0), std::abs(g1)) < kGradTol) break;
            const double det = h00 * h11 - h01 * h01;
            if (!(det > 1e-12 * static_cast<double>(n) * static_cast<double>(n))) {
                sep = true;
                break;
            }
            b0 += (h11 * g0 - h01 * g1) / det;
            b1 += (h00 * g1 - h01 * g0) / det;
            if (std::abs(b1) > kSeparationSlope || !std::isfinite(b1)) {
                sep = true;
                break;
            }
        }
        if (sep) {
            out.scores[ki] = std::numeric_limits<double>::infinity();
            separated[k] = 1;
        } else {
            out.scores[ki] = std::abs(b1);
        }
    });
    if (error) std::rethrow_exception(error);

    for (Eigen::Index k = 0; k < p; ++k)
        if (separated[static_cast<std::size_t>(k)]) out.separated_columns.push_back(static_cast<int>(k));
    return out;
}

std::vector<int> rank_order(const Eigen::VectorXd& scores) {
    std::vector<int> order(static_cast<std::size_t>(scores.size()));
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
    std::sort(order.begin(), order.end(), [&scores](int a, int b) {
        const double sa = std::abs(scores[a]);
        const double sb = std::abs(scores[b]);
        if (sa != sb) return sa > sb;
        return a < b;
    });
    return order;
}

std::vector<int> select(const Eigen::VectorXd& scores, const ThresholdRule& rule) {
    const auto p = scores.size();
    if (rule.kind == ThresholdRule::Kind::top_d) {
        if (rule.d < 1 || rule.d > p)
            throw std::invalid_argument("select: top_d requires 1 <= d <= p");
        auto order = rank_order(scores);
        order.resize(static_cast<std::size_t>(rule.d));
        return order;
    }
    if (!(rule.gamma > 0.0)) throw std::invalid_argument("select: threshold requires gamma > 0");
    std::vector<int> kept;
    for (Eigen::Index k = 0; k < p; ++k)
        if (std::abs(scores[k]) > rule.gamma) kept.push_back(static_cast<int>(k));
    return kept;
}

int default_model_size(int n) {
    if (n < 3) throw std::invalid_argument("default_model_size: need n >= 3");
    return static_cast<int>(std::floor(static_cast<double>(n) / std::log(static_cast<double>(n))));
}

ScreeningResult screen(const Dataset& d, ScreenMethod method, const ThresholdRule& rule,
                       int gcorr_degree, int threads) {
    ScreeningResult result;
    result.method = method;
    Eigen::VectorXd signed_scores;
    switch (method) {
        case ScreenMethod::rrcs:
            signed_scores = rrcs_scores(d, threads);
            break;
        case ScreenMethod::sis:
            signed_scores = sis_scores(d, threads);
            break;
        case ScreenMethod::gcorr: {
            auto g = gcorr_scores(d, gcorr_degree, threads);
            signed_scores = std::move(g.scores);
            result.flagged = std::move(g.fallback_columns);
            break;
        }
        case ScreenMethod::mmle: {
            auto m = mmle_scores(d, threads);
            signed_scores = std::move(m.scores);
            result.flagged = std::move(m.separated_columns);
            break;
        }
    }
    result.order = rank_order(signed_scores);
    result.selected = select(signed_scores, rule);
    result.scores = signed_scores.cwiseAbs();
    return result;
}

}  // namespace rankscreen
