#include "rankscreen/simgen.hpp"

#include <cmath>
#include <stdexcept>

namespace rankscreen {

namespace {

double logistic(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void ScenarioConfig::validate() const {
    require(n >= 2, "ScenarioConfig: need n >= 2");
    require(p >= 1, "ScenarioConfig: need p >= 1");
    require(rho >= 0.0 && rho < 1.0, "ScenarioConfig: need 0 <= rho < 1");
    switch (example) {
        case ExampleKind::ex1:
        case ExampleKind::ex3_boxcox:
        case ExampleKind::ex3_log:
            require(p >= 3, "ScenarioConfig: this example needs p >= 3");
            break;
        case ExampleKind::ex2:
            require(p >= 5, "ScenarioConfig: example 2 needs p >= 5");
            break;
        case ExampleKind::ex4_logistic:
            require(p >= 3, "ScenarioConfig: example 4 needs p >= 3");
            require(s >= 1 && s <= p, "ScenarioConfig: need 1 <= s <= p");
            require(q >= 0 && q <= p, "ScenarioConfig: need 0 <= q <= p");
            break;
        case ExampleKind::ex5_mixed:
            require(p >= 35, "ScenarioConfig: example 5 needs p >= 35");
            require(sigma > 0.0, "ScenarioConfig: need sigma > 0");
            break;
    }
    if (example == ExampleKind::ex3_boxcox)
        require(lambda_boxcox > 0.0, "ScenarioConfig: need lambda_boxcox > 0");
}

Eigen::MatrixXd sample_equicorrelated_normal(int n, int p, double rho, SplitMix64& rng) {
    require(n >= 1 && p >= 1, "sample_equicorrelated_normal: need n, p >= 1");
    require(rho >= 0.0 && rho < 1.0, "sample_equicorrelated_normal: need 0 <= rho < 1");
    const double sr = std::sqrt(rho);
    const double sc = std::sqrt(1.0 - rho);
    Eigen::MatrixXd X(n, p);
    for (int i = 0; i < n; ++i) {
        const double factor = rho > 0.0 ? rng.normal() : 0.0;
        for (int j = 0; j < p; ++j) X(i, j) = sr * factor + sc * rng.normal();
    }
    return X;
}

Eigen::MatrixXd sample_equicorrelated_normal(int n, int p, double rho, std::uint64_t seed) {
    SplitMix64 rng(seed);
    return sample_equicorrelated_normal(n, p, rho, rng);
}

Eigen::VectorXd sample_noise(NoiseKind kind, int n, SplitMix64& rng) {
    Eigen::VectorXd eps(n);
    switch (kind) {
        case NoiseKind::normal:
            for (int i = 0; i < n; ++i) eps[i] = rng.normal();
            break;
        case NoiseKind::contaminated10:
            for (int i = 0; i < n; ++i) {
                const double z = rng.normal();
                eps[i] = rng.bernoulli(0.1) ? rng.cauchy() : z;
            }
            break;
        case NoiseKind::t3:
            for (int i = 0; i < n; ++i) eps[i] = rng.student_t3();
            break;
    }
    return eps;
}

Eigen::VectorXd sample_noise(NoiseKind kind, int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    return sample_noise(kind, n, rng);
}

double boxcox_transform(double y, double lambda) {
    const double s = y < 0.0 ? -1.0 : 1.0;
    return (std::pow(std::abs(y), lambda) * s - 1.0) / lambda;
}

GeneratedInstance gen_example1(const ScenarioConfig& cfg) {
    cfg.validate();
    require(cfg.example == ExampleKind::ex1, "gen_example1: wrong example tag");
    SplitMix64 rng(cfg.seed);
    GeneratedInstance out;
    out.dataset.X = sample_equicorrelated_normal(cfg.n, cfg.p, cfg.rho, rng);
    out.true_beta = Eigen::VectorXd::Zero(cfg.p);
    out.true_beta.head(3).setConstant(5.0);
    out.true_support = {0, 1, 2};
    const Eigen::VectorXd eps = sample_noise(cfg.noise, cfg.n, rng);
    out.dataset.y = out.dataset.X * out.true_beta + eps;
    return out;
}

GeneratedInstance gen_example2(const ScenarioConfig& cfg) {
    cfg.validate();
    require(cfg.example == ExampleKind::ex2, "gen_example2: wrong example tag");
    SplitMix64 rng(cfg.seed);
    const double sr = std::sqrt(cfg.rho);
    const double sc = std::sqrt(1.0 - cfg.rho);
    GeneratedInstance out;
    // X4 is the shared factor itself, so corr(X4, Xj) = sqrt(rho) for
    // j outside {4, 5}; X5 is independent of everything.
    Eigen::MatrixXd X(cfg.n, cfg.p);
    for (int i = 0; i < cfg.n; ++i) {
        const double factor = rng.normal();
        for (int j = 0; j < cfg.p; ++j) {
            if (j == 3) {
                X(i, j) = factor;
            } else if (j == 4) {
                X(i, j) = rng.normal();
            } else {
                X(i, j) = sr * factor + sc * rng.normal();
            }
        }
    }
    out.dataset.X = std::move(X);
    out.true_beta = Eigen::VectorXd::Zero(cfg.p);
    out.true_beta[0] = 5.0;
    out.true_beta[1] = 5.0;
    out.true_beta[2] = 5.0;
    out.true_beta[3] = -15.0 * sr;
    out.true_beta[4] = 1.0;
    out.true_support = {0, 1, 2, 3, 4};
    const Eigen::VectorXd eps = sample_noise(cfg.noise, cfg.n, rng);
    out.dataset.y = out.dataset.X * out.true_beta + eps;
    return out;
}

GeneratedInstance gen_example3(const ScenarioConfig& cfg) {
    cfg.validate();
    require(cfg.example == ExampleKind::ex3_boxcox || cfg.example == ExampleKind::ex3_log,
            "gen_example3: wrong example tag");
    SplitMix64 rng(cfg.seed);
    GeneratedInstance out;
    out.dataset.X = sample_equicorrelated_normal(cfg.n, cfg.p, cfg.rho, rng);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(cfg.p);
    beta[0] = 3.0;
    beta[1] = 1.5;
    beta[2] = 2.0;
    const Eigen::VectorXd eps = sample_noise(cfg.noise, cfg.n, rng);
    const Eigen::VectorXd latent = out.dataset.X * beta + eps;
    out.dataset.y.resize(cfg.n);
    if (cfg.example == ExampleKind::ex3_log) {
        out.dataset.y = latent.array().exp();
    } else {
        const double lambda = cfg.lambda_boxcox;
        for (int i = 0; i < cfg.n; ++i) {
            const double t = lambda * latent[i] + 1.0;
            const double s = t < 0.0 ? -1.0 : 1.0;
            out.dataset.y[i] = s * std::pow(std::abs(t), 1.0 / lambda);
        }
    }
    // The identifiable direction: beta / ||beta||.
    out.true_beta = beta / beta.norm();
    out.true_support = {0, 1, 2};
    return out;
}

GeneratedInstance gen_example4(const ScenarioConfig& cfg) {
    cfg.validate();
    require(cfg.example == ExampleKind::ex4_logistic, "gen_example4: wrong example tag");
    SplitMix64 rng(cfg.seed);
    const int t1 = cfg.p / 3;
    const int t2 = 2 * cfg.p / 3;
    const double a = cfg.rho > 0.0 ? std::sqrt(cfg.rho / (1.0 - cfg.rho)) : 0.0;

    Eigen::VectorXd shared(cfg.n);
    for (int i = 0; i < cfg.n; ++i) shared[i] = rng.normal();

    // Population variances of the three error blocks: N(0,1), Laplace(0,1),
    // and the equal mixture of N(-1,1) and N(1,0.5).
    GeneratedInstance out;
    Eigen::MatrixXd X(cfg.n, cfg.p);
    for (int j = 0; j < cfg.p; ++j) {
        const double aj = j < cfg.q ? a : 0.0;
        double var_j;
        if (j < t1) {
            var_j = 1.0;
        } else if (j < t2) {
            var_j = 2.0;
        } else {
            var_j = 1.75;
        }
        const double scale = std::sqrt(var_j + aj * aj);
        for (int i = 0; i < cfg.n; ++i) {
            double e;
            if (j < t1) {
                e = rng.normal();
            } else if (j < t2) {
                e = rng.laplace();
            } else {
                e = rng.bernoulli(0.5) ? (-1.0 + rng.normal())
                                       : (1.0 + rng.normal() * std::sqrt(0.5));
            }
            X(i, j) = (e + aj * shared[i]) / scale;
        }
    }
    out.dataset.X = std::move(X);

    out.true_beta = Eigen::VectorXd::Zero(cfg.p);
    for (int k = 0; k < cfg.s; ++k) {
        if (cfg.beta_pattern == BetaPattern::pattern_1_13) {
            out.true_beta[k] = k % 2 == 0 ? 1.0 : 1.3;
        } else {
            out.true_beta[k] = k % 2 == 0 ? 3.0 : 4.0;
        }
        out.true_support.push_back(k);
    }

    const Eigen::VectorXd eta = out.dataset.X * out.true_beta;
    out.dataset.y.resize(cfg.n);
    for (int i = 0; i < cfg.n; ++i) out.dataset.y[i] = rng.bernoulli(logistic(eta[i])) ? 1.0 : 0.0;
    return out;
}

// Example 5 covariate block. The original study resamples a proprietary
// bank data set; these are synthetic stand-ins with matched support and
// levels (binary flags, education and job-grade dummies, experience and
// age on plausible uniform ranges). The published coefficient vector is
// reused unchanged.
GeneratedInstance gen_example5(const ScenarioConfig& cfg) {
    cfg.validate();
    require(cfg.example == ExampleKind::ex5_mixed, "gen_example5: wrong example tag");
    SplitMix64 rng(cfg.seed);
    const int n = cfg.n;
    const int p = cfg.p;
    const int bernoulli_end = 2 * p / 5;  // columns 13 .. bernoulli_end-1

    GeneratedInstance out;
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, p);
    std::vector<ColumnKind> kinds(static_cast<std::size_t>(p), ColumnKind::continuous);

    for (int i = 0; i < n; ++i) X(i, 0) = rng.bernoulli(0.6) ? 1.0 : 0.0;  // Female
    for (int i = 0; i < n; ++i) X(i, 1) = rng.bernoulli(0.2) ? 1.0 : 0.0;  // PCJob

    // Education: 5 levels, dummies for levels 1-4 in columns 2-5.
    const double edu_cum[4] = {0.30, 0.50, 0.80, 0.90};
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        for (int level = 0; level < 4; ++level) {
            if (u < edu_cum[level]) {
                X(i, 2 + level) = 1.0;
                break;
            }
        }
    }

    // Job grade: 6 levels, dummies for grades 1-5 in columns 6-10.
    const double grade_cum[5] = {0.25, 0.47, 0.67, 0.82, 0.92};
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        for (int grade = 0; grade < 5; ++grade) {
            if (u < grade_cum[grade]) {
                X(i, 6 + grade) = 1.0;
                break;
            }
        }
    }

    // YrsExp on [0, 30]; Age tracks experience the way YrHired/YrBorn would.
    for (int i = 0; i < n; ++i) {
        const double yrs = std::round(rng.uniform(0.0, 30.0));
        X(i, 11) = yrs;
        X(i, 12) = 22.0 + yrs + std::round(rng.uniform(0.0, 15.0));
    }

    for (int j = 13; j < bernoulli_end; ++j) {
        const double pstar = rng.uniform(0.2, 0.8);
        for (int i = 0; i < n; ++i) X(i, j) = rng.bernoulli(pstar) ? 1.0 : 0.0;
    }
    for (int j = bernoulli_end; j < p; ++j)
        for (int i = 0; i < n; ++i) X(i, j) = rng.normal();

    for (int j = 0; j < 11; ++j) kinds[static_cast<std::size_t>(j)] = ColumnKind::categorical;
    for (int j = 13; j < bernoulli_end; ++j) kinds[static_cast<std::size_t>(j)] = ColumnKind::categorical;

    // Published SCAD fit of the bank model: intercept then 13 coefficients.
    const double named_beta[13] = {-0.624, 4.151,   0.0,     -1.073,  -0.914, 0.0,    -24.643,
                                   -22.818, -18.803, -13.859, -7.770, 0.193,  0.0};
    out.intercept = 55.835;
    out.true_beta = Eigen::VectorXd::Zero(p);
    for (int j = 0; j < 13; ++j) {
        out.true_beta[j] = named_beta[j];
        if (named_beta[j] != 0.0) out.true_support.push_back(j);
    }

    Eigen::VectorXd eps(n);
    for (int i = 0; i < n; ++i) eps[i] = cfg.sigma * rng.normal();
    out.dataset.X = std::move(X);
    out.dataset.y = (out.dataset.X * out.true_beta).array() + out.intercept + eps.array();
    out.dataset.column_kinds = std::move(kinds);
    return out;
}

GeneratedInstance generate(const ScenarioConfig& cfg) {
    switch (cfg.example) {
        case ExampleKind::ex1: return gen_example1(cfg);
        case ExampleKind::ex2: return gen_example2(cfg);
        case ExampleKind::ex3_boxcox:
        case ExampleKind::ex3_log: return gen_example3(cfg);
        case ExampleKind::ex4_logistic: return gen_example4(cfg);
        case ExampleKind::ex5_mixed: return gen_example5(cfg);
    }
    throw std::invalid_argument("generate: unknown example");
}

CopulaSample sample_normal_copula(int n, double theta,
                                  const std::function<double(double)>& margin_x,
                                  const std::function<double(double)>& margin_y,
                                  std::uint64_t seed) {
    require(n >= 1, "sample_normal_copula: need n >= 1");
    require(std::abs(theta) < 1.0, "sample_normal_copula: need |theta| < 1");
    SplitMix64 rng(seed);
    CopulaSample out;
    out.x.resize(static_cast<std::size_t>(n));
    out.y.resize(static_cast<std::size_t>(n));
    const double cross = std::sqrt(1.0 - theta * theta);
    for (int i = 0; i < n; ++i) {
        const double u = rng.normal();
        const double v = theta * u + cross * rng.normal();
        out.x[static_cast<std::size_t>(i)] = margin_x(normal_cdf(u));
        out.y[static_cast<std::size_t>(i)] = margin_y(normal_cdf(v));
    }
    return out;
}

}  // namespace rankscreen
