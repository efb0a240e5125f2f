// Seeded data generators for the simulation studies. Every generator is a
// pure function of (config, seed): the draw order is fixed, so identical
// seeds give identical instances for any thread count.

#pragma once

#include "rankscreen/dataset.hpp"
#include "rankscreen/rng.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace rankscreen {

enum class ExampleKind { ex1, ex2, ex3_boxcox, ex3_log, ex4_logistic, ex5_mixed };
enum class NoiseKind { normal, contaminated10, t3 };
enum class BetaPattern { pattern_1_13, pattern_3_4 };

struct ScenarioConfig {
    ExampleKind example = ExampleKind::ex1;
    int p = 100;
    int n = 50;
    double rho = 0.0;
    NoiseKind noise = NoiseKind::normal;
    double lambda_boxcox = 0.5;              // ex3_boxcox: 0.25 / 0.5 / 0.75
    int q = 15;                              // ex4: size of the correlated block
    int s = 3;                               // ex4: nonsparsity size
    double sigma = 1.0;                      // ex5: noise standard deviation
    BetaPattern beta_pattern = BetaPattern::pattern_1_13;  // ex4
    std::uint64_t seed = 0;

    void validate() const;
};

struct GeneratedInstance {
    Dataset dataset;
    std::vector<int> true_support;  // nonzeros of true_beta, ascending
    Eigen::VectorXd true_beta;
    double intercept = 0.0;         // nonzero only for ex5
};

// Equicorrelated N(0, Sigma) with unit diagonal and constant off-diagonal
// rho, realized exactly by the one-factor construction
// X_ij = sqrt(rho) W_i + sqrt(1-rho) Z_ij. O(np) time and memory.
Eigen::MatrixXd sample_equicorrelated_normal(int n, int p, double rho, std::uint64_t seed);
Eigen::MatrixXd sample_equicorrelated_normal(int n, int p, double rho, SplitMix64& rng);

// Noise vectors: standard normal; normal with each entry independently
// replaced by standard Cauchy with probability 0.1; Student t(3).
Eigen::VectorXd sample_noise(NoiseKind kind, int n, std::uint64_t seed);
Eigen::VectorXd sample_noise(NoiseKind kind, int n, SplitMix64& rng);

GeneratedInstance gen_example1(const ScenarioConfig& cfg);
GeneratedInstance gen_example2(const ScenarioConfig& cfg);
GeneratedInstance gen_example3(const ScenarioConfig& cfg);
GeneratedInstance gen_example4(const ScenarioConfig& cfg);
GeneratedInstance gen_example5(const ScenarioConfig& cfg);

// Dispatch on cfg.example.
GeneratedInstance generate(const ScenarioConfig& cfg);

// The transformation applied by the Example-3 designs; applying it to the
// generated response recovers the latent linear index.
double boxcox_transform(double y, double lambda);

struct CopulaSample {
    std::vector<double> x;
    std::vector<double> y;
};

// Draw from the bivariate normal copula with correlation theta and the
// given marginal quantile functions. Requires |theta| < 1.
CopulaSample sample_normal_copula(int n, double theta,
                                  const std::function<double(double)>& margin_x,
                                  const std::function<double(double)>& margin_y,
                                  std::uint64_t seed);

}  // namespace rankscreen
