// Penalized fitting used inside the iterative procedures: the smoothed
// maximum rank correlation objective and its penalized maximizer on the
// unit sphere (PSMRC), penalized least squares / Huber M-estimation by
// coordinate descent with LLA for the nonconvex penalties, penalized
// logistic IRLS, and BIC-style lambda selection.

#pragma once

#include "rankscreen/dataset.hpp"
#include "rankscreen/penalty.hpp"

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace rankscreen {

struct SmoothingSpec {
    enum class Rule { fixed, n_power };
    Rule rule = Rule::n_power;
    double h = 0.1;           // bandwidth when rule == fixed
    double constant = 1.0;    // n_power: h = constant * n^exponent * scale
    double exponent = -1.0 / 3.0;

    void validate() const {
        if (rule == Rule::fixed && !(h > 0.0))
            throw std::invalid_argument("SmoothingSpec: fixed bandwidth must be > 0");
    }
};

// Resolve the bandwidth for a candidate design. For the n_power rule the
// scale is the median absolute pairwise index difference |(X_i - X_j)' b|
// at the initial direction, computed once at initialization.
double resolve_bandwidth(const SmoothingSpec& spec, const Dataset& d, const Eigen::VectorXd& beta_init);

struct FitResult {
    Eigen::VectorXd beta;
    std::vector<int> support;             // {k : beta_k != 0}
    std::vector<double> objective_trace;  // ascent for PSMRC, descent for linear
    bool converged = false;
    int iterations = 0;
    bool all_zero = false;      // over-penalized: empty support
    bool ridge_jitter = false;  // near-singular design, jitter applied
};

// S_n(beta) = (1/(n(n-1))) sum_{i != j} I(y_i > y_j) Phi((x_i - x_j)' beta / h).
// Defined for any beta (the sphere constraint is the fitting contract, not
// enforced here, so finite-difference checks stay valid). Requires h > 0.
double smoothed_mrc_objective(const Eigen::VectorXd& beta, const Dataset& d, double h);

// Analytic gradient of S_n:
// (1/(n(n-1)h)) sum_{i != j} I(y_i > y_j) phi((x_i - x_j)' beta / h) (x_i - x_j).
Eigen::VectorXd smoothed_mrc_gradient(const Eigen::VectorXd& beta, const Dataset& d, double h);

// Maximize L_n(beta) = S_n(beta) - sum_j p_lambda(|beta_j|) over the unit
// sphere. Outer loop linearizes the penalty at the current iterate (LLA);
// the inner loop takes proximal-gradient steps with halving backtracking
// (Armijo constant 1e-4), renormalizing after each step. Coordinates with
// |beta_k| < 1e-6 are hard-thresholded to exact zero at convergence and
// the sign convention (first nonzero coordinate positive) is applied when
// it does not change the objective; see fit_psmrc notes in estimation.cpp.
// Stops when the objective change is < 1e-8 or after 500 outer iterations.
FitResult fit_psmrc(const Dataset& d, const PenaltySpec& pen, const SmoothingSpec& smooth,
                    const Eigen::VectorXd& init);

enum class LinearLoss { least_squares, huber };

// Coordinate-descent minimization of (1/n) sum_i loss(y_i - x_i' beta)
// + sum_j p_lambda(|beta_j|), LLA-reweighted for SCAD/MCP. least_squares
// uses r^2/2; huber uses the Huber loss with scale 1.345 * MAD of the
// current residuals, refreshed every outer sweep. Requires n > p of the
// candidate design. Near-singular coordinates get a 1e-8 ridge jitter on
// the quadratic term and the fit is flagged. Convergence: max coefficient
// change < 1e-8.
FitResult fit_penalized_linear(const Dataset& d, const PenaltySpec& pen,
                               LinearLoss loss = LinearLoss::least_squares);

// Penalized logistic regression by IRLS with an unpenalized intercept,
// same coordinate-descent/LLA machinery. Returns the slope vector in
// beta; the intercept is reported separately.
struct LogisticFit {
    FitResult fit;
    double intercept = 0.0;
};
LogisticFit fit_penalized_logistic(const Dataset& d, const PenaltySpec& pen);

enum class FitKind { linear_ls, linear_huber, psmrc, logistic };

struct LambdaSelection {
    double lambda = 0.0;
    double criterion = 0.0;
    FitResult fit;                  // the winning fit
    double intercept = 0.0;         // logistic only
    std::vector<double> criteria;   // aligned with the input grid order
};

// Pick lambda from a grid. Linear fits minimize
//   n * log(mean loss) + df * log(n),
// logistic minimizes -2 loglik + df * log(n), and PSMRC maximizes
//   S_n(beta_hat) - df * log(n) / (2n),
// with df = support size. Ties break toward the larger lambda. Each grid
// point is fit independently (no warm starts), so enlarging a grid with
// dominated values never changes the winner.
LambdaSelection select_lambda_bic(const Dataset& d, PenaltyFamily family, FitKind kind,
                                  std::span<const double> grid,
                                  const SmoothingSpec& smooth = {},
                                  const Eigen::VectorXd* psmrc_init = nullptr);

// Log-spaced default grid: for regression kinds from the usual
// all-zero lambda_max down three decades; a fixed [5e-4, 0.5] range for
// PSMRC where coefficients live on the unit sphere.
std::vector<double> default_lambda_grid(const Dataset& d, FitKind kind, int points = 25);

}  // namespace rankscreen
