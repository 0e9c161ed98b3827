#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "cupcast/rng.hpp"

namespace cupcast {

// Response vector plus design matrix whose first column is the intercept.
struct DesignMatrix {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
};

// Builds a design from a response and covariate columns, prepending the
// intercept column. All columns must share the response's length.
DesignMatrix make_design(std::span<const double> response,
                         const std::vector<std::vector<double>>& covariates);

struct GlmFit {
    std::vector<double> coefficients;
    std::vector<double> standard_errors;
    double null_deviance = 0.0;
    double residual_deviance = 0.0;
    int n_obs = 0;
    int p_params = 0;
    int iterations = 0;
    bool converged = false;
    // Deviance after each reweighted least squares update, non-increasing.
    std::vector<double> deviance_trace;
};

struct FitOptions {
    double tol = 1e-10;  // relative deviance change declaring convergence
    int max_iter = 50;
};

// Poisson regression with log link, fitted by iteratively reweighted least
// squares with step halving. Throws FitError on an all-zero response, a
// rank-deficient design, or fewer observations than parameters.
GlmFit fit_poisson(const DesignMatrix& design, const FitOptions& options = {});

// exp(beta . covariates); covariates must include the leading 1.
double predict_mean(const GlmFit& fit, std::span<const double> covariates);

struct GofResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 0.0;
};

// Sum of squared Pearson residuals (y - mu)^2 / mu under the fitted means.
double pearson_statistic(const GlmFit& fit, const DesignMatrix& design);

// Pearson chi-square test against chi-square with n - p degrees of freedom.
GofResult pearson_gof(const GlmFit& fit, const DesignMatrix& design);

// Residual deviance against chi-square with n - p degrees of freedom.
GofResult deviance_test(const GlmFit& fit);

struct WaldTest {
    int index = 0;
    double z = 0.0;
    double p_value = 0.0;
};

// Per-coefficient z = beta / se with two-sided normal p-values.
std::vector<WaldTest> wald_tests(const GlmFit& fit);

// Exact Poisson draw by inversion. Rates above 30 are split into independent
// chunks so the sequential search never walks a long tail.
int poisson_sample(double rate, RngStream& rng);

}  // namespace cupcast
