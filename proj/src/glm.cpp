#include "cupcast/glm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cupcast/errors.hpp"
#include "cupcast/stats.hpp"

namespace cupcast {

namespace {

// 2 * sum[ y log(y/mu) - (y - mu) ], with the y = 0 terms reducing to 2 mu.
double poisson_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
    double dev = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y[i] > 0.0) {
            dev += y[i] * std::log(y[i] / mu[i]) - (y[i] - mu[i]);
        } else {
            dev += mu[i];
        }
    }
    return 2.0 * dev;
}

// Linear predictors above ~700 overflow exp; data on a sane scale never gets
// close, so clamping is purely a safety net for wild IRLS trial steps.
Eigen::VectorXd mean_from_eta(const Eigen::VectorXd& eta) {
    return eta.array().min(700.0).exp();
}

void validate(const DesignMatrix& design) {
    const auto n = design.X.rows();
    const auto p = design.X.cols();
    if (n == 0 || p == 0) throw FitError("empty design");
    if (design.y.size() != n) throw FitError("response length does not match design rows");
    if (n < p) throw FitError("fewer observations than parameters");
    if (!design.X.allFinite() || !design.y.allFinite()) {
        throw FitError("non-finite value in design");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        double yi = design.y[i];
        if (yi < 0.0 || yi != std::floor(yi)) {
            throw FitError("response must be non-negative integer counts");
        }
        if (design.X(i, 0) != 1.0) throw FitError("first design column must be the intercept");
    }
}

}  // namespace

DesignMatrix make_design(std::span<const double> response,
                         const std::vector<std::vector<double>>& covariates) {
    const auto n = static_cast<Eigen::Index>(response.size());
    DesignMatrix d;
    d.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) d.y[i] = response[i];
    d.X.resize(n, static_cast<Eigen::Index>(covariates.size()) + 1);
    d.X.col(0).setOnes();
    for (std::size_t j = 0; j < covariates.size(); ++j) {
        if (static_cast<Eigen::Index>(covariates[j].size()) != n) {
            throw FitError("covariate column length does not match response");
        }
        for (Eigen::Index i = 0; i < n; ++i) d.X(i, j + 1) = covariates[j][i];
    }
    return d;
}

GlmFit fit_poisson(const DesignMatrix& design, const FitOptions& options) {
    validate(design);
    const Eigen::MatrixXd& X = design.X;
    const Eigen::VectorXd& y = design.y;
    const auto n = X.rows();
    const auto p = X.cols();

    if (y.maxCoeff() <= 0.0) {
        throw FitError("all-zero response: log link has no finite maximum");
    }
    {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
        qr.setThreshold(1e-10);
        if (qr.rank() < p) throw FitError("rank-deficient design: collinear covariates");
    }

    GlmFit fit;
    fit.n_obs = static_cast<int>(n);
    fit.p_params = static_cast<int>(p);

    // Working start: means from the data, not from any coefficient vector.
    Eigen::VectorXd mu = y.array() + 0.1;
    Eigen::VectorXd eta = mu.array().log();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    bool have_beta = false;
    double dev_prev = std::numeric_limits<double>::infinity();

    for (int iter = 1; iter <= options.max_iter; ++iter) {
        Eigen::VectorXd sw = mu.array().sqrt();
        Eigen::VectorXd z = eta.array() + (y - mu).array() / mu.array();
        Eigen::MatrixXd Xw = sw.asDiagonal() * X;
        Eigen::VectorXd zw = sw.asDiagonal() * z;
        Eigen::VectorXd proposal = Xw.colPivHouseholderQr().solve(zw);

        // Step halving keeps the deviance non-increasing once a coefficient
        // iterate exists to fall back toward.
        Eigen::VectorXd beta_new = proposal;
        Eigen::VectorXd eta_new = X * beta_new;
        Eigen::VectorXd mu_new = mean_from_eta(eta_new);
        double dev = poisson_deviance(y, mu_new);
        if (have_beta) {
            double step = 1.0;
            int halvings = 0;
            while ((!std::isfinite(dev) || dev > dev_prev + 1e-8) && halvings < 40) {
                step *= 0.5;
                beta_new = beta + step * (proposal - beta);
                eta_new = X * beta_new;
                mu_new = mean_from_eta(eta_new);
                dev = poisson_deviance(y, mu_new);
                ++halvings;
            }
        }
        if (!std::isfinite(dev)) throw FitError("diverging fit: deviance not finite");

        beta = beta_new;
        eta = eta_new;
        mu = mu_new;
        have_beta = true;
        fit.deviance_trace.push_back(dev);
        fit.iterations = iter;

        if (dev_prev != std::numeric_limits<double>::infinity() &&
            std::fabs(dev - dev_prev) < options.tol * (std::fabs(dev) + 0.1)) {
            fit.converged = true;
            dev_prev = dev;
            break;
        }
        dev_prev = dev;
    }

    fit.residual_deviance = dev_prev;
    Eigen::VectorXd mu_null = Eigen::VectorXd::Constant(n, y.mean());
    fit.null_deviance = poisson_deviance(y, mu_null);

    Eigen::MatrixXd fisher = X.transpose() * mu.asDiagonal() * X;
    Eigen::MatrixXd cov = fisher.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    fit.coefficients.resize(p);
    fit.standard_errors.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        fit.coefficients[j] = beta[j];
        double v = cov(j, j);
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw FitError("singular information matrix: no standard errors");
        }
        fit.standard_errors[j] = std::sqrt(v);
    }
    return fit;
}

double predict_mean(const GlmFit& fit, std::span<const double> covariates) {
    if (covariates.size() != fit.coefficients.size()) {
        throw FitError("covariate vector length does not match coefficients");
    }
    double eta = 0.0;
    for (std::size_t j = 0; j < covariates.size(); ++j) {
        eta += fit.coefficients[j] * covariates[j];
    }
    return std::exp(eta);
}

double pearson_statistic(const GlmFit& fit, const DesignMatrix& design) {
    if (design.X.cols() != static_cast<Eigen::Index>(fit.coefficients.size())) {
        throw FitError("design does not match fitted coefficients");
    }
    Eigen::Map<const Eigen::VectorXd> beta(fit.coefficients.data(),
                                           static_cast<Eigen::Index>(fit.coefficients.size()));
    Eigen::VectorXd mu = (design.X * beta).array().exp();
    double stat = 0.0;
    for (Eigen::Index i = 0; i < design.y.size(); ++i) {
        double r = design.y[i] - mu[i];
        stat += r * r / mu[i];
    }
    return stat;
}

GofResult pearson_gof(const GlmFit& fit, const DesignMatrix& design) {
    int df = static_cast<int>(design.y.size()) - fit.p_params;
    if (df <= 0) throw FitError("no residual degrees of freedom for goodness of fit");
    GofResult r;
    r.statistic = pearson_statistic(fit, design);
    r.df = df;
    r.p_value = chi_square_sf(r.statistic, df);
    return r;
}

GofResult deviance_test(const GlmFit& fit) {
    int df = fit.n_obs - fit.p_params;
    if (df <= 0) throw FitError("no residual degrees of freedom for goodness of fit");
    GofResult r;
    r.statistic = fit.residual_deviance;
    r.df = df;
    r.p_value = chi_square_sf(r.statistic, df);
    return r;
}

std::vector<WaldTest> wald_tests(const GlmFit& fit) {
    std::vector<WaldTest> out;
    out.reserve(fit.coefficients.size());
    for (std::size_t j = 0; j < fit.coefficients.size(); ++j) {
        double se = fit.standard_errors[j];
        if (!(se > 0.0) || !std::isfinite(se)) {
            throw FitError("singular fit: zero standard error");
        }
        WaldTest t;
        t.index = static_cast<int>(j);
        t.z = fit.coefficients[j] / se;
        t.p_value = normal_two_sided_p(t.z);
        out.push_back(t);
    }
    return out;
}

namespace {

// Inversion by sequential search; exact for the modest rates used here.
int poisson_inversion(double rate, RngStream& rng) {
    double u = rng.next_double();
    double p = std::exp(-rate);
    double cdf = p;
    int k = 0;
    while (u > cdf && k < 4000) {
        ++k;
        p *= rate / k;
        cdf += p;
    }
    return k;
}

}  // namespace

int poisson_sample(double rate, RngStream& rng) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("poisson_sample: rate must be positive and finite");
    }
    int total = 0;
    while (rate > 30.0) {
        total += poisson_inversion(30.0, rng);
        rate -= 30.0;
    }
    return total + poisson_inversion(rate, rng);
}

}  // namespace cupcast
