#include "cupcast/stats.hpp"

#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace cupcast {

namespace {

// Lower tail P(a, x) by series, valid and fast for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < 1000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper tail Q(a, x) by modified Lentz continued fraction, for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double fpmin = DBL_MIN / DBL_EPSILON;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-17) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0) || !std::isfinite(a) || !std::isfinite(x)) {
        throw std::invalid_argument("gamma_q: requires a > 0 and x >= 0");
    }
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_sf(double x, int df) {
    if (df < 1) throw std::invalid_argument("chi_square_sf: df must be >= 1");
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument("chi_square_sf: x must be finite and >= 0");
    }
    return gamma_q(0.5 * df, 0.5 * x);
}

double normal_two_sided_p(double z) {
    if (!std::isfinite(z)) throw std::invalid_argument("normal_two_sided_p: non-finite z");
    return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

double poisson_pmf(int k, double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("poisson_pmf: rate must be positive");
    }
    if (k < 0) return 0.0;
    if (k == 0) return std::exp(-rate);
    return std::exp(k * std::log(rate) - rate - std::lgamma(k + 1.0));
}

}  // namespace cupcast
