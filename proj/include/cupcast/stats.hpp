#pragma once

namespace cupcast {

// Regularized upper incomplete gamma Q(a, x) for a > 0, x >= 0.
// Series expansion below x < a + 1, Lentz continued fraction above.
double gamma_q(double a, double x);

// Survival function of the chi-square distribution with df >= 1 degrees of
// freedom: P(X > x) = Q(df/2, x/2).
double chi_square_sf(double x, int df);

// Two-sided tail probability of a standard normal score.
double normal_two_sided_p(double z);

// Poisson probability mass P(K = k) for rate > 0; zero for k < 0.
double poisson_pmf(int k, double rate);

}  // namespace cupcast
