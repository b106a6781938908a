#pragma once

// Small set of special functions needed by the distribution models and the
// statistical tests. Continued-fraction / series evaluations, accurate to
// ~1e-14 relative over the parameter ranges used here.

namespace brx {

double log_beta(double a, double b);

// Regularized incomplete beta I_x(a,b); a,b > 0, x in [0,1].
double reg_inc_beta(double a, double b, double x);

// Inverse of I_x(a,b) in x for p in [0,1].
double reg_inc_beta_inv(double a, double b, double p);

// Regularized lower/upper incomplete gamma P(a,x), Q(a,x); a > 0, x >= 0.
double reg_lower_gamma(double a, double x);
double reg_upper_gamma(double a, double x);

// Standard normal CDF and survival function.
double normal_cdf(double z);
double normal_sf(double z);

// Upper tail of the chi-square distribution with df degrees of freedom.
double chi_square_sf(double x, double df);

}  // namespace brx
