#pragma once

namespace ambigeo::stats {

/// Regularized incomplete beta I_x(a, b), evaluated by Lentz's continued
/// fraction with the usual symmetry switch for x > (a+1)/(a+b+2).
double incomplete_beta(double a, double b, double x);

/// Two-sided p-value of a Student t statistic with df degrees of freedom.
double t_two_sided_p(double t, double df);

/// Upper-tail p-value P(F >= f) for F(df1, df2).
double f_upper_p(double f, double df1, double df2);

double normal_cdf(double x);

/// Inverse standard normal CDF for p in (0, 1). Acklam's rational
/// approximation followed by one Halley step against erfc.
double normal_quantile(double p);

}  // namespace ambigeo::stats
