#pragma once

namespace polsar {

/// Polygamma function of the given order: the (order + 1)-th derivative of
/// log Gamma at x > 0. Order 0 is the digamma function. Evaluated by upward
/// recurrence to x >= 20 followed by the Bernoulli asymptotic series;
/// relative accuracy is about 1e-13 for orders 0..4.
double polygamma(int order, double x);

inline double digamma(double x) { return polygamma(0, x); }
inline double trigamma(double x) { return polygamma(1, x); }
inline double tetragamma(double x) { return polygamma(2, x); }

/// Multivariate polygamma for three dimensions:
/// sum_{i=0}^{2} polygamma(order, l - i). Requires l > 2.
double polygamma3(int order, double l);

/// log Gamma_3(l) = 3 log(pi) + sum_{i=0}^{2} log Gamma(l - i), l > 2.
double log_multigamma3(double l);

}  // namespace polsar
