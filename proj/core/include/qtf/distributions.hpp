#ifndef QTF_DISTRIBUTIONS_HPP
#define QTF_DISTRIBUTIONS_HPP

namespace qtf {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile (Wichura's PPND16); accurate to ~1e-15 for
/// p in (0,1). Returns +-inf at the endpoints.
double normal_quantile(double p);

/// Quantile of Beta(1, b): 1 - (1-p)^(1/b).
double beta1_quantile(double p, double b);

/// Quantile of the two-component mixture (1-x) N(-1,1) + x N(1,1),
/// solved by bisection on [-10, 10] to 1e-10.
double mixed_normal_quantile(double p, double x);

}  // namespace qtf

#endif
