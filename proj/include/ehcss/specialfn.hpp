#ifndef EHCSS_SPECIALFN_HPP
#define EHCSS_SPECIALFN_HPP

#include <stdexcept>
#include <string>

namespace ehcss {

// Tolerances and limits for the adaptive quadrature engine.
// tail_cutoff_mass bounds the probability mass discarded when a
// semi-infinite domain is truncated; the integrands are bounded by the
// Gamma envelope, so the truncation error is provably below it.
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2048;
  double tail_cutoff_mass = 1e-12;

  void validate() const;
};

// Thrown when the requested tolerances cannot be met within
// max_subdivisions, or the engine detects a non-finite integrand.
class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// Regularized lower incomplete gamma P(m, x) = (1/Gamma(m)) * int_0^x t^(m-1) e^-t dt.
// Series expansion for x < m + 1, Lentz continued fraction otherwise.
double reg_lower_gamma(double m, double x);

// Regularized upper incomplete gamma Q(m, x) = 1 - P(m, x), computed on the
// continued-fraction side directly so large x does not cancel.
// P + Q is exactly 1 for every (m, x): each branch computes one of the pair
// and complements the other from it.
double reg_upper_gamma(double m, double x);

// P(X * Y <= z) for independent X ~ Gamma(m, theta_a), Y ~ Gamma(m, theta_b).
// Evaluated as the one-dimensional integral
//   int_0^inf [Gamma(m,1) pdf](t) * P(m, w / t) dt,   w = z / (theta_a * theta_b),
// which makes the (theta_a, theta_b) symmetry and scale covariance exact.
double gamma_product_cdf(double m, double theta_a, double theta_b, double z,
                         const QuadratureSpec& quad = {});

// Outage probability of the amplified two-hop link:
//   1 - int_{Y1}^inf [Gamma(m,1) pdf](y)
//         * Q(m, psi1 (b th1 y + 1) / (th1 th2 (a b th1 y^2 - psi1 a y))) dy
// with Y1 = psi1 / (b * theta1). The integration variable is shifted to
// u = y - Y1 so the critical factor b*th1*y - psi1 becomes b*th1*u, which is
// positive for every u > 0 by construction; the displayed form rounds negative
// within an ulp of Y1 and explodes the upper-gamma argument.
double af_outage_integral(double m, double theta1, double theta2, double a,
                          double b, double psi1, const QuadratureSpec& quad = {});

}  // namespace ehcss

#endif
