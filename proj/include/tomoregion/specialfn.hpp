// Certified regularized incomplete gamma P(a, x) and the monotone
// binary-search inversion that turns a credibility level alpha into the radius
// of the Gaussian-ball of that mass in N dimensions.
//
// P(N/2, r^2/2) is the probability mass of a standard N-dimensional Gaussian
// inside the centered ball of radius r. Every evaluation returns an explicit
// error bound: a rigorous geometric-tail bound for the ascending series (used
// for x < a) and a convergence-based bound for the continued fraction of the
// complement Q (used for x >= a), both widened by a floating-point envelope.
#pragma once

#include "tomoregion/errors.hpp"

namespace tomoregion {

struct GammaEval {
  double a = 0.0;            // first argument (N/2 in the radius use-case)
  double x = 0.0;            // second argument
  double value = 0.0;        // P(a, x), in [0, 1]
  double complement = 1.0;   // Q(a, x) = 1 - P(a, x); directly computed on the CF path
  double error_bound = 0.0;  // |value - P(a,x)| <= error_bound
  int terms_used = 0;        // series terms or continued-fraction iterations
};

// Evaluates P(a, x) with error_bound <= target_err.
// Throws PrecisionUnreachableError for target_err < 1e-15 or when the honest
// bound (truncation + floating-point envelope) cannot meet target_err.
GammaEval reg_inc_gamma(double a, double x, double target_err);

struct RadiusSolution {
  double alpha = 0.0;
  int N = 0;
  double radius = 0.0;    // r with |P(N/2, r^2/2) - alpha| <= accuracy
  double accuracy = 0.0;  // the requested delta
  double credibility_error = 0.0;  // certified |P(N/2, radius^2/2) - alpha| bound
  double radius_lo = 0.0;          // induced radius interval from the bisection bracket
  double radius_hi = 0.0;
  int evaluations = 0;             // number of P evaluations performed
};

// Solves P(N/2, r^2/2) = alpha to credibility accuracy delta by bisection over
// t = r^2/2 in [0, t_max]; t_max comes from a Wilson-Hilferty-style estimate
// doubled until P >= alpha. alpha > 0.9 is compared through the complement Q.
// Requires 0 < alpha < 1 and 1/delta a positive integer.
RadiusSolution mvcr_radius(int N, double alpha, double delta);

// Certified upper bound on P(a, x_hi) - P(a, x_lo) for 0 <= x_lo <= x_hi.
// For a >= 1 the density t^{a-1} e^{-t} / Gamma(a) is bounded by 1, giving
// x_hi - x_lo; for a < 1 the density is unbounded at 0 and the certified bound
// is (x_hi^a - x_lo^a) / Gamma(a+1) (capped at 1).
double gamma_difference_bound(double a, double x_lo, double x_hi);

}  // namespace tomoregion
