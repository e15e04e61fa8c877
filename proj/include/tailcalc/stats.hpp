#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace tailcalc {

// Point estimate with Monte Carlo standard error; exact computations carry
// se = 0.
struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

double norm_pdf(double x);
double norm_cdf(double x);
// Inverse of norm_cdf, accurate to machine precision (rational approximation
// plus one Halley refinement).
double norm_quantile(double p);

// Adaptive Simpson quadrature with absolute tolerance. Throws NumericError
// when the recursion cannot reach the tolerance (reported, not truncated).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol);

// Integral of f over (0, inf) on a log-transformed axis, with explicit
// divergence detection for heavy-tailed integrands.
double integrate_positive_axis(const std::function<double(double)>& f,
                               double abs_tol);

double mean(const std::vector<double>& xs);
double variance(const std::vector<double>& xs);  // unbiased

// Kendall rank correlation via O(n log n) inversion counting. Ties are
// handled with the tau-b normalization.
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

// Kolmogorov-Smirnov distance between a sample and a reference CDF given by
// its right-continuous evaluation cdf(z) and its left limit cdf_left(z).
// Atom locations of the reference are extra candidate points.
double ks_distance(std::vector<double> sample,
                   const std::function<double(double)>& cdf,
                   const std::function<double(double)>& cdf_left,
                   const std::vector<double>& reference_atoms);

}  // namespace tailcalc
