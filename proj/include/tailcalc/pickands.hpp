#pragma once

#include <cstddef>
#include <vector>

namespace tailcalc {

// Pickands dependence function A on [0,1]: convex, max(w, 1-w) <= A(w) <= 1,
// A(0) = A(1) = 1. Two representations are supported: the closed-form
// Husler-Reiss family and a piecewise-linear grid. Grid slopes are made
// nondecreasing by an isotonic projection at construction; derivative
// queries return left-hand derivatives (right-hand limit at w = 0).
class PickandsFunction {
 public:
  enum class Rep { HuslerReiss, Grid };

  static PickandsFunction husler_reiss(double lambda);
  // Grid nodes with ascending distinct w; (0,1) and (1,1) are added when the
  // endpoints are missing. Throws ConfigError when the data violate the
  // Pickands invariants beyond numerical noise.
  static PickandsFunction grid(std::vector<double> w, std::vector<double> A);
  static PickandsFunction comonotone();   // A(w) = max(w, 1-w)
  static PickandsFunction independent();  // A(w) = 1

  Rep rep() const { return rep_; }
  double hr_lambda() const { return lambda_; }

  double value(double w) const;
  double left_derivative(double w) const;
  bool has_second_derivative() const { return rep_ == Rep::HuslerReiss; }
  double second_derivative(double w) const;

  // Grid accessors (Rep::Grid only): nodes and per-segment slopes, segment k
  // spanning [w_{k-1}, w_k].
  const std::vector<double>& grid_w() const { return w_; }
  const std::vector<double>& grid_values() const { return a_; }
  const std::vector<double>& segment_slopes() const { return slope_; }

 private:
  PickandsFunction() = default;
  Rep rep_ = Rep::HuslerReiss;
  double lambda_ = 1.0;
  std::vector<double> w_, a_, slope_;
};

// Checks bounds and convexity on an evaluation grid; throws ConfigError with
// a description of the violated invariant.
void validate_pickands(const PickandsFunction& A, std::size_t grid_size = 1001);

}  // namespace tailcalc
