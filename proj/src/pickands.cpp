#include "tailcalc/pickands.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tailcalc/errors.hpp"
#include "tailcalc/stats.hpp"

namespace tailcalc {

namespace {

// Pool-adjacent-violators projection of segment slopes onto nondecreasing
// sequences, weighted by segment widths. Returns the largest adjustment.
double isotonic_slopes(std::vector<double>& s, const std::vector<double>& wt) {
  struct Block {
    double value, weight;
    std::size_t count;
  };
  std::vector<Block> stack;
  for (std::size_t i = 0; i < s.size(); ++i) {
    Block b{s[i] * wt[i], wt[i], 1};
    while (!stack.empty() &&
           stack.back().value / stack.back().weight > b.value / b.weight) {
      b.value += stack.back().value;
      b.weight += stack.back().weight;
      b.count += stack.back().count;
      stack.pop_back();
    }
    stack.push_back(b);
  }
  std::vector<double> projected;
  projected.reserve(s.size());
  for (const Block& b : stack) {
    const double v = b.value / b.weight;
    for (std::size_t k = 0; k < b.count; ++k) projected.push_back(v);
  }
  double max_adjust = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    max_adjust = std::max(max_adjust, std::abs(projected[i] - s[i]));
  }
  s = std::move(projected);
  return max_adjust;
}

}  // namespace

PickandsFunction PickandsFunction::husler_reiss(double lambda) {
  if (!(lambda > 0.0)) {
    throw ConfigError("pickands: Husler-Reiss lambda must be positive");
  }
  PickandsFunction A;
  A.rep_ = Rep::HuslerReiss;
  A.lambda_ = lambda;
  return A;
}

PickandsFunction PickandsFunction::grid(std::vector<double> w,
                                        std::vector<double> A_values) {
  if (w.size() != A_values.size() || w.size() < 2) {
    throw ConfigError("pickands grid: need matching w/A arrays of size >= 2");
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] >= 0.0 && w[i] <= 1.0)) {
      throw ConfigError("pickands grid: w outside [0,1]");
    }
    if (i > 0 && !(w[i] > w[i - 1])) {
      throw ConfigError("pickands grid: w must be strictly increasing");
    }
  }
  if (w.front() > 0.0) {
    w.insert(w.begin(), 0.0);
    A_values.insert(A_values.begin(), 1.0);
  }
  if (w.back() < 1.0) {
    w.push_back(1.0);
    A_values.push_back(1.0);
  }
  const double tol = 1e-8;
  if (std::abs(A_values.front() - 1.0) > tol ||
      std::abs(A_values.back() - 1.0) > tol) {
    throw ConfigError("pickands grid: A(0) and A(1) must equal 1");
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double lower = std::max(w[i], 1.0 - w[i]);
    if (A_values[i] < lower - tol || A_values[i] > 1.0 + tol) {
      throw ConfigError("pickands grid: A(" + std::to_string(w[i]) +
                        ") outside [max(w,1-w), 1]");
    }
  }
  const std::size_t segs = w.size() - 1;
  std::vector<double> slope(segs), width(segs);
  for (std::size_t k = 0; k < segs; ++k) {
    width[k] = w[k + 1] - w[k];
    slope[k] = (A_values[k + 1] - A_values[k]) / width[k];
  }
  const double adjust = isotonic_slopes(slope, width);
  if (adjust > tol) {
    throw ConfigError("pickands grid: non-convexity detected (secant slopes "
                      "decrease by " +
                      std::to_string(adjust) + ")");
  }
  // Rebuild node values from the projected slopes so that A and A' stay
  // consistent; pin the endpoints exactly.
  std::vector<double> rebuilt(w.size());
  rebuilt[0] = 1.0;
  for (std::size_t k = 0; k < segs; ++k) {
    rebuilt[k + 1] = rebuilt[k] + slope[k] * width[k];
  }
  if (std::abs(rebuilt.back() - 1.0) > tol) {
    throw ConfigError("pickands grid: A(1) deviates from 1 after convexity "
                      "projection");
  }
  if (slope.front() < -1.0 - tol || slope.back() > 1.0 + tol) {
    throw ConfigError("pickands grid: derivative outside [-1, 1]");
  }
  for (double& s : slope) s = std::clamp(s, -1.0, 1.0);

  PickandsFunction A;
  A.rep_ = Rep::Grid;
  A.w_ = std::move(w);
  A.a_ = std::move(rebuilt);
  A.slope_ = std::move(slope);
  return A;
}

PickandsFunction PickandsFunction::comonotone() {
  return grid({0.0, 0.5, 1.0}, {1.0, 0.5, 1.0});
}

PickandsFunction PickandsFunction::independent() {
  return grid({0.0, 1.0}, {1.0, 1.0});
}

double PickandsFunction::value(double w) const {
  w = std::clamp(w, 0.0, 1.0);
  if (rep_ == Rep::HuslerReiss) {
    if (w <= 0.0 || w >= 1.0) return 1.0;
    const double u = std::log(w / (1.0 - w));
    const double shift = u / (2.0 * lambda_);
    return (1.0 - w) * norm_cdf(lambda_ - shift) +
           w * norm_cdf(lambda_ + shift);
  }
  const auto it = std::upper_bound(w_.begin(), w_.end(), w);
  std::size_t k = static_cast<std::size_t>(it - w_.begin());
  if (k == 0) k = 1;
  if (k > slope_.size()) k = slope_.size();
  const double v = a_[k - 1] + slope_[k - 1] * (w - w_[k - 1]);
  return std::clamp(v, std::max(w, 1.0 - w), 1.0);
}

double PickandsFunction::left_derivative(double w) const {
  w = std::clamp(w, 0.0, 1.0);
  if (rep_ == Rep::HuslerReiss) {
    if (w <= 0.0) return -1.0;
    if (w >= 1.0) return 1.0;
    const double u = std::log(w / (1.0 - w));
    const double shift = u / (2.0 * lambda_);
    return norm_cdf(lambda_ + shift) - norm_cdf(lambda_ - shift);
  }
  // Left derivative: the slope of the segment whose half-open interval
  // (w_{k-1}, w_k] contains w; boundary secant at w = 0.
  if (w <= w_.front()) return slope_.front();
  const auto it = std::lower_bound(w_.begin(), w_.end(), w);
  std::size_t k = static_cast<std::size_t>(it - w_.begin());
  if (k > slope_.size()) k = slope_.size();
  return slope_[k - 1];
}

double PickandsFunction::second_derivative(double w) const {
  if (rep_ != Rep::HuslerReiss) {
    throw NumericError("pickands: second derivative only available in closed "
                       "form for Husler-Reiss");
  }
  if (w <= 0.0 || w >= 1.0) return 0.0;
  const double u = std::log(w / (1.0 - w));
  const double shift = u / (2.0 * lambda_);
  return (norm_pdf(lambda_ + shift) + norm_pdf(lambda_ - shift)) /
         (2.0 * lambda_ * w * (1.0 - w));
}

void validate_pickands(const PickandsFunction& A, std::size_t grid_size) {
  const double tol = 1e-9;
  double prev_slope = -2.0;
  double prev_val = 1.0;
  double prev_w = 0.0;
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double w =
        static_cast<double>(i) / static_cast<double>(grid_size - 1);
    const double v = A.value(w);
    const double lower = std::max(w, 1.0 - w);
    if (v < lower - 1e-8 || v > 1.0 + 1e-8) {
      throw ConfigError("pickands: A(w) outside [max(w,1-w), 1] at w = " +
                        std::to_string(w));
    }
    if (i > 0) {
      const double secant = (v - prev_val) / (w - prev_w);
      if (secant < prev_slope - tol) {
        throw ConfigError("pickands: non-convexity detected on evaluation "
                          "grid near w = " +
                          std::to_string(w));
      }
      prev_slope = secant;
    }
    prev_val = v;
    prev_w = w;
  }
  const double d0 = A.left_derivative(1e-12);
  const double d1 = A.left_derivative(1.0);
  if (d0 < -1.0 - tol || d1 > 1.0 + tol) {
    throw ConfigError("pickands: derivative outside [-1, 1]");
  }
}

}  // namespace tailcalc
