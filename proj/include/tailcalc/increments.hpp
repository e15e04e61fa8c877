#pragma once

#include <cstdint>
#include <vector>

#include "tailcalc/pickands.hpp"

namespace tailcalc {

// Law of a multiplicative tail-tree increment M on [0, inf). Atoms at zero
// are first-class: Discrete laws may carry one among their atoms, and the
// continuous variants carry an explicit zero_mass (produced by reversal when
// the alpha-moment falls short of the tail-constant ratio).
class IncrementDistribution {
 public:
  enum class Kind { Discrete, HuslerReiss, LogNormal, PickandsDerived,
                    Empirical };

  static IncrementDistribution discrete(std::vector<double> values,
                                        std::vector<double> weights);
  static IncrementDistribution degenerate(double value);
  static IncrementDistribution husler_reiss(double lambda);
  static IncrementDistribution lognormal(double mu, double sigma,
                                         double zero_mass = 0.0);
  static IncrementDistribution pickands_derived(PickandsFunction A);
  static IncrementDistribution empirical(std::vector<double> samples);

  Kind kind() const { return kind_; }
  // P(M <= z), right-continuous, -> 1.
  double cdf(double z) const;
  // Left limit P(M < z).
  double cdf_left(double z) const;
  double mass_at_zero() const;
  // Positive-part atom locations for variants with atoms (Discrete,
  // grid-Pickands, Empirical); empty for continuous laws.
  std::vector<double> atom_locations() const;

  const std::vector<double>& discrete_values() const { return values_; }
  const std::vector<double>& discrete_weights() const { return weights_; }
  double hr_lambda() const { return lambda_; }
  double log_mu() const { return mu_; }
  double log_sigma() const { return sigma_; }
  double zero_mass() const { return zero_mass_; }
  const PickandsFunction& pickands() const { return pickands_; }
  const std::vector<double>& empirical_samples() const { return samples_; }

 private:
  IncrementDistribution() = default;
  Kind kind_ = Kind::Discrete;
  std::vector<double> values_, weights_;  // Discrete (values sorted, distinct)
  double lambda_ = 0.0;                   // HuslerReiss
  double mu_ = 0.0, sigma_ = 0.0;         // LogNormal
  double zero_mass_ = 0.0;                // LogNormal only
  PickandsFunction pickands_ = PickandsFunction::husler_reiss(1.0);
  std::vector<double> samples_;           // Empirical (sorted)
};

// CDF z -> A(w) - w A'(w) with w = 1/(1+z); the zero atom is the limit at
// w -> 1, i.e. 1 - A'(1).
IncrementDistribution increment_from_pickands(const PickandsFunction& A);

// A(w) = 1 - E[min(1-w, wM)]; requires E[M] <= 1 (checked numerically).
// Husler-Reiss inputs keep the closed-form representation, everything else
// becomes a dense grid.
PickandsFunction pickands_from_increment(const IncrementDistribution& m);

// Law of the opposite-direction increment:
//   P(M_ba > z) = (c_a/c_b) E[ 1{z M_ab < 1} M_ab^alpha ],
// with an atom at zero of mass 1 - (c_a/c_b) E[M_ab^alpha]. Exact for
// Discrete/Empirical/grid-Pickands inputs, closed form for LogNormal and
// Husler-Reiss.
IncrementDistribution reverse_increment(const IncrementDistribution& m_ab,
                                        double c_a, double c_b, double alpha);

// E[M^alpha]; closed form where available, adaptive quadrature for
// Husler-Reiss-form Pickands-derived laws.
double alpha_moment(const IncrementDistribution& m, double alpha);

std::vector<double> sample_increment(const IncrementDistribution& m,
                                     std::size_t n, std::uint64_t seed);

// Single inverse-CDF draw at uniform level u in (0,1).
double quantile(const IncrementDistribution& m, double u);

}  // namespace tailcalc
