#include "tailcalc/increments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "tailcalc/errors.hpp"
#include "tailcalc/rng.hpp"
#include "tailcalc/stats.hpp"

namespace tailcalc {

namespace {

constexpr double kWeightTol = 1e-12;
constexpr double kMomentTol = 1e-9;

// Atoms of a grid-represented Pickands increment: the CDF
// z -> A(w) - w A'(w) is piecewise constant, jumping at the kinks of A.
struct GridAtoms {
  std::vector<double> values;   // includes 0 when A'(1) < 1
  std::vector<double> weights;
};

GridAtoms grid_pickands_atoms(const PickandsFunction& A) {
  const auto& w = A.grid_w();
  const auto& slope = A.segment_slopes();
  GridAtoms out;
  const double zero_mass = 1.0 - slope.back();
  if (zero_mass > 0.0) {
    out.values.push_back(0.0);
    out.weights.push_back(zero_mass);
  }
  for (std::size_t k = 1; k + 1 < w.size(); ++k) {
    const double jump = w[k] * (slope[k] - slope[k - 1]);
    if (jump > 0.0) {
      out.values.push_back((1.0 - w[k]) / w[k]);
      out.weights.push_back(jump);
    }
  }
  return out;
}

// E[M 1{M <= x}] and P(M > x) for a (possibly zero-inflated) lognormal.
double lognormal_partial_mean(double mu, double sigma, double zero_mass,
                              double x) {
  if (x <= 0.0) return 0.0;
  return (1.0 - zero_mass) * std::exp(mu + 0.5 * sigma * sigma) *
         norm_cdf((std::log(x) - mu - sigma * sigma) / sigma);
}

double lognormal_survival(double mu, double sigma, double zero_mass,
                          double x) {
  if (x <= 0.0) return 1.0 - zero_mass * (x < 0.0 ? 0.0 : 1.0);
  return (1.0 - zero_mass) * (1.0 - norm_cdf((std::log(x) - mu) / sigma));
}

}  // namespace

IncrementDistribution IncrementDistribution::discrete(
    std::vector<double> values, std::vector<double> weights) {
  if (values.size() != weights.size() || values.empty()) {
    throw ConfigError("discrete increment: need matching nonempty atom lists");
  }
  std::vector<std::size_t> idx(values.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  IncrementDistribution m;
  m.kind_ = Kind::Discrete;
  double total = 0.0;
  for (std::size_t i : idx) {
    const double v = values[i], p = weights[i];
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError("discrete increment: atom values must be finite and "
                        ">= 0");
    }
    if (!(p > 0.0)) {
      throw ConfigError("discrete increment: atom weights must be positive");
    }
    total += p;
    if (!m.values_.empty() && m.values_.back() == v) {
      m.weights_.back() += p;  // merge exactly equal atoms
    } else {
      m.values_.push_back(v);
      m.weights_.push_back(p);
    }
  }
  if (std::abs(total - 1.0) > kWeightTol) {
    throw ConfigError("discrete increment: weights sum to " +
                      std::to_string(total) + ", expected 1");
  }
  return m;
}

IncrementDistribution IncrementDistribution::degenerate(double value) {
  return discrete({value}, {1.0});
}

IncrementDistribution IncrementDistribution::husler_reiss(double lambda) {
  if (!(lambda > 0.0)) {
    throw ConfigError("husler_reiss increment: lambda must be positive");
  }
  IncrementDistribution m;
  m.kind_ = Kind::HuslerReiss;
  m.lambda_ = lambda;
  // By definition equal to LogNormal(mu = -2 lambda^2, sigma = 2 lambda).
  m.mu_ = -2.0 * lambda * lambda;
  m.sigma_ = 2.0 * lambda;
  return m;
}

IncrementDistribution IncrementDistribution::lognormal(double mu, double sigma,
                                                       double zero_mass) {
  if (!(sigma > 0.0)) {
    throw ConfigError("lognormal increment: sigma must be positive");
  }
  if (zero_mass < 0.0 || zero_mass >= 1.0) {
    throw ConfigError("lognormal increment: zero mass outside [0, 1)");
  }
  IncrementDistribution m;
  m.kind_ = Kind::LogNormal;
  m.mu_ = mu;
  m.sigma_ = sigma;
  m.zero_mass_ = zero_mass;
  return m;
}

IncrementDistribution IncrementDistribution::pickands_derived(
    PickandsFunction A) {
  IncrementDistribution m;
  m.kind_ = Kind::PickandsDerived;
  m.pickands_ = std::move(A);
  if (m.pickands_.rep() == PickandsFunction::Rep::HuslerReiss) {
    m.lambda_ = m.pickands_.hr_lambda();
    m.mu_ = -2.0 * m.lambda_ * m.lambda_;
    m.sigma_ = 2.0 * m.lambda_;
  }
  return m;
}

IncrementDistribution IncrementDistribution::empirical(
    std::vector<double> samples) {
  if (samples.empty()) {
    throw ConfigError("empirical increment: no samples");
  }
  for (double v : samples) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError("empirical increment: samples must be finite and >= 0");
    }
  }
  std::sort(samples.begin(), samples.end());
  IncrementDistribution m;
  m.kind_ = Kind::Empirical;
  m.samples_ = std::move(samples);
  return m;
}

double IncrementDistribution::cdf(double z) const {
  if (z < 0.0) return 0.0;
  switch (kind_) {
    case Kind::Discrete: {
      const auto it = std::upper_bound(values_.begin(), values_.end(), z);
      double total = 0.0;
      for (auto v = values_.begin(); v != it; ++v) {
        total += weights_[static_cast<std::size_t>(v - values_.begin())];
      }
      return total;
    }
    case Kind::HuslerReiss:
      if (z == 0.0) return 0.0;
      return norm_cdf(lambda_ + std::log(z) / (2.0 * lambda_));
    case Kind::LogNormal:
      if (z == 0.0) return zero_mass_;
      return zero_mass_ +
             (1.0 - zero_mass_) * norm_cdf((std::log(z) - mu_) / sigma_);
    case Kind::PickandsDerived: {
      const double w = 1.0 / (1.0 + z);
      return pickands_.value(w) - w * pickands_.left_derivative(w);
    }
    case Kind::Empirical: {
      const auto it = std::upper_bound(samples_.begin(), samples_.end(), z);
      return static_cast<double>(it - samples_.begin()) /
             static_cast<double>(samples_.size());
    }
  }
  return 0.0;
}

double IncrementDistribution::cdf_left(double z) const {
  if (z <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::Discrete: {
      const auto it = std::lower_bound(values_.begin(), values_.end(), z);
      double total = 0.0;
      for (auto v = values_.begin(); v != it; ++v) {
        total += weights_[static_cast<std::size_t>(v - values_.begin())];
      }
      return total;
    }
    case Kind::HuslerReiss:
    case Kind::LogNormal:
      return cdf(z);  // continuous on (0, inf)
    case Kind::PickandsDerived: {
      if (pickands_.rep() == PickandsFunction::Rep::HuslerReiss) return cdf(z);
      double total = mass_at_zero();
      const GridAtoms atoms = grid_pickands_atoms(pickands_);
      for (std::size_t i = 0; i < atoms.values.size(); ++i) {
        if (atoms.values[i] > 0.0 && atoms.values[i] < z) {
          total += atoms.weights[i];
        }
      }
      return total;
    }
    case Kind::Empirical: {
      const auto it = std::lower_bound(samples_.begin(), samples_.end(), z);
      return static_cast<double>(it - samples_.begin()) /
             static_cast<double>(samples_.size());
    }
  }
  return 0.0;
}

double IncrementDistribution::mass_at_zero() const {
  switch (kind_) {
    case Kind::Discrete:
      return values_.front() == 0.0 ? weights_.front() : 0.0;
    case Kind::HuslerReiss:
      return 0.0;
    case Kind::LogNormal:
      return zero_mass_;
    case Kind::PickandsDerived:
      return 1.0 - pickands_.left_derivative(1.0);
    case Kind::Empirical: {
      const auto it =
          std::upper_bound(samples_.begin(), samples_.end(), 0.0);
      return static_cast<double>(it - samples_.begin()) /
             static_cast<double>(samples_.size());
    }
  }
  return 0.0;
}

std::vector<double> IncrementDistribution::atom_locations() const {
  std::vector<double> out;
  switch (kind_) {
    case Kind::Discrete:
      for (double v : values_) {
        if (v > 0.0) out.push_back(v);
      }
      break;
    case Kind::PickandsDerived:
      if (pickands_.rep() == PickandsFunction::Rep::Grid) {
        const GridAtoms atoms = grid_pickands_atoms(pickands_);
        for (double v : atoms.values) {
          if (v > 0.0) out.push_back(v);
        }
        std::sort(out.begin(), out.end());
      }
      break;
    case Kind::Empirical:
      for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (samples_[i] > 0.0 &&
            (out.empty() || out.back() != samples_[i])) {
          out.push_back(samples_[i]);
        }
      }
      break;
    default:
      break;
  }
  return out;
}

IncrementDistribution increment_from_pickands(const PickandsFunction& A) {
  validate_pickands(A);
  return IncrementDistribution::pickands_derived(A);
}

namespace {

// E[min(1-w, w M)] for the Pickands construction A(w) = 1 - E[min(1-w, wM)].
double expected_min(const IncrementDistribution& m, double w) {
  if (w <= 0.0) return 0.0;
  if (w >= 1.0) return 0.0;
  const double cap = 1.0 - w;
  const double x = cap / w;  // M-threshold where w M reaches the cap
  switch (m.kind()) {
    case IncrementDistribution::Kind::Discrete: {
      double total = 0.0;
      const auto& vs = m.discrete_values();
      const auto& ws = m.discrete_weights();
      for (std::size_t i = 0; i < vs.size(); ++i) {
        total += ws[i] * std::min(cap, w * vs[i]);
      }
      return total;
    }
    case IncrementDistribution::Kind::Empirical: {
      double total = 0.0;
      for (double v : m.empirical_samples()) {
        total += std::min(cap, w * v);
      }
      return total / static_cast<double>(m.empirical_samples().size());
    }
    case IncrementDistribution::Kind::HuslerReiss:
    case IncrementDistribution::Kind::LogNormal:
      return w * lognormal_partial_mean(m.log_mu(), m.log_sigma(),
                                        m.zero_mass(), x) +
             cap * lognormal_survival(m.log_mu(), m.log_sigma(), m.zero_mass(),
                                      x);
    case IncrementDistribution::Kind::PickandsDerived: {
      if (m.pickands().rep() == PickandsFunction::Rep::Grid) {
        const GridAtoms atoms = grid_pickands_atoms(m.pickands());
        double total = 0.0;
        for (std::size_t i = 0; i < atoms.values.size(); ++i) {
          total += atoms.weights[i] * std::min(cap, w * atoms.values[i]);
        }
        return total;
      }
      return w * lognormal_partial_mean(m.log_mu(), m.log_sigma(), 0.0, x) +
             cap * lognormal_survival(m.log_mu(), m.log_sigma(), 0.0, x);
    }
  }
  return 0.0;
}

}  // namespace

PickandsFunction pickands_from_increment(const IncrementDistribution& m) {
  const double mean1 = alpha_moment(m, 1.0);
  if (mean1 > 1.0 + kMomentTol) {
    throw PreconditionError("pickands_from_increment: E[M] = " +
                            std::to_string(mean1) + " exceeds 1");
  }
  if (m.kind() == IncrementDistribution::Kind::HuslerReiss) {
    return PickandsFunction::husler_reiss(m.hr_lambda());
  }
  const std::size_t n = 1001;
  std::vector<double> w(n), a(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    a[i] = 1.0 - expected_min(m, w[i]);
  }
  return PickandsFunction::grid(std::move(w), std::move(a));
}

double alpha_moment(const IncrementDistribution& m, double alpha) {
  if (!(alpha > 0.0)) {
    throw PreconditionError("alpha_moment: alpha must be positive");
  }
  switch (m.kind()) {
    case IncrementDistribution::Kind::Discrete: {
      double total = 0.0;
      const auto& vs = m.discrete_values();
      const auto& ws = m.discrete_weights();
      for (std::size_t i = 0; i < vs.size(); ++i) {
        if (vs[i] > 0.0) total += ws[i] * std::pow(vs[i], alpha);
      }
      return total;
    }
    case IncrementDistribution::Kind::HuslerReiss:
    case IncrementDistribution::Kind::LogNormal:
      return (1.0 - m.zero_mass()) *
             std::exp(alpha * m.log_mu() +
                      0.5 * alpha * alpha * m.log_sigma() * m.log_sigma());
    case IncrementDistribution::Kind::PickandsDerived: {
      if (m.pickands().rep() == PickandsFunction::Rep::Grid) {
        const GridAtoms atoms = grid_pickands_atoms(m.pickands());
        double total = 0.0;
        for (std::size_t i = 0; i < atoms.values.size(); ++i) {
          if (atoms.values[i] > 0.0) {
            total += atoms.weights[i] * std::pow(atoms.values[i], alpha);
          }
        }
        return total;
      }
      // Closed-form Husler-Reiss Pickands function: integrate z^alpha against
      // the density q(z) = w^3 A''(w), w = 1/(1+z).
      const PickandsFunction& A = m.pickands();
      return integrate_positive_axis(
          [&A, alpha](double z) {
            const double w = 1.0 / (1.0 + z);
            return std::pow(z, alpha) * w * w * w * A.second_derivative(w);
          },
          1e-10);
    }
    case IncrementDistribution::Kind::Empirical: {
      double total = 0.0;
      for (double v : m.empirical_samples()) {
        if (v > 0.0) total += std::pow(v, alpha);
      }
      return total / static_cast<double>(m.empirical_samples().size());
    }
  }
  return 0.0;
}

namespace {

IncrementDistribution reverse_atoms(const std::vector<double>& values,
                                    const std::vector<double>& weights,
                                    double c_a, double c_b, double alpha) {
  const double scale = c_a / c_b;
  std::vector<double> out_v, out_w;
  double positive_mass = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= 0.0) continue;
    const double mass = scale * std::pow(values[i], alpha) * weights[i];
    out_v.push_back(1.0 / values[i]);
    out_w.push_back(mass);
    positive_mass += mass;
  }
  if (positive_mass > 1.0 + kMomentTol) {
    throw PreconditionError(
        "reverse_increment: E[M^alpha] exceeds c_b/c_a (inconsistent tail "
        "constants)");
  }
  const double zero = std::max(0.0, 1.0 - positive_mass);
  if (zero > 0.0 || out_v.empty()) {
    out_v.push_back(0.0);
    out_w.push_back(std::max(zero, 0.0));
  } else if (positive_mass != 1.0) {
    // Absorb rounding drift (|drift| <= kMomentTol) into the largest atom so
    // the weights sum to one exactly.
    std::size_t imax = 0;
    for (std::size_t i = 1; i < out_w.size(); ++i) {
      if (out_w[i] > out_w[imax]) imax = i;
    }
    out_w[imax] += 1.0 - positive_mass;
  }
  return IncrementDistribution::discrete(std::move(out_v), std::move(out_w));
}

}  // namespace

IncrementDistribution reverse_increment(const IncrementDistribution& m_ab,
                                        double c_a, double c_b, double alpha) {
  if (!(c_a > 0.0) || !(c_b > 0.0)) {
    throw PreconditionError("reverse_increment: tail constants must be "
                            "positive");
  }
  if (!(alpha > 0.0)) {
    throw PreconditionError("reverse_increment: alpha must be positive");
  }
  const double moment = alpha_moment(m_ab, alpha);
  if (moment > c_b / c_a + kMomentTol) {
    throw PreconditionError(
        "reverse_increment: E[M^alpha] = " + std::to_string(moment) +
        " exceeds c_b/c_a = " + std::to_string(c_b / c_a) +
        " (inconsistent tail constants)");
  }
  switch (m_ab.kind()) {
    case IncrementDistribution::Kind::Discrete:
      return reverse_atoms(m_ab.discrete_values(), m_ab.discrete_weights(),
                           c_a, c_b, alpha);
    case IncrementDistribution::Kind::Empirical: {
      const auto& xs = m_ab.empirical_samples();
      const std::vector<double> weights(
          xs.size(), 1.0 / static_cast<double>(xs.size()));
      return reverse_atoms(xs, weights, c_a, c_b, alpha);
    }
    case IncrementDistribution::Kind::HuslerReiss:
      if (alpha == 1.0 && c_a == c_b) {
        return IncrementDistribution::husler_reiss(m_ab.hr_lambda());
      }
      [[fallthrough]];
    case IncrementDistribution::Kind::LogNormal: {
      const double mu = m_ab.log_mu();
      const double sigma = m_ab.log_sigma();
      const double k = (c_a / c_b) * moment;
      const double zero = std::clamp(1.0 - k, 0.0, 1.0);
      return IncrementDistribution::lognormal(-mu - alpha * sigma * sigma,
                                              sigma, zero);
    }
    case IncrementDistribution::Kind::PickandsDerived: {
      if (m_ab.pickands().rep() == PickandsFunction::Rep::Grid) {
        const GridAtoms atoms = grid_pickands_atoms(m_ab.pickands());
        return reverse_atoms(atoms.values, atoms.weights, c_a, c_b, alpha);
      }
      const double mu = m_ab.log_mu();
      const double sigma = m_ab.log_sigma();
      const double k = (c_a / c_b) * moment;
      const double zero = std::clamp(1.0 - k, 0.0, 1.0);
      return IncrementDistribution::lognormal(-mu - alpha * sigma * sigma,
                                              sigma, zero);
    }
  }
  throw NumericError("reverse_increment: unhandled variant");
}

double quantile(const IncrementDistribution& m, double u) {
  switch (m.kind()) {
    case IncrementDistribution::Kind::Discrete: {
      double acc = 0.0;
      const auto& vs = m.discrete_values();
      const auto& ws = m.discrete_weights();
      for (std::size_t i = 0; i < vs.size(); ++i) {
        acc += ws[i];
        if (u <= acc) return vs[i];
      }
      return vs.back();
    }
    case IncrementDistribution::Kind::HuslerReiss:
      return std::exp(2.0 * m.hr_lambda() *
                      (norm_quantile(u) - m.hr_lambda()));
    case IncrementDistribution::Kind::LogNormal: {
      if (u <= m.zero_mass()) return 0.0;
      const double v = (u - m.zero_mass()) / (1.0 - m.zero_mass());
      return std::exp(m.log_mu() + m.log_sigma() * norm_quantile(v));
    }
    case IncrementDistribution::Kind::PickandsDerived: {
      if (m.pickands().rep() == PickandsFunction::Rep::Grid) {
        const GridAtoms atoms = grid_pickands_atoms(m.pickands());
        double acc = 0.0;
        for (std::size_t i = 0; i < atoms.values.size(); ++i) {
          acc += atoms.weights[i];
          if (u <= acc) return atoms.values[i];
        }
        return atoms.values.back();
      }
      // Numeric inverse CDF by bisection on the closed-form CDF.
      double lo = 1e-12, hi = 1e12;
      if (m.cdf(lo) >= u) return lo;
      if (m.cdf(hi) < u) return hi;
      for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);  // bisection on the log axis
        if (m.cdf(mid) >= u) {
          hi = mid;
        } else {
          lo = mid;
        }
        if (hi - lo <= 1e-12 * hi) break;
      }
      return hi;
    }
    case IncrementDistribution::Kind::Empirical: {
      const auto& xs = m.empirical_samples();
      const double n = static_cast<double>(xs.size());
      std::size_t k = static_cast<std::size_t>(std::ceil(u * n));
      if (k == 0) k = 1;
      if (k > xs.size()) k = xs.size();
      return xs[k - 1];
    }
  }
  throw NumericError("quantile: unhandled variant");
}

std::vector<double> sample_increment(const IncrementDistribution& m,
                                     std::size_t n, std::uint64_t seed) {
  if (n == 0) {
    throw PreconditionError("sample_increment: n must be >= 1");
  }
  std::vector<double> out(n);
  parallel_blocks(n, [&](std::size_t block, std::size_t lo, std::size_t hi) {
    Rng rng(block_seed(seed, /*stream=*/0x494e43, block));
    for (std::size_t i = lo; i < hi; ++i) {
      out[i] = quantile(m, rng.uniform01());
    }
  });
  return out;
}

}  // namespace tailcalc
