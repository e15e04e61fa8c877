#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tailcalc/maxlinear.hpp"
#include "tailcalc/stats.hpp"
#include "tailcalc/tail_tree.hpp"

namespace tailcalc {

// A handle on the law of Theta_i: an exact discrete joint law or a cached
// matrix of Monte Carlo draws. Carries the conditioning index i, the tail
// index alpha and the tail constants over the index set I (the nodes for
// which constants are known).
struct ThetaSource {
  double alpha = 1.0;
  NodeId index;
  std::map<NodeId, double> c;  // keys define I; must contain index
  std::optional<DiscreteJointLaw> law;
  std::optional<SampleMatrix> draws;

  bool exact() const { return law.has_value(); }
  const std::vector<NodeId>& columns() const;
  double c_at(const NodeId& v) const;
  double c_index() const { return c_at(index); }
};

ThetaSource theta_source_exact(DiscreteJointLaw law, const NodeId& index,
                               std::map<NodeId, double> c, double alpha);
// Samples the tail tree once; constants come from the model.
ThetaSource theta_source_sampled(const TailTree& tt, std::size_t n,
                                 std::uint64_t seed);
// Exact source from the max-linear tail law; i is 0-based, columns "1".."d".
ThetaSource theta_source_maxlinear(const MaxLinearModel& ml, Eigen::Index i);

// The nodes j in I whose alpha-moment E[Theta_{i,j}^alpha] deviates from
// c_j/c_i, i.e. the witnesses of nu({x_i = 0}) = infinity. Empty result
// means the zero-mass precondition holds.
std::vector<NodeId> zero_mass_violations(const ThetaSource& src);
// Throws PreconditionError naming the offending nodes.
void require_zero_mass_precondition(const ThetaSource& src,
                                    const std::string& caller);

// nu(for all j in J: x_j > y_j) = c_i E[min_j (Theta_{i,j}/y_j)^alpha];
// requires src.index in J.
Estimate nu_orthant(const ThetaSource& src, const std::vector<NodeId>& J,
                    const std::vector<double>& y);

// nu(exists j in J: x_j > y_j) = c_i E[max_j (Theta_{i,j}/y_j)^alpha]; valid
// only under the zero-mass precondition, which is verified first.
Estimate nu_union(const ThetaSource& src, const std::vector<NodeId>& J,
                  const std::vector<double>& y);

struct ConsistencyEntry {
  NodeId source_a, source_b;
  double value_a = 0.0, value_b = 0.0;
  double discrepancy = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct ConsistencyReport {
  std::vector<ConsistencyEntry> pairs;
  bool all_pass = true;
};

// Computes nu_orthant from every eligible source (index in J) and compares
// all pairs: tolerance 1e-9 for exact pairs, 3 combined standard errors when
// sampling is involved.
ConsistencyReport consistency_check(const std::vector<ThetaSource>& sources,
                                    const std::vector<NodeId>& J,
                                    const std::vector<double>& y);

// Continuous 1-homogeneous functional rho; S_rho = {x : rho(x) > 1} must stay
// away from {max(x_I) = 0}, which is checked structurally.
struct RhoFunctional {
  enum class Kind { Max, Sum, Min };
  Kind kind = Kind::Max;
  std::vector<std::pair<NodeId, double>> weights;  // Min: keys form J
};

double rho_value(const RhoFunctional& rho,
                 const std::vector<NodeId>& columns,
                 const Eigen::Ref<const Eigen::RowVectorXd>& theta);

// nu(S_rho) = c_i E[rho(Theta_i)^alpha]. A zero estimate is a legitimate
// result (degenerate conditioning), reported as value 0.
Estimate nu_rho_mass(const ThetaSource& src, const RhoFunctional& rho);

// Event A as a finite union of coordinate boxes; per coordinate an optional
// strict lower bound x > lower and optional upper bound x <= upper.
struct BoxConstraint {
  NodeId node;
  std::optional<double> lower;
  std::optional<double> upper;
};
struct BoxEvent {
  std::vector<BoxConstraint> constraints;
};
struct EventDescriptor {
  std::vector<BoxEvent> boxes;
};

// P(Y in A) for the multivariate Pareto limit law nu(. cap S_rho)/nu(S_rho).
// The inner z-integral is evaluated in closed form per draw; the ratio
// estimate carries a delta-method standard error.
Estimate mpd_probability(const ThetaSource& src, const RhoFunctional& rho,
                         const EventDescriptor& A);

}  // namespace tailcalc
