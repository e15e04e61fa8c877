#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "tailcalc/sample_matrix.hpp"
#include "tailcalc/tail_tree.hpp"
#include "tailcalc/tree.hpp"

namespace tailcalc {

// X_i = max_r a_{i,r} Z_r with i.i.d. Frechet(alpha) factors Z_r. Columns of
// the sample matrix are named "1".."d".
struct MaxLinearModel {
  Eigen::MatrixXd coeff;  // d x s, nonnegative, every row has a positive entry
  double alpha = 1.0;
};

void validate_maxlinear(const MaxLinearModel& ml);

// c_i = sum_r a_{i,r}^alpha.
Eigen::VectorXd marginal_constants(const MaxLinearModel& ml);

// Discrete law of Theta_i: atom (a_{j,r}/a_{i,r})_j with probability
// a_{i,r}^alpha / c_i for each r with a_{i,r} > 0; equal atoms merged.
// Indices are 0-based.
DiscreteJointLaw maxlinear_tail_law(const MaxLinearModel& ml, Eigen::Index i);

// Per-component alpha-mass of the factors excluded from Theta_i's support:
// sum_r a_{j,r}^alpha over r with a_{i,r} = 0 (diagnostic for the zero-mass
// dichotomy).
Eigen::VectorXd excluded_alpha_mass(const MaxLinearModel& ml, Eigen::Index i);

struct MomentFlag {
  double moment = 0.0;   // E[Theta_{i,j}^alpha]
  bool full_mass = false;  // true iff moment equals c_j/c_i, i.e.
                           // P(Theta_{j,i} > 0) = 1
};

// Exact moment (1/c_i) sum_r a_{j,r}^alpha 1{a_{i,r} > 0}; the flag is
// decided structurally from the supports, which is exact.
MomentFlag theta_moment_ml(const MaxLinearModel& ml, Eigen::Index i,
                           Eigen::Index j, double alpha);

// Recursive max-linear structural equation model on a DAG: node coefficients
// gamma_ii and edge coefficients gamma_ki, all strictly positive.
struct RecursiveMLModel {
  std::vector<NodeId> nodes;        // sorted ids
  std::vector<double> node_gamma;   // aligned with nodes
  struct Edge {
    NodeId from, to;
    double gamma;
  };
  std::vector<Edge> edges;
};

// Max-linear representation b_{ji} via dynamic programming in topological
// order: b_{ii} = gamma_ii, b_{ji} = max over parents k of i of
// b_{jk} gamma_{ki}. Rows of the result are indexed like the sorted node
// list (a_{i,r} = b_{ri}).
MaxLinearModel sem_to_maxlinear(const RecursiveMLModel& rm, double alpha);

SampleMatrix sample_maxlinear(const MaxLinearModel& ml, std::size_t n,
                              std::uint64_t seed);

}  // namespace tailcalc
