#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "tailcalc/increments.hpp"
#include "tailcalc/sample_matrix.hpp"
#include "tailcalc/stats.hpp"
#include "tailcalc/tree.hpp"

namespace tailcalc {

// Markov-tree tail model: tree topology, tail index alpha, per-node tail
// constants and per-directed-edge increment laws. A missing direction is
// derived on demand by reverse_increment.
struct TailTreeModel {
  Tree tree;
  double alpha = 1.0;
  std::map<NodeId, double> c;
  std::map<DirectedEdge, IncrementDistribution> increments;
};

// Structural checks plus the stored-both-directions consistency invariant:
// when an edge carries laws in both directions, the stored reverse must
// agree with reverse_increment of the forward law on a CDF grid to 1e-6.
void validate_model(const TailTreeModel& model);

// Law of M_{a,b}: stored directly or derived by reversing the stored
// opposite direction. Throws when neither is available or the reversal is
// inconsistent.
IncrementDistribution resolve_increment(const TailTreeModel& model,
                                        const NodeId& a, const NodeId& b);

// Rooted tail tree Theta_u: one increment law per directed edge of E_u;
// Theta_{u,v} is the product of independent edge draws along the path u->v.
struct TailTree {
  TailTreeModel model;
  RootedTree rooted;
  std::vector<NodeId> columns;  // sorted node ids
  std::map<DirectedEdge, IncrementDistribution> edge_laws;
};

TailTree build_tail_tree(const TailTreeModel& model, const NodeId& u);

SampleMatrix sample_tail_tree(const TailTree& tt, std::size_t n,
                              std::uint64_t seed);

// Same draws as sample_tail_tree for the same seed, returning both the node
// samples and the per-edge increment realizations (columns "a->b").
std::pair<SampleMatrix, SampleMatrix> sample_tail_tree_with_increments(
    const TailTree& tt, std::size_t n, std::uint64_t seed);

// E[Theta_{u,v}^alpha] as the product of edge moments along the path.
double theta_alpha_moment(const TailTree& tt, const NodeId& v);

// Structural root change: the tail tree rooted at u_bar in which every edge
// on the path u -> u_bar carries the reversed law of the root-u increment;
// all other edges are unchanged.
TailTree change_root(const TailTreeModel& model, const NodeId& u,
                     const NodeId& u_bar);

// Full joint law of a tail tree whose edges are all discrete: list of
// (theta vector, probability) with exactly-equal vectors merged.
struct DiscreteJointLaw {
  std::vector<NodeId> columns;
  Eigen::MatrixXd atoms;  // one row per atom
  Eigen::VectorXd prob;

  Eigen::Index col_index(const NodeId& id) const;
  // E[h(theta)] under the law.
  double expectation(
      const std::function<double(const Eigen::Ref<const Eigen::RowVectorXd>&)>&
          h) const;
};

DiscreteJointLaw exact_tail_tree_discrete(const TailTree& tt);

// Importance-sampling estimate of E[g(Theta_j)] from draws of Theta_i via
// the root-change identity; rows with Theta_{i,j} = 0 carry weight zero.
Estimate root_change_expectation(
    const SampleMatrix& theta_i_samples, const NodeId& i, const NodeId& j,
    const std::function<double(const Eigen::Ref<const Eigen::RowVectorXd>&)>& g,
    double alpha);

// Exact counterpart on a discrete joint law: the law of Theta_j obtained by
// reweighting the law of Theta_i.
DiscreteJointLaw root_change_exact(const DiscreteJointLaw& theta_i,
                                   const NodeId& i, const NodeId& j,
                                   double alpha);

}  // namespace tailcalc
