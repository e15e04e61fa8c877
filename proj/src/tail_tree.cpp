#include "tailcalc/tail_tree.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "tailcalc/errors.hpp"
#include "tailcalc/rng.hpp"

namespace tailcalc {

namespace {

double node_constant(const TailTreeModel& model, const NodeId& v,
                     const char* what) {
  const auto it = model.c.find(v);
  if (it == model.c.end()) {
    throw PreconditionError(std::string(what) + ": tail constant missing for "
                            "node '" + v + "'");
  }
  if (!(it->second > 0.0)) {
    throw ConfigError("tail constant at node '" + v + "' must be positive");
  }
  return it->second;
}

// CDF comparison grid: log-spaced points plus the atoms of both laws.
std::vector<double> cdf_grid(const IncrementDistribution& a,
                             const IncrementDistribution& b) {
  std::vector<double> zs;
  for (int k = 0; k <= 60; ++k) {
    zs.push_back(std::pow(10.0, -3.0 + 0.1 * k));
  }
  for (const auto& m : {a, b}) {
    for (double v : m.atom_locations()) {
      zs.push_back(v);
      zs.push_back(v * (1.0 + 1e-9));
    }
  }
  zs.push_back(0.0);
  std::sort(zs.begin(), zs.end());
  return zs;
}

}  // namespace

void validate_model(const TailTreeModel& model) {
  if (!(model.alpha > 0.0)) {
    throw ConfigError("model: alpha must be positive");
  }
  for (const auto& [v, cv] : model.c) {
    if (!model.tree.has_node(v)) {
      throw ConfigError("model: tail constant for unknown node '" + v + "'");
    }
    if (!(cv > 0.0)) {
      throw ConfigError("model: tail constant at '" + v +
                        "' must be positive");
    }
  }
  std::set<std::pair<NodeId, NodeId>> tree_edges(model.tree.edges().begin(),
                                                 model.tree.edges().end());
  for (const auto& [edge, law] : model.increments) {
    auto undirected = edge.first < edge.second
                          ? edge
                          : std::make_pair(edge.second, edge.first);
    if (!tree_edges.count(undirected)) {
      throw ConfigError("model: increment on non-edge (" + edge.first + "," +
                        edge.second + ")");
    }
    (void)law;
  }
  // Stored-both-directions consistency.
  for (const auto& [edge, law] : model.increments) {
    const DirectedEdge rev{edge.second, edge.first};
    if (!(edge.first < edge.second)) continue;  // check each pair once
    const auto it = model.increments.find(rev);
    if (it == model.increments.end()) continue;
    const double c_a = node_constant(model, edge.first, "validate_model");
    const double c_b = node_constant(model, edge.second, "validate_model");
    const IncrementDistribution derived =
        reverse_increment(law, c_a, c_b, model.alpha);
    for (double z : cdf_grid(it->second, derived)) {
      if (std::abs(it->second.cdf(z) - derived.cdf(z)) > 1e-6) {
        throw ConfigError(
            "model: stored increments for edge {" + edge.first + "," +
            edge.second + "} are not mutual reversals (CDF mismatch at z = " +
            std::to_string(z) + ")");
      }
    }
  }
}

IncrementDistribution resolve_increment(const TailTreeModel& model,
                                        const NodeId& a, const NodeId& b) {
  const auto direct = model.increments.find({a, b});
  if (direct != model.increments.end()) return direct->second;
  const auto opposite = model.increments.find({b, a});
  if (opposite == model.increments.end()) {
    throw ConfigError("model: no increment stored for edge (" + a + "," + b +
                      ") in either direction");
  }
  const double c_b = node_constant(model, b, "resolve_increment");
  const double c_a = node_constant(model, a, "resolve_increment");
  // Stored law runs b -> a; its reversal is the law of M_{a,b}.
  return reverse_increment(opposite->second, c_b, c_a, model.alpha);
}

TailTree build_tail_tree(const TailTreeModel& model, const NodeId& u) {
  if (!model.tree.has_node(u)) {
    throw ConfigError("build_tail_tree: unknown root '" + u + "'");
  }
  TailTree tt{model, root_tree(model.tree, u), model.tree.nodes(), {}};
  for (const auto& [a, b] : tt.rooted.directed_edges) {
    tt.edge_laws.emplace(DirectedEdge{a, b}, resolve_increment(model, a, b));
  }
  return tt;
}

namespace {

constexpr std::uint64_t kThetaStream = 0x54485441;  // tail-tree sampling

void fill_theta_rows(const TailTree& tt, std::uint64_t seed,
                     Eigen::MatrixXd& theta, Eigen::MatrixXd* edge_draws) {
  const auto& edges = tt.rooted.directed_edges;
  std::map<NodeId, Eigen::Index> col;
  for (std::size_t j = 0; j < tt.columns.size(); ++j) {
    col[tt.columns[j]] = static_cast<Eigen::Index>(j);
  }
  const Eigen::Index root_col = col.at(tt.rooted.root);
  std::vector<const IncrementDistribution*> laws;
  laws.reserve(edges.size());
  for (const auto& e : edges) laws.push_back(&tt.edge_laws.at(e));

  parallel_blocks(
      static_cast<std::size_t>(theta.rows()),
      [&](std::size_t block, std::size_t lo, std::size_t hi) {
        Rng rng(block_seed(seed, kThetaStream, block));
        for (std::size_t r = lo; r < hi; ++r) {
          const Eigen::Index row = static_cast<Eigen::Index>(r);
          theta(row, root_col) = 1.0;
          for (std::size_t k = 0; k < edges.size(); ++k) {
            const double m = quantile(*laws[k], rng.uniform01());
            theta(row, col.at(edges[k].second)) =
                theta(row, col.at(edges[k].first)) * m;
            if (edge_draws) (*edge_draws)(row, static_cast<Eigen::Index>(k)) = m;
          }
        }
      });
}

}  // namespace

SampleMatrix sample_tail_tree(const TailTree& tt, std::size_t n,
                              std::uint64_t seed) {
  if (n == 0) throw PreconditionError("sample_tail_tree: n must be >= 1");
  SampleMatrix out;
  out.columns = tt.columns;
  out.values.resize(static_cast<Eigen::Index>(n),
                    static_cast<Eigen::Index>(tt.columns.size()));
  fill_theta_rows(tt, seed, out.values, nullptr);
  return out;
}

std::pair<SampleMatrix, SampleMatrix> sample_tail_tree_with_increments(
    const TailTree& tt, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw PreconditionError("sample_tail_tree: n must be >= 1");
  SampleMatrix theta;
  theta.columns = tt.columns;
  theta.values.resize(static_cast<Eigen::Index>(n),
                      static_cast<Eigen::Index>(tt.columns.size()));
  SampleMatrix draws;
  for (const auto& [a, b] : tt.rooted.directed_edges) {
    draws.columns.push_back(a + "->" + b);
  }
  draws.values.resize(static_cast<Eigen::Index>(n),
                      static_cast<Eigen::Index>(draws.columns.size()));
  fill_theta_rows(tt, seed, theta.values, &draws.values);
  return {std::move(theta), std::move(draws)};
}

double theta_alpha_moment(const TailTree& tt, const NodeId& v) {
  if (!tt.model.tree.has_node(v)) {
    throw ConfigError("theta_alpha_moment: unknown node '" + v + "'");
  }
  if (v == tt.rooted.root) return 1.0;
  double product = 1.0;
  for (const auto& e : path(tt.model.tree, tt.rooted.root, v)) {
    product *= alpha_moment(tt.edge_laws.at(e), tt.model.alpha);
  }
  return product;
}

TailTree change_root(const TailTreeModel& model, const NodeId& u,
                     const NodeId& u_bar) {
  if (!model.tree.has_node(u) || !model.tree.has_node(u_bar)) {
    throw ConfigError("change_root: unknown node");
  }
  TailTree at_u = build_tail_tree(model, u);
  if (u == u_bar) return at_u;

  TailTree tt{model, root_tree(model.tree, u_bar), model.tree.nodes(), {}};
  std::vector<DirectedEdge> reversal_path = path(model.tree, u, u_bar);
  std::set<DirectedEdge> on_path(reversal_path.begin(), reversal_path.end());
  for (const auto& [a, b] : tt.rooted.directed_edges) {
    const DirectedEdge forward{a, b};
    const DirectedEdge opposite{b, a};
    if (on_path.count(opposite)) {
      // Edge lies on the path u -> u_bar: reverse the root-u law.
      const double c_b2 = node_constant(model, b, "change_root");
      const double c_a2 = node_constant(model, a, "change_root");
      tt.edge_laws.emplace(
          forward,
          reverse_increment(at_u.edge_laws.at(opposite), c_b2, c_a2,
                            model.alpha));
    } else {
      tt.edge_laws.emplace(forward, at_u.edge_laws.at(forward));
    }
  }
  return tt;
}

Eigen::Index DiscreteJointLaw::col_index(const NodeId& id) const {
  const auto it = std::find(columns.begin(), columns.end(), id);
  if (it == columns.end()) {
    throw PreconditionError("joint law: unknown column '" + id + "'");
  }
  return static_cast<Eigen::Index>(it - columns.begin());
}

double DiscreteJointLaw::expectation(
    const std::function<double(const Eigen::Ref<const Eigen::RowVectorXd>&)>&
        h) const {
  double total = 0.0;
  for (Eigen::Index r = 0; r < atoms.rows(); ++r) {
    total += prob(r) * h(atoms.row(r));
  }
  return total;
}

DiscreteJointLaw exact_tail_tree_discrete(const TailTree& tt) {
  const auto& edges = tt.rooted.directed_edges;
  std::vector<const IncrementDistribution*> laws;
  std::size_t states = 1;
  for (const auto& e : edges) {
    const auto& law = tt.edge_laws.at(e);
    if (law.kind() != IncrementDistribution::Kind::Discrete) {
      throw PreconditionError(
          "exact_tail_tree_discrete: increment on edge (" + e.first + "," +
          e.second + ") is not discrete");
    }
    laws.push_back(&law);
    const std::size_t k = law.discrete_values().size();
    if (states > 1000000 / k) {
      throw PreconditionError(
          "exact_tail_tree_discrete: state space exceeds 1e6 atoms");
    }
    states *= k;
  }

  std::map<NodeId, std::size_t> col;
  for (std::size_t j = 0; j < tt.columns.size(); ++j) col[tt.columns[j]] = j;
  const std::size_t d = tt.columns.size();
  const std::size_t root = col.at(tt.rooted.root);

  // Enumerate atom choices edge by edge; node values are products along the
  // paths, accumulated in log space with one final exponentiation.
  std::map<std::vector<double>, double> merged;
  std::vector<std::size_t> choice(edges.size(), 0);
  std::vector<double> log_theta(d, 0.0);
  std::vector<char> is_zero(d, 0);
  for (;;) {
    std::fill(log_theta.begin(), log_theta.end(), 0.0);
    std::fill(is_zero.begin(), is_zero.end(), 0);
    double p = 1.0;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const std::size_t a = col.at(edges[k].first);
      const std::size_t b = col.at(edges[k].second);
      const double v = laws[k]->discrete_values()[choice[k]];
      p *= laws[k]->discrete_weights()[choice[k]];
      if (is_zero[a] || v == 0.0) {
        is_zero[b] = 1;
      } else {
        log_theta[b] = log_theta[a] + std::log(v);
      }
    }
    std::vector<double> atom(d);
    for (std::size_t j = 0; j < d; ++j) {
      atom[j] = j == root ? 1.0 : (is_zero[j] ? 0.0 : std::exp(log_theta[j]));
    }
    merged[atom] += p;

    std::size_t k = 0;
    for (; k < edges.size(); ++k) {
      if (++choice[k] < laws[k]->discrete_values().size()) break;
      choice[k] = 0;
    }
    if (k == edges.size()) break;
  }

  DiscreteJointLaw law;
  law.columns = tt.columns;
  law.atoms.resize(static_cast<Eigen::Index>(merged.size()),
                   static_cast<Eigen::Index>(d));
  law.prob.resize(static_cast<Eigen::Index>(merged.size()));
  Eigen::Index r = 0;
  double total = 0.0;
  for (const auto& [atom, p] : merged) {
    for (std::size_t j = 0; j < d; ++j) {
      law.atoms(r, static_cast<Eigen::Index>(j)) = atom[j];
    }
    law.prob(r) = p;
    total += p;
    ++r;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw NumericError("exact_tail_tree_discrete: probabilities sum to " +
                       std::to_string(total));
  }
  return law;
}

Estimate root_change_expectation(
    const SampleMatrix& theta_i_samples, const NodeId& i, const NodeId& j,
    const std::function<double(const Eigen::Ref<const Eigen::RowVectorXd>&)>& g,
    double alpha) {
  (void)i;  // the root column of the sample; retained for interface clarity
  const Eigen::Index cj = theta_i_samples.col_index(j);
  const Eigen::Index n = theta_i_samples.values.rows();
  if (n == 0) {
    throw PreconditionError("root_change_expectation: empty sample");
  }
  double sum_num = 0.0, sum_den = 0.0;
  double ss_num = 0.0, ss_den = 0.0, ss_cross = 0.0;
  Eigen::RowVectorXd scaled(theta_i_samples.values.cols());
  bool any_positive = false;
  for (Eigen::Index r = 0; r < n; ++r) {
    const double tij = theta_i_samples.values(r, cj);
    double num = 0.0, den = 0.0;
    if (tij > 0.0) {
      any_positive = true;
      den = std::pow(tij, alpha);
      scaled = theta_i_samples.values.row(r) / tij;
      num = g(scaled) * den;
    }
    sum_num += num;
    sum_den += den;
    ss_num += num * num;
    ss_den += den * den;
    ss_cross += num * den;
  }
  if (!any_positive) {
    throw PreconditionError(
        "root_change_expectation: all weights zero (Theta_{i,j} = 0 on every "
        "row); root change toward '" + j + "' undefined from '" + i + "'");
  }
  const double nn = static_cast<double>(n);
  const double mean_num = sum_num / nn;
  const double mean_den = sum_den / nn;
  const double ratio = mean_num / mean_den;
  // Delta-method standard error of the ratio estimator.
  const double var_num = ss_num / nn - mean_num * mean_num;
  const double var_den = ss_den / nn - mean_den * mean_den;
  const double cov = ss_cross / nn - mean_num * mean_den;
  const double var_ratio =
      (var_num - 2.0 * ratio * cov + ratio * ratio * var_den) /
      (mean_den * mean_den * nn);
  return {ratio, var_ratio > 0.0 ? std::sqrt(var_ratio) : 0.0};
}

DiscreteJointLaw root_change_exact(const DiscreteJointLaw& theta_i,
                                   const NodeId& i, const NodeId& j,
                                   double alpha) {
  (void)i;
  const Eigen::Index cj = theta_i.col_index(j);
  std::map<std::vector<double>, double> merged;
  double total = 0.0;
  for (Eigen::Index r = 0; r < theta_i.atoms.rows(); ++r) {
    const double tij = theta_i.atoms(r, cj);
    if (!(tij > 0.0)) continue;
    const double weight = theta_i.prob(r) * std::pow(tij, alpha);
    std::vector<double> atom(static_cast<std::size_t>(theta_i.atoms.cols()));
    for (Eigen::Index c = 0; c < theta_i.atoms.cols(); ++c) {
      atom[static_cast<std::size_t>(c)] = theta_i.atoms(r, c) / tij;
    }
    merged[atom] += weight;
    total += weight;
  }
  if (total <= 0.0) {
    throw PreconditionError(
        "root_change_exact: E[Theta_{i,j}^alpha] = 0; root change undefined");
  }
  DiscreteJointLaw out;
  out.columns = theta_i.columns;
  out.atoms.resize(static_cast<Eigen::Index>(merged.size()),
                   theta_i.atoms.cols());
  out.prob.resize(static_cast<Eigen::Index>(merged.size()));
  Eigen::Index r = 0;
  for (const auto& [atom, w] : merged) {
    for (std::size_t c = 0; c < atom.size(); ++c) {
      out.atoms(r, static_cast<Eigen::Index>(c)) = atom[c];
    }
    out.prob(r) = w / total;
    ++r;
  }
  return out;
}

}  // namespace tailcalc
