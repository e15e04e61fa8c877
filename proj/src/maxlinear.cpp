#include "tailcalc/maxlinear.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <string>

#include "tailcalc/errors.hpp"
#include "tailcalc/rng.hpp"

namespace tailcalc {

void validate_maxlinear(const MaxLinearModel& ml) {
  if (!(ml.alpha > 0.0)) {
    throw ConfigError("max-linear model: alpha must be positive");
  }
  if (ml.coeff.rows() < 1 || ml.coeff.cols() < 1) {
    throw ConfigError("max-linear model: empty coefficient matrix");
  }
  for (Eigen::Index i = 0; i < ml.coeff.rows(); ++i) {
    double row_max = 0.0;
    for (Eigen::Index r = 0; r < ml.coeff.cols(); ++r) {
      const double a = ml.coeff(i, r);
      if (!(a >= 0.0) || !std::isfinite(a)) {
        throw ConfigError("max-linear model: coefficients must be finite and "
                          ">= 0");
      }
      row_max = std::max(row_max, a);
    }
    if (!(row_max > 0.0)) {
      throw ConfigError("max-linear model: row " + std::to_string(i + 1) +
                        " has no positive coefficient");
    }
  }
}

Eigen::VectorXd marginal_constants(const MaxLinearModel& ml) {
  validate_maxlinear(ml);
  Eigen::VectorXd c(ml.coeff.rows());
  for (Eigen::Index i = 0; i < ml.coeff.rows(); ++i) {
    double total = 0.0;
    for (Eigen::Index r = 0; r < ml.coeff.cols(); ++r) {
      if (ml.coeff(i, r) > 0.0) total += std::pow(ml.coeff(i, r), ml.alpha);
    }
    c(i) = total;
  }
  return c;
}

namespace {

std::vector<NodeId> index_columns(Eigen::Index d) {
  std::vector<NodeId> cols(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    cols[static_cast<std::size_t>(j)] = std::to_string(j + 1);
  }
  return cols;
}

}  // namespace

DiscreteJointLaw maxlinear_tail_law(const MaxLinearModel& ml, Eigen::Index i) {
  validate_maxlinear(ml);
  const Eigen::Index d = ml.coeff.rows(), s = ml.coeff.cols();
  if (i < 0 || i >= d) {
    throw PreconditionError("maxlinear_tail_law: index out of range");
  }
  const double c_i = marginal_constants(ml)(i);
  std::map<std::vector<double>, double> merged;
  for (Eigen::Index r = 0; r < s; ++r) {
    const double air = ml.coeff(i, r);
    if (!(air > 0.0)) continue;
    std::vector<double> atom(static_cast<std::size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) {
      atom[static_cast<std::size_t>(j)] = j == i ? 1.0 : ml.coeff(j, r) / air;
    }
    merged[atom] += std::pow(air, ml.alpha) / c_i;
  }
  DiscreteJointLaw law;
  law.columns = index_columns(d);
  law.atoms.resize(static_cast<Eigen::Index>(merged.size()), d);
  law.prob.resize(static_cast<Eigen::Index>(merged.size()));
  Eigen::Index row = 0;
  for (const auto& [atom, p] : merged) {
    for (Eigen::Index j = 0; j < d; ++j) {
      law.atoms(row, j) = atom[static_cast<std::size_t>(j)];
    }
    law.prob(row) = p;
    ++row;
  }
  return law;
}

Eigen::VectorXd excluded_alpha_mass(const MaxLinearModel& ml, Eigen::Index i) {
  validate_maxlinear(ml);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ml.coeff.rows());
  for (Eigen::Index r = 0; r < ml.coeff.cols(); ++r) {
    if (ml.coeff(i, r) > 0.0) continue;
    for (Eigen::Index j = 0; j < ml.coeff.rows(); ++j) {
      if (ml.coeff(j, r) > 0.0) out(j) += std::pow(ml.coeff(j, r), ml.alpha);
    }
  }
  return out;
}

MomentFlag theta_moment_ml(const MaxLinearModel& ml, Eigen::Index i,
                           Eigen::Index j, double alpha) {
  validate_maxlinear(ml);
  if (i < 0 || i >= ml.coeff.rows() || j < 0 || j >= ml.coeff.rows()) {
    throw PreconditionError("theta_moment_ml: index out of range");
  }
  double c_i = 0.0, numer = 0.0;
  bool support_included = true;  // supp(a_{j,.}) subset of supp(a_{i,.})
  for (Eigen::Index r = 0; r < ml.coeff.cols(); ++r) {
    const double air = ml.coeff(i, r), ajr = ml.coeff(j, r);
    if (air > 0.0) {
      c_i += std::pow(air, alpha);
      if (ajr > 0.0) numer += std::pow(ajr, alpha);
    } else if (ajr > 0.0) {
      support_included = false;
    }
  }
  return {numer / c_i, support_included};
}

MaxLinearModel sem_to_maxlinear(const RecursiveMLModel& rm, double alpha) {
  const std::size_t d = rm.nodes.size();
  if (d == 0 || rm.node_gamma.size() != d) {
    throw ConfigError("recursive max-linear model: node/gamma size mismatch");
  }
  std::map<NodeId, std::size_t> index;
  for (std::size_t k = 0; k < d; ++k) {
    if (!index.emplace(rm.nodes[k], k).second) {
      throw ConfigError("recursive max-linear model: duplicate node '" +
                        rm.nodes[k] + "'");
    }
    if (!(rm.node_gamma[k] > 0.0)) {
      throw ConfigError("recursive max-linear model: gamma_ii must be "
                        "positive");
    }
  }
  std::vector<std::vector<std::pair<std::size_t, double>>> parents(d);
  std::vector<std::size_t> indegree(d, 0);
  std::vector<std::vector<std::size_t>> children(d);
  for (const auto& e : rm.edges) {
    const auto fit = index.find(e.from), tit = index.find(e.to);
    if (fit == index.end() || tit == index.end()) {
      throw ConfigError("recursive max-linear model: edge endpoint unknown");
    }
    if (!(e.gamma > 0.0)) {
      throw ConfigError("recursive max-linear model: edge gamma must be "
                        "positive");
    }
    parents[tit->second].emplace_back(fit->second, e.gamma);
    children[fit->second].push_back(tit->second);
    ++indegree[tit->second];
  }

  // Kahn topological order; detects cycles.
  std::deque<std::size_t> ready;
  for (std::size_t k = 0; k < d; ++k) {
    if (indegree[k] == 0) ready.push_back(k);
  }
  std::vector<std::size_t> topo;
  std::vector<std::size_t> degree = indegree;
  while (!ready.empty()) {
    const std::size_t v = ready.front();
    ready.pop_front();
    topo.push_back(v);
    for (std::size_t w : children[v]) {
      if (--degree[w] == 0) ready.push_back(w);
    }
  }
  if (topo.size() != d) {
    throw ConfigError("recursive max-linear model: cycle detected");
  }

  // b(j, i) = best path product gamma_jj * prod gamma_e from j to i.
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                            static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < d; ++k) {
    b(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) =
        rm.node_gamma[k];
  }
  for (std::size_t i : topo) {
    for (const auto& [k, gamma_ki] : parents[i]) {
      for (std::size_t j = 0; j < d; ++j) {
        const double via =
            b(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) *
            gamma_ki;
        auto& cell =
            b(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
        if (j != i && via > cell) cell = via;
      }
    }
  }

  MaxLinearModel ml;
  ml.alpha = alpha;
  ml.coeff = b.transpose();  // a_{i,r} = b_{ri}
  validate_maxlinear(ml);
  return ml;
}

SampleMatrix sample_maxlinear(const MaxLinearModel& ml, std::size_t n,
                              std::uint64_t seed) {
  validate_maxlinear(ml);
  if (n == 0) throw PreconditionError("sample_maxlinear: n must be >= 1");
  const Eigen::Index d = ml.coeff.rows(), s = ml.coeff.cols();
  SampleMatrix out;
  out.columns = index_columns(d);
  out.values.resize(static_cast<Eigen::Index>(n), d);
  const double inv_alpha = 1.0 / ml.alpha;
  parallel_blocks(n, [&](std::size_t block, std::size_t lo, std::size_t hi) {
    Rng rng(block_seed(seed, /*stream=*/0x4d41584c, block));
    Eigen::VectorXd z(s);
    for (std::size_t r = lo; r < hi; ++r) {
      for (Eigen::Index f = 0; f < s; ++f) {
        // Frechet(alpha): P(Z <= z) = exp(-z^-alpha)
        z(f) = std::pow(-std::log(rng.uniform01()), -inv_alpha);
      }
      const Eigen::Index row = static_cast<Eigen::Index>(r);
      for (Eigen::Index i = 0; i < d; ++i) {
        double best = 0.0;
        for (Eigen::Index f = 0; f < s; ++f) {
          best = std::max(best, ml.coeff(i, f) * z(f));
        }
        out.values(row, i) = best;
      }
    }
  });
  return out;
}

}  // namespace tailcalc
