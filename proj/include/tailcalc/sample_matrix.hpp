#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "tailcalc/tree.hpp"

namespace tailcalc {

// n x |V| array of nonnegative draws, columns indexed by node id.
struct SampleMatrix {
  std::vector<NodeId> columns;
  Eigen::MatrixXd values;

  Eigen::Index col_index(const NodeId& id) const;
  std::vector<double> column(const NodeId& id) const;
};

// CSV with a header row of node ids; doubles printed with round-trip
// precision so identical runs produce identical bytes.
void write_csv(const SampleMatrix& m, std::ostream& os);
std::string format_double(double x);

}  // namespace tailcalc
