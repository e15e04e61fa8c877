#include "tailcalc/sample_matrix.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "tailcalc/errors.hpp"

namespace tailcalc {

Eigen::Index SampleMatrix::col_index(const NodeId& id) const {
  const auto it = std::find(columns.begin(), columns.end(), id);
  if (it == columns.end()) {
    throw PreconditionError("sample matrix: unknown column '" + id + "'");
  }
  return static_cast<Eigen::Index>(it - columns.begin());
}

std::vector<double> SampleMatrix::column(const NodeId& id) const {
  const Eigen::Index j = col_index(id);
  std::vector<double> out(static_cast<std::size_t>(values.rows()));
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = values(i, j);
  }
  return out;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_csv(const SampleMatrix& m, std::ostream& os) {
  for (std::size_t j = 0; j < m.columns.size(); ++j) {
    if (j) os << ',';
    os << m.columns[j];
  }
  os << '\n';
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
      if (j) os << ',';
      os << format_double(m.values(i, j));
    }
    os << '\n';
  }
}

}  // namespace tailcalc
