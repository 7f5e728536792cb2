#include "dynlap/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace dynlap {

SparseMatrix sparse_identity(Eigen::Index n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

bool is_identity(const SparseMatrix& m) {
  if (m.rows() != m.cols() || m.nonZeros() != m.rows()) return false;
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    SparseMatrix::InnerIterator it(m, r);
    if (!it || it.col() != r || it.value() != 1.0) return false;
  }
  return true;
}

double norm_inf(const SparseMatrix& m) {
  double best = 0.0;
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

}  // namespace dynlap
