#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace dynlap {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

SparseMatrix sparse_identity(Eigen::Index n);

/// True when `m` is square with exactly one stored 1.0 per row on the diagonal.
bool is_identity(const SparseMatrix& m);

/// Largest absolute row sum.
double norm_inf(const SparseMatrix& m);

}  // namespace dynlap
