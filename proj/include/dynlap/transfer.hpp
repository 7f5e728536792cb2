#pragma once

#include <cstddef>
#include <string>

#include "dynlap/dynamics.hpp"
#include "dynlap/grid.hpp"
#include "dynlap/sparse.hpp"

namespace dynlap {

/// Ulam estimate of box-to-box transition probabilities under a flow map.
///
/// `P(i, j)` is the fraction of the q_per_axis^2 test points of source box i
/// whose image lands in image box j. Rows sum to one. The function-space
/// transfer operator acting on box values is the transpose, see `transfer()`.
struct TransitionMatrix {
  SparseMatrix P;
  Grid source;
  Grid image;
  std::size_t q_per_axis = 0;
  std::string fingerprint;

  /// P̃ = Pᵀ: pushes a field on the source grid forward to the image grid.
  SparseMatrix transfer() const { return SparseMatrix(P.transpose()); }
};

/// OpenMP-parallel construction over source boxes. Output is independent of
/// thread count and scheduling.
TransitionMatrix build_ulam(const Grid& source, const Grid& image, const FlowMap& map, std::size_t q_per_axis);

/// Single-threaded reference construction; kept for testing and benchmarks.
TransitionMatrix build_ulam_serial(const Grid& source, const Grid& image, const FlowMap& map,
                                   std::size_t q_per_axis);

/// P̃ · f on the image grid.
ScalarField pushforward(const TransitionMatrix& tm, const ScalarField& f);

/// Max |row sum - 1| over all rows.
double row_stochastic_defect(const SparseMatrix& P);

}  // namespace dynlap
