#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dynlap/dynamics.hpp"
#include "dynlap/grid.hpp"
#include "dynlap/sparse.hpp"
#include "dynlap/transfer.hpp"

namespace dynlap {

enum class OperatorKind { StaticLaplacian, DynamicLaplacian, MultistepLaplacian };

const char* to_string(OperatorKind kind);

/// Sparse n-by-n operator on box-center values of a grid.
struct DiscreteOperator {
  SparseMatrix matrix;
  Grid grid;
  OperatorKind kind = OperatorKind::StaticLaplacian;
  std::string fingerprint;  // provenance of the dynamics, empty for static
  std::size_t q_per_axis = 0;
};

/// Five-point Laplacian at box centers. Periodic axes wrap; non-periodic edges
/// use the mirror ghost value f[-1] = f[1] (so the edge row reads
/// 2 f[N-2] + ... - 4 f[N-1] on square boxes). Anisotropic boxes weight the
/// x and y second differences by 1/dx^2 and 1/dy^2.
/// Throws GridTooCoarse when a non-periodic axis has fewer than 3 boxes.
DiscreteOperator assemble_laplacian(const Grid& grid);

/// (Δ + P̃ᵀ Δ_image P̃) / 2 with P̃ the transfer (transposed Ulam) matrix.
DiscreteOperator assemble_dynamic_laplacian(const DiscreteOperator& lap_source, const DiscreteOperator& lap_image,
                                            const SparseMatrix& transfer);

/// Σ_i w_i P̃_iᵀ Δ_i P̃_i. The first transfer must be the identity; weights must
/// sum to one within 1e-12.
DiscreteOperator assemble_multistep(const std::vector<DiscreteOperator>& laps,
                                    const std::vector<SparseMatrix>& transfers, const std::vector<double>& weights);

/// Trapezoidal weights for `samples` equally spaced times (sum exactly 1 up to rounding).
std::vector<double> trapezoid_weights(std::size_t samples);

/// (A + Aᵀ) / 2.
DiscreteOperator symmetrized(const DiscreteOperator& op);

/// Max |row sum| of the operator (zero when constants are in the kernel).
double kernel_defect(const DiscreteOperator& op);

struct ObjectivityReport {
  std::size_t shift_x = 0;
  std::size_t shift_y = 0;
  std::vector<double> eigenvalues_original;
  std::vector<double> eigenvalues_transformed;
  double max_eigenvalue_discrepancy = 0.0;
  /// Largest sin of principal angles between matching (clustered) eigenspaces,
  /// the original ones shifted by the frame change.
  double max_eigenvector_discrepancy = 0.0;
};

/// Frame-change test with a whole-box translation S: rebuilds the dynamic
/// Laplacian for S∘T∘S⁻¹ from scratch (new Ulam matrix, new assembly) and
/// compares the leading k eigenpairs with those of T.
/// Shifts are given in boxes; non-integer values or shifts along a
/// non-periodic axis throw UnsupportedIsometry.
ObjectivityReport objectivity_check(const Grid& grid, const FlowMap& map, std::size_t q_per_axis,
                                    double shift_boxes_x, double shift_boxes_y, std::size_t k, double tol = 1e-12);

}  // namespace dynlap
