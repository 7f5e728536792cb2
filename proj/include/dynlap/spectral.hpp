#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "dynlap/grid.hpp"
#include "dynlap/laplacian.hpp"
#include "dynlap/sparse.hpp"

namespace dynlap {

enum class EigenMethod { Auto, Iterative, Dense };

struct SpectralOptions {
  /// Convergence when every residual ‖Au − λu‖₂ (unit u) is ≤ tol·‖A‖∞.
  double tol = 1e-8;
  EigenMethod method = EigenMethod::Auto;
  /// Auto uses the dense solver at or below this size.
  std::size_t dense_limit = 256;
  /// Shift for shift-invert; NaN selects 1e-6·‖A‖∞ (just right of a
  /// nonpositive spectrum).
  double shift = std::numeric_limits<double>::quiet_NaN();
  /// Block size; 0 selects max(2k, k + 12).
  std::size_t subspace = 0;
  std::size_t max_iterations = 300;
  /// Drop the eigenpair aligned with the constant vector.
  bool deflate_constant = false;
  std::uint64_t seed = 20170401;
};

/// Leading eigenpairs, eigenvalues descending. Eigenvectors have unit
/// area-weighted L² norm and their largest-magnitude entry positive.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<double> imaginary_parts;
  std::vector<ScalarField> eigenvectors;
  std::vector<double> residuals;  // ‖Au − λu‖₂ for Euclidean-unit u
  double operator_norm = 0.0;     // ‖A‖∞
  std::size_t iterations = 0;
  EigenMethod method_used = EigenMethod::Dense;

  std::size_t size() const { return eigenvalues.size(); }
  /// Index groups of eigenvalues closer than `gap` to a neighbour.
  std::vector<std::vector<std::size_t>> clusters(double gap = 1e-6) const;
};

/// k eigenpairs of largest real part. Fails with ComplexSpectrum when a returned
/// eigenvalue has |imag| > 1e-6·max(1, |real|), with Convergence when the
/// iteration budget is exhausted.
Spectrum solve_leading(const DiscreteOperator& op, std::size_t k, const SpectralOptions& options = {});

/// ⟨f, A f⟩ / ⟨f, f⟩ with the area-weighted inner product.
double rayleigh_quotient(const DiscreteOperator& op, const ScalarField& f);

/// Sines of the principal angles between span(U) and span(V) (columns),
/// largest first. Both must have the same number of columns.
std::vector<double> principal_angle_sines(const DenseMatrix& U, const DenseMatrix& V);

/// Columns are the eigenvector values for the given indices.
DenseMatrix eigenvector_block(const Spectrum& s, const std::vector<std::size_t>& indices);

}  // namespace dynlap
