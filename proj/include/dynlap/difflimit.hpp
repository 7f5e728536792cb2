#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dynlap/grid.hpp"
#include "dynlap/sparse.hpp"

namespace dynlap {

enum class KernelProfile { UniformBall, TruncatedQuartic };

const char* to_string(KernelProfile p);
KernelProfile kernel_profile_from_string(const std::string& s);

/// Compactly supported radial smoothing kernel q_ε(z) = ε⁻² q(z/ε) in d = 2,
/// with ∫q = 1 and covariance c·I.
struct SmoothingKernel {
  KernelProfile profile = KernelProfile::UniformBall;
  double eps = 0.1;
  double c = 0.25;

  /// Unscaled profile q(z) on the unit ball.
  double unit_density(double r) const;
  /// q_ε(z).
  double density(double x, double y) const;
};

/// Kernel with the covariance constant of its profile: 1/4 for the uniform
/// ball; computed by radial quadrature for the truncated quartic.
SmoothingKernel make_kernel(KernelProfile profile, double eps);

/// Raw moments of q_ε by fine quadrature: {∫q, ∫x q, ∫y q, ∫x² q, ∫xy q, ∫y² q}.
std::vector<double> kernel_moments(const SmoothingKernel& k, std::size_t resolution = 2000);

/// Box-averaged convolution stencil: weight(a, b) = ∫ over the box offset by
/// (a, b) boxes of q_ε, normalized, then tilted quadratically so that the
/// discrete second moments equal c ε² per axis. Symmetric under
/// (a, b) -> (-a, b) and (a, -b).
struct SmoothingStencil {
  int rx = 0;
  int ry = 0;
  std::vector<double> weights;  // (2ry+1) x (2rx+1), row-major in b

  double at(int a, int b) const { return weights[static_cast<std::size_t>((b + ry) * (2 * rx + 1) + (a + rx))]; }
};

/// Throws UnderResolvedKernel when ε is below two box widths.
SmoothingStencil make_stencil(const SmoothingKernel& k, const Grid& grid);

/// D_ε f. On non-periodic axes boxes whose center is closer than ε to the
/// boundary are left unchanged (see `interior_mask`). OpenMP parallel over boxes.
ScalarField apply_smoothing(const SmoothingKernel& k, const ScalarField& f);
/// Stencil form; leaves unchanged the boxes whose nonzero weights would reach
/// past a non-periodic edge.
ScalarField apply_smoothing(const SmoothingStencil& s, const ScalarField& f);

/// Single-threaded reference for apply_smoothing.
ScalarField apply_smoothing_serial(const SmoothingStencil& s, const ScalarField& f);

/// Boxes at distance >= ε from every non-periodic boundary.
std::vector<bool> interior_mask(const Grid& grid, double eps);

/// Dense D_ε matrix (small grids only; used for the self-adjointness check).
DenseMatrix smoothing_matrix(const SmoothingKernel& k, const Grid& grid);

struct LimitSample {
  double eps = 0.0;
  double residual = 0.0;
  double ratio = 0.0;  // residual(previous eps) / residual(this eps); 0 for the first
  double order = 0.0;  // log(ratio) / log(previous eps / eps)
};

struct LimitReport {
  std::vector<LimitSample> samples;
  bool strictly_decreasing = false;
  double mean_order = 0.0;
  double order_threshold = 1.5;
  bool passed = false;
};

/// For each ε: r(ε) = max over boxes of
///   |[(D P̃ D)ᵀ (D P̃ D) f − f] / ε² − c (Δₙ + P̃ᵀ Δₙ P̃) f|.
/// Requires a fully periodic grid and P̃ acting on that grid. The target uses
/// the kernel's `c`, so a deliberately wrong constant exposes a plateau.
LimitReport verify_limit(const Grid& grid, const SparseMatrix& transfer, KernelProfile profile, double c,
                         const ScalarField& f, const std::vector<double>& eps_list, double order_threshold = 1.5);

}  // namespace dynlap
