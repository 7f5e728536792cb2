#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "dynlap/dynamics.hpp"
#include "dynlap/grid.hpp"
#include "dynlap/transfer.hpp"

namespace dynlap {

/// Polygonal curve in wrapped domain coordinates. `wrap_x[v]` / `wrap_y[v]`
/// count the periods to add to the step from vertex v-1 to vertex v (zero for
/// the first vertex). Closed curves repeat their first vertex at the end.
struct Polyline {
  std::vector<Point> points;
  std::vector<int> wrap_x;
  std::vector<int> wrap_y;
  bool closed = false;

  std::size_t size() const { return points.size(); }
};

struct ContourSet {
  double level = 0.0;
  Domain domain;
  std::vector<Polyline> curves;

  bool empty() const { return curves.empty(); }
  std::size_t vertex_count() const;
};

/// Builds a polyline from raw points, annotating wraps by the minimal-image rule.
Polyline make_polyline(const Domain& domain, const std::vector<Point>& points, bool closed = false);

/// Level curves of the piecewise-linear interpolant on the box-center lattice.
/// Periodic axes are stitched across the seam. Saddle cells are resolved by
/// the average of the four corners. Open curves are continued normally to a
/// non-periodic wall, matching the zero-flux closure of the Laplacian. Empty
/// when `level` is outside the range.
ContourSet marching_squares(const ScalarField& f, double level);

/// Sum of Euclidean segment lengths after applying the wrap annotations.
double curve_length(const ContourSet& c);
double curve_length(const Polyline& p, const Domain& domain);

/// Maps every vertex through `map`, bisecting source segments until adjacent
/// image vertices are at most `max_step` apart (minimal image). A non-positive
/// `max_step` disables refinement.
ContourSet transport_curve(const ContourSet& c, const FlowMap& map, double max_step);

/// Level curve of P̃ f on the image grid at the same level.
ContourSet pushforward_contour(const TransitionMatrix& tm, const ScalarField& f, double level);

/// (box area · #{f > level}, domain area − that).
std::pair<double, double> volumes(const ScalarField& f, double level);

/// Area-weighted lower median.
double weighted_median(const ScalarField& f);

enum class ImageMethod { MapPoints, ContourOfPushforward };

const char* to_string(ImageMethod m);

/// One application of the dynamics: the point map for MapPoints, the Ulam
/// matrix for ContourOfPushforward. Only the member the method needs must be set.
struct ImageStep {
  const FlowMap* map = nullptr;
  const TransitionMatrix* transition = nullptr;
};

struct CoherentSetResult {
  double level = 0.0;
  ContourSet gamma;
  ContourSet gamma_image;  // image under the last step
  double len_gamma = 0.0;
  double len_image = 0.0;  // length of gamma_image
  std::vector<double> image_lengths;
  double vol1 = 0.0;
  double vol2 = 0.0;
  double hD = std::numeric_limits<double>::infinity();
  ImageMethod method_image = ImageMethod::MapPoints;
  std::size_t levels_evaluated = 0;
  double sobolev_bound = std::numeric_limits<double>::quiet_NaN();
  double cheeger_bound = std::numeric_limits<double>::quiet_NaN();
};

struct CheegerOptions {
  std::size_t n_levels = 100;
  ImageMethod method = ImageMethod::MapPoints;
  /// Refinement step for MapPoints; non-positive selects one image box diagonal.
  double max_image_step = 0.0;
  const Grid* image_grid = nullptr;  // used for the default refinement step
};

/// Scans n_levels uniformly spaced levels strictly inside (min f, max f) and
/// returns the level minimizing (ℓ(Γ) + ℓ(TΓ)) / (2 min(vol1, vol2)).
/// Ties go to the level nearest the weighted median of f.
CoherentSetResult optimize_cheeger(const ScalarField& f, const ImageStep& step, const CheegerOptions& opt);

/// Multistep form: Σ_i w_i ℓ(T^(i) Γ) / min(vol1, vol2), with w_0 weighting Γ
/// itself and steps[i] producing T^(i+1) Γ. With one step and w = {1/2, 1/2}
/// this is the single-step ratio.
CoherentSetResult optimize_cheeger(const ScalarField& f, const std::vector<ImageStep>& steps,
                                   const std::vector<double>& weights, const CheegerOptions& opt);

/// Central-difference L¹ gradient norm, area weighted. Non-periodic edges use
/// the mirror closure of the Laplacian (zero normal derivative).
double gradient_l1(const ScalarField& f);

/// (‖∇f‖₁ + ‖∇(P̃ f)‖₁) / (2 ‖f − α‖₁) with α the weighted median.
double sobolev_ratio(const ScalarField& f, const TransitionMatrix& tm);

/// 2 sqrt(−λ₂). Throws InvalidEigenvalue for λ₂ > 1e-9.
double cheeger_upper_bound(double lambda2);

}  // namespace dynlap
