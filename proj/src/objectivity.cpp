#include <cmath>

#include "dynlap/laplacian.hpp"
#include "dynlap/spectral.hpp"
#include "dynlap/transfer.hpp"

namespace dynlap {

namespace {

std::size_t whole_box_shift(double boxes, std::size_t n, bool periodic, char axis) {
  if (!std::isfinite(boxes) || std::abs(boxes - std::round(boxes)) > 1e-12) {
    throw Error(ErrorKind::UnsupportedIsometry, std::string("shift along ") + axis + " is not a whole number of boxes");
  }
  const auto whole = static_cast<long long>(std::round(boxes));
  if (whole != 0 && !periodic) {
    throw Error(ErrorKind::UnsupportedIsometry, std::string("cannot translate along non-periodic axis ") + axis);
  }
  const auto nn = static_cast<long long>(n);
  return static_cast<std::size_t>(((whole % nn) + nn) % nn);
}

DiscreteOperator dynamic_operator(const Grid& grid, const FlowMap& map, std::size_t q) {
  const DiscreteOperator lap = assemble_laplacian(grid);
  const TransitionMatrix tm = build_ulam(grid, grid, map, q);
  return assemble_dynamic_laplacian(lap, lap, tm.transfer());
}

}  // namespace

ObjectivityReport objectivity_check(const Grid& grid, const FlowMap& map, std::size_t q_per_axis,
                                    double shift_boxes_x, double shift_boxes_y, std::size_t k, double tol) {
  const Domain& d = grid.domain();
  ObjectivityReport rep;
  rep.shift_x = whole_box_shift(shift_boxes_x, grid.nx(), d.periodic_x, 'x');
  rep.shift_y = whole_box_shift(shift_boxes_y, grid.ny(), d.periodic_y, 'y');
  const double dx = static_cast<double>(rep.shift_x) * grid.box_width();
  const double dy = static_cast<double>(rep.shift_y) * grid.box_height();

  const FlowMap shift = translation_map(d, dx, dy);
  const FlowMap unshift = translation_map(d, -dx, -dy);
  const FlowMap changed = shift.after(map.after(unshift));

  SpectralOptions opt;
  opt.tol = tol;
  const Spectrum a = solve_leading(dynamic_operator(grid, map, q_per_axis), k, opt);
  const Spectrum b = solve_leading(dynamic_operator(grid, changed, q_per_axis), k, opt);
  rep.eigenvalues_original = a.eigenvalues;
  rep.eigenvalues_transformed = b.eigenvalues;
  for (std::size_t i = 0; i < k; ++i) {
    rep.max_eigenvalue_discrepancy =
        std::max(rep.max_eigenvalue_discrepancy, std::abs(a.eigenvalues[i] - b.eigenvalues[i]));
  }

  // move the original eigenvectors into the new frame
  Spectrum moved = a;
  for (ScalarField& f : moved.eigenvectors) {
    ScalarField g(grid);
    for (std::size_t j = 0; j < grid.ny(); ++j) {
      for (std::size_t i = 0; i < grid.nx(); ++i) {
        g[grid.index((i + rep.shift_x) % grid.nx(), (j + rep.shift_y) % grid.ny())] = f[grid.index(i, j)];
      }
    }
    f = std::move(g);
  }
  for (const auto& cluster : a.clusters(1e-6)) {
    const auto sines = principal_angle_sines(eigenvector_block(moved, cluster), eigenvector_block(b, cluster));
    rep.max_eigenvector_discrepancy = std::max(rep.max_eigenvector_discrepancy, sines.front());
  }
  return rep;
}

}  // namespace dynlap
