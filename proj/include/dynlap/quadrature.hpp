#pragma once

#include <cstddef>
#include <vector>

namespace dynlap {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss–Legendre rule on [a, b].
QuadratureRule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0);

/// Exact area of [x0,x1] x [y0,y1] intersected with the disc of radius r at the origin.
double disc_rectangle_area(double x0, double x1, double y0, double y1, double r);

}  // namespace dynlap
