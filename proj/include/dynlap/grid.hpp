#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dynlap/error.hpp"

namespace dynlap {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Flat rectangular 2D domain with optional periodic identification per axis.
/// Both periodic: torus. Exactly one: cylinder. None: rectangle.
struct Domain {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  bool periodic_x = false;
  bool periodic_y = false;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }

  bool is_torus() const { return periodic_x && periodic_y; }
  bool is_cylinder() const { return periodic_x != periodic_y; }
  bool is_rectangle() const { return !periodic_x && !periodic_y; }

  void validate() const;

  /// Wraps periodic coordinates into [min, max). Non-periodic coordinates are untouched.
  Point wrap(Point p) const;

  /// Minimal-image displacement from `a` to `b` along periodic axes.
  Point displacement(Point a, Point b) const;

  friend bool operator==(const Domain&, const Domain&) = default;

  static Domain rectangle(double width, double height);
  static Domain cylinder_x(double width, double height);
  static Domain torus(double width, double height);
};

struct BoxIndex {
  std::size_t i = 0;  // column, along x
  std::size_t j = 0;  // row, along y

  friend bool operator==(const BoxIndex&, const BoxIndex&) = default;
};

/// Uniform nx-by-ny box partition of a Domain. Box k = j * nx + i.
class Grid {
 public:
  Grid(Domain domain, std::size_t nx, std::size_t ny);

  const Domain& domain() const { return domain_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t size() const { return nx_ * ny_; }

  double box_width() const { return box_width_; }
  double box_height() const { return box_height_; }
  double box_area() const { return box_width_ * box_height_; }
  double box_diagonal() const;

  std::size_t index(std::size_t i, std::size_t j) const { return j * nx_ + i; }
  std::size_t index(BoxIndex b) const { return index(b.i, b.j); }
  BoxIndex box(std::size_t k) const { return {k % nx_, k / nx_}; }

  Point center(std::size_t k) const;
  Point center(std::size_t i, std::size_t j) const;

  /// Box containing `p` (half-open boxes; periodic axes wrapped). The closed
  /// upper edge of a non-periodic axis belongs to the last box.
  /// Throws ErrorKind::OutOfDomain when `p` leaves a non-periodic axis.
  BoxIndex box_of(Point p) const;
  std::size_t box_index_of(Point p) const { return index(box_of(p)); }

  /// Q = q_per_axis^2 points on a uniform sub-grid strictly inside box `k`,
  /// offset half a sub-cell from the edges, row-major (x fastest).
  std::vector<Point> intra_box_points(std::size_t k, std::size_t q_per_axis) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.domain_ == b.domain_ && a.nx_ == b.nx_ && a.ny_ == b.ny_;
  }

 private:
  Domain domain_;
  std::size_t nx_;
  std::size_t ny_;
  double box_width_;
  double box_height_;
};

/// One value per grid box, interpreted at box centers.
struct ScalarField {
  ScalarField(const Grid& g, std::vector<double> v);
  explicit ScalarField(const Grid& g, double fill = 0.0);

  Grid grid;
  std::vector<double> values;

  double operator[](std::size_t k) const { return values[k]; }
  double& operator[](std::size_t k) { return values[k]; }
  std::size_t size() const { return values.size(); }

  template <class F>
  static ScalarField sample(const Grid& g, F&& f) {
    ScalarField out(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const Point c = g.center(k);
      out.values[k] = f(c.x, c.y);
    }
    return out;
  }
};

}  // namespace dynlap
