#include "dynlap/grid.hpp"

#include <cmath>
#include <sstream>

namespace dynlap {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::GridTooCoarse: return "grid-too-coarse";
    case ErrorKind::IntegrationConsistency: return "integration-consistency";
    case ErrorKind::NumericalBlowup: return "numerical-blowup";
    case ErrorKind::Composition: return "composition";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::ComplexSpectrum: return "complex-spectrum";
    case ErrorKind::DegenerateInput: return "degenerate-input";
    case ErrorKind::DegenerateField: return "degenerate-field";
    case ErrorKind::InvalidEigenvalue: return "invalid-eigenvalue";
    case ErrorKind::UnderResolvedKernel: return "under-resolved-kernel";
    case ErrorKind::UnsupportedIsometry: return "unsupported-isometry";
    case ErrorKind::Transport: return "transport";
    case ErrorKind::Io: return "io";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Render: return "render";
  }
  return "unknown";
}

namespace {

double wrap_coord(double v, double lo, double hi) {
  const double len = hi - lo;
  double r = std::fmod(v - lo, len);
  if (r < 0.0) r += len;
  // fmod of a tiny negative value can round up to exactly len
  if (r >= len) r = 0.0;
  return lo + r;
}

double minimal_image(double d, double len) {
  return d - len * std::round(d / len);
}

}  // namespace

void Domain::validate() const {
  if (!(x_max > x_min) || !(y_max > y_min) || !std::isfinite(x_min) || !std::isfinite(x_max) ||
      !std::isfinite(y_min) || !std::isfinite(y_max)) {
    throw Error(ErrorKind::InvalidArgument, "domain requires x_max > x_min and y_max > y_min");
  }
}

Point Domain::wrap(Point p) const {
  if (periodic_x) p.x = wrap_coord(p.x, x_min, x_max);
  if (periodic_y) p.y = wrap_coord(p.y, y_min, y_max);
  return p;
}

Point Domain::displacement(Point a, Point b) const {
  Point d{b.x - a.x, b.y - a.y};
  if (periodic_x) d.x = minimal_image(d.x, width());
  if (periodic_y) d.y = minimal_image(d.y, height());
  return d;
}

Domain Domain::rectangle(double width, double height) { return {0.0, width, 0.0, height, false, false}; }
Domain Domain::cylinder_x(double width, double height) { return {0.0, width, 0.0, height, true, false}; }
Domain Domain::torus(double width, double height) { return {0.0, width, 0.0, height, true, true}; }

Grid::Grid(Domain domain, std::size_t nx, std::size_t ny) : domain_(domain), nx_(nx), ny_(ny) {
  domain_.validate();
  if (nx == 0 || ny == 0) throw Error(ErrorKind::InvalidArgument, "grid needs nx, ny >= 1");
  box_width_ = domain_.width() / static_cast<double>(nx_);
  box_height_ = domain_.height() / static_cast<double>(ny_);
}

double Grid::box_diagonal() const { return std::hypot(box_width_, box_height_); }

Point Grid::center(std::size_t k) const { return center(k % nx_, k / nx_); }

Point Grid::center(std::size_t i, std::size_t j) const {
  return {domain_.x_min + (static_cast<double>(i) + 0.5) * box_width_,
          domain_.y_min + (static_cast<double>(j) + 0.5) * box_height_};
}

BoxIndex Grid::box_of(Point p) const {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw Error(ErrorKind::OutOfDomain, "non-finite point");
  }
  const Point w = domain_.wrap(p);
  auto axis = [](double v, double lo, double hi, double width, std::size_t n, bool periodic,
                 char name) -> std::size_t {
    if (!periodic && (v < lo || v > hi)) {
      std::ostringstream msg;
      msg << name << "=" << v << " outside [" << lo << ", " << hi << "]";
      throw Error(ErrorKind::OutOfDomain, msg.str());
    }
    const double s = std::floor((v - lo) / width);
    if (s <= 0.0) return 0;
    const auto idx = static_cast<std::size_t>(s);
    return idx >= n ? n - 1 : idx;
  };
  return {axis(w.x, domain_.x_min, domain_.x_max, box_width_, nx_, domain_.periodic_x, 'x'),
          axis(w.y, domain_.y_min, domain_.y_max, box_height_, ny_, domain_.periodic_y, 'y')};
}

std::vector<Point> Grid::intra_box_points(std::size_t k, std::size_t q_per_axis) const {
  if (q_per_axis == 0) throw Error(ErrorKind::InvalidArgument, "q_per_axis must be >= 1");
  const auto [i, j] = box(k);
  const double x0 = domain_.x_min + static_cast<double>(i) * box_width_;
  const double y0 = domain_.y_min + static_cast<double>(j) * box_height_;
  const double q = static_cast<double>(q_per_axis);
  std::vector<Point> pts;
  pts.reserve(q_per_axis * q_per_axis);
  for (std::size_t b = 0; b < q_per_axis; ++b) {
    const double y = y0 + (static_cast<double>(b) + 0.5) / q * box_height_;
    for (std::size_t a = 0; a < q_per_axis; ++a) {
      pts.push_back({x0 + (static_cast<double>(a) + 0.5) / q * box_width_, y});
    }
  }
  return pts;
}

ScalarField::ScalarField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw Error(ErrorKind::Dimension, "field length does not match grid size");
  }
}

ScalarField::ScalarField(const Grid& g, double fill) : grid(g), values(g.size(), fill) {}

}  // namespace dynlap
