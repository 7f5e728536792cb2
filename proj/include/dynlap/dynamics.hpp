#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dynlap/error.hpp"
#include "dynlap/expression.hpp"
#include "dynlap/grid.hpp"

namespace dynlap {

/// Time-dependent planar vector field (x, y, t) -> (xdot, ydot).
using VectorField = std::function<Point(double, double, double)>;
using PointMap = std::function<Point(Point)>;

/// Points that leave a non-periodic axis by at most this much are clamped back.
inline constexpr double kBoundaryClampTolerance = 1e-9;

/// A point transformation T from a source domain into an image domain.
///
/// The raw map may return coordinates outside the image domain; `operator()`
/// wraps periodic axes and clamps excursions up to kBoundaryClampTolerance on
/// non-periodic axes. Larger excursions throw `escape_kind()`.
class FlowMap {
 public:
  FlowMap(std::string fingerprint, Domain source, Domain image, PointMap map,
          ErrorKind escape_kind = ErrorKind::OutOfDomain);

  Point operator()(Point p) const;
  Point raw(Point p) const { return map_(p); }

  const Domain& source() const { return source_; }
  const Domain& image() const { return image_; }
  const std::string& fingerprint() const { return fingerprint_; }
  ErrorKind escape_kind() const { return escape_kind_; }

  /// this ∘ inner (inner applied first).
  FlowMap after(const FlowMap& inner) const;

 private:
  std::string fingerprint_;
  Domain source_;
  Domain image_;
  PointMap map_;
  ErrorKind escape_kind_;
};

/// Classical fixed-step RK4 from t0 to t1; the last step is shortened to land
/// exactly on t1. Throws NumericalBlowup on non-finite state.
template <class Field>
Point integrate_rk4(const Field& field, Point p, double t0, double t1, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "RK4 step must be positive");
  if (t1 == t0) return p;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  const auto steps = static_cast<long>(std::ceil(span / h - 1e-12));
  double t = t0;
  double x = p.x;
  double y = p.y;
  for (long s = 0; s < steps; ++s) {
    const double t_next = (s + 1 == steps) ? t1 : t0 + dir * static_cast<double>(s + 1) * h;
    const double dt = t_next - t;
    const Point k1 = field(x, y, t);
    const Point k2 = field(x + 0.5 * dt * k1.x, y + 0.5 * dt * k1.y, t + 0.5 * dt);
    const Point k3 = field(x + 0.5 * dt * k2.x, y + 0.5 * dt * k2.y, t + 0.5 * dt);
    const Point k4 = field(x + dt * k3.x, y + dt * k3.y, t_next);
    x += dt / 6.0 * (k1.x + 2.0 * (k2.x + k3.x) + k4.x);
    y += dt / 6.0 * (k1.y + 2.0 * (k2.y + k3.y) + k4.y);
    t = t_next;
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw Error(ErrorKind::NumericalBlowup, "non-finite state at t=" + std::to_string(t));
    }
  }
  return {x, y};
}

/// Description of the time-dependent ODE flow x' = F(x, t) on [t_start, t_end].
struct OdeFlowSpec {
  VectorField field;
  std::string field_name;
  double t_start = 0.0;
  double t_end = 1.0;
  double step_size = 0.01;

  void validate() const;
};

FlowMap identity_map(const Domain& domain);
/// Rigid translation (x + dx, y + dy); only meaningful on periodic axes.
FlowMap translation_map(const Domain& domain, double dx, double dy);

/// (x, y) -> ((x + y) mod 4, y) on the cylinder [0,4) x [0,1].
FlowMap builtin_shear();
Domain shear_domain();

/// (x, y) -> ((x + y), (y + 8 sin(x + y))) mod 2π on the torus [0,2π)^2.
FlowMap builtin_standard_map();
Domain standard_map_domain();

/// (x, y) -> ((x + y) mod 2π, y) on the torus [0,2π)^2.
FlowMap builtin_torus_shear();

/// Time-[0,1] map of the transitory double-gyre flow on the unit square.
FlowMap builtin_transitory_flow(double step_size = 0.01, bool printed_sign = false);
/// Flow of the same field from t0 to t1 (0 <= t0 <= t1 <= 1 for the built-in window).
FlowMap builtin_transitory_segment(double t0, double t1, double step_size = 0.01, bool printed_sign = false);
Domain transitory_domain();

/// Switching function t^2 (3 - 2t).
double transitory_switch(double t);

/// Velocity (-dΨ/dy, +dΨ/dx) of the transitory stream function. With
/// printed_sign the second component is -dΨ/dx (not divergence free).
inline Point transitory_velocity(double x, double y, double t, bool printed_sign = false) {
  constexpr double pi = 3.14159265358979323846;
  const double s = t * t * (3.0 - 2.0 * t);
  const double sx = std::sin(pi * x), cx = std::cos(pi * x);
  const double sy = std::sin(pi * y), cy = std::cos(pi * y);
  const double s2x = 2.0 * sx * cx, c2x = cx * cx - sx * sx;
  const double s2y = 2.0 * sy * cy, c2y = cy * cy - sy * sy;
  const double psi_x = (1.0 - s) * 2.0 * pi * c2x * sy + s * pi * cx * s2y;
  const double psi_y = (1.0 - s) * pi * s2x * cy + s * 2.0 * pi * sx * c2y;
  return {-psi_y, printed_sign ? -psi_x : psi_x};
}

/// Flow map of a user ODE over its integration window on `domain`.
FlowMap ode_flow_map(const OdeFlowSpec& spec, const Domain& domain);

/// Vector field from two expressions in x, y, t.
VectorField expression_field(const std::string& xdot, const std::string& ydot);

/// Partial compositions T_1, T_2∘T_1, ..., T_{n-1}∘...∘T_1.
std::vector<FlowMap> compose(const std::vector<FlowMap>& maps);

struct VolumeCheck {
  std::size_t samples = 0;
  double max_abs_z = 0.0;  // worst per-box deviation in multinomial standard deviations
  bool passed = false;
};

/// Pushes `samples` uniformly distributed points through `map`, histograms
/// the images on `image_grid`, and compares per-box counts with the uniform
/// multinomial expectation (pass when every |z| <= z_threshold).
VolumeCheck volume_preservation_check(const FlowMap& map, const Grid& image_grid,
                                      std::size_t samples, std::uint64_t seed = 12345,
                                      double z_threshold = 5.0);

}  // namespace dynlap
