#include "dynlap/dynamics.hpp"

#include <algorithm>
#include <numbers>
#include <random>
#include <sstream>

namespace dynlap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double settle_axis(double v, double lo, double hi, bool periodic, ErrorKind kind, char name) {
  if (periodic) return v;
  if (v >= lo && v <= hi) return v;
  if (v < lo && lo - v <= kBoundaryClampTolerance) return lo;
  if (v > hi && v - hi <= kBoundaryClampTolerance) return hi;
  std::ostringstream msg;
  msg.precision(17);
  msg << "image " << name << "=" << v << " leaves [" << lo << ", " << hi << "]";
  throw Error(kind, msg.str());
}

std::string format_double(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

FlowMap::FlowMap(std::string fingerprint, Domain source, Domain image, PointMap map,
                 ErrorKind escape_kind)
    : fingerprint_(std::move(fingerprint)),
      source_(source),
      image_(image),
      map_(std::move(map)),
      escape_kind_(escape_kind) {
  source_.validate();
  image_.validate();
}

Point FlowMap::operator()(Point p) const {
  Point q = map_(p);
  if (!std::isfinite(q.x) || !std::isfinite(q.y)) {
    throw Error(ErrorKind::NumericalBlowup, "flow map produced a non-finite point");
  }
  q.x = settle_axis(q.x, image_.x_min, image_.x_max, image_.periodic_x, escape_kind_, 'x');
  q.y = settle_axis(q.y, image_.y_min, image_.y_max, image_.periodic_y, escape_kind_, 'y');
  return image_.wrap(q);
}

FlowMap FlowMap::after(const FlowMap& inner) const {
  if (!(inner.image() == source_)) {
    throw Error(ErrorKind::Composition,
                "image domain of '" + inner.fingerprint() + "' differs from source of '" + fingerprint_ + "'");
  }
  FlowMap outer = *this;
  return FlowMap(fingerprint_ + "∘" + inner.fingerprint(), inner.source(), image_,
                 [outer, inner](Point p) { return outer(inner(p)); }, escape_kind_);
}

void OdeFlowSpec::validate() const {
  if (!field) throw Error(ErrorKind::Configuration, "ODE flow needs a vector field");
  if (!(t_end > t_start)) throw Error(ErrorKind::Configuration, "ODE flow needs t_end > t_start");
  if (!(step_size > 0.0)) throw Error(ErrorKind::Configuration, "ODE step size must be positive");
}

FlowMap identity_map(const Domain& domain) {
  return FlowMap("identity", domain, domain, [](Point p) { return p; });
}

FlowMap translation_map(const Domain& domain, double dx, double dy) {
  return FlowMap("translate(" + format_double(dx) + "," + format_double(dy) + ")", domain, domain,
                 [dx, dy](Point p) { return Point{p.x + dx, p.y + dy}; });
}

Domain shear_domain() { return Domain::cylinder_x(4.0, 1.0); }

FlowMap builtin_shear() {
  return FlowMap("shear", shear_domain(), shear_domain(), [](Point p) { return Point{p.x + p.y, p.y}; });
}

Domain standard_map_domain() { return Domain::torus(kTwoPi, kTwoPi); }

FlowMap builtin_standard_map() {
  return FlowMap("standard", standard_map_domain(), standard_map_domain(), [](Point p) {
    const double xn = p.x + p.y;
    return Point{xn, p.y + 8.0 * std::sin(xn)};
  });
}

FlowMap builtin_torus_shear() {
  return FlowMap("torus-shear", standard_map_domain(), standard_map_domain(),
                 [](Point p) { return Point{p.x + p.y, p.y}; });
}

Domain transitory_domain() { return Domain::rectangle(1.0, 1.0); }

double transitory_switch(double t) { return t * t * (3.0 - 2.0 * t); }

FlowMap builtin_transitory_flow(double step_size, bool printed_sign) {
  return builtin_transitory_segment(0.0, 1.0, step_size, printed_sign);
}

FlowMap builtin_transitory_segment(double t0, double t1, double step_size, bool printed_sign) {
  if (!(step_size > 0.0)) throw Error(ErrorKind::Configuration, "RK4 step must be positive");
  if (!(t1 >= t0)) throw Error(ErrorKind::Configuration, "transitory segment needs t1 >= t0");
  std::string name = "transitory(h=" + format_double(step_size) + (printed_sign ? ",printed-sign" : "");
  if (t0 != 0.0 || t1 != 1.0) name += ",t=" + format_double(t0) + ".." + format_double(t1);
  name += ")";
  return FlowMap(
      std::move(name), transitory_domain(), transitory_domain(),
      [t0, t1, step_size, printed_sign](Point p) {
        auto field = [printed_sign](double x, double y, double t) {
          return transitory_velocity(x, y, t, printed_sign);
        };
        return integrate_rk4(field, p, t0, t1, step_size);
      },
      ErrorKind::IntegrationConsistency);
}

FlowMap ode_flow_map(const OdeFlowSpec& spec, const Domain& domain) {
  spec.validate();
  std::string name = "ode(" + spec.field_name + ";" + format_double(spec.t_start) + "," +
                     format_double(spec.t_end) + ",h=" + format_double(spec.step_size) + ")";
  return FlowMap(
      std::move(name), domain, domain,
      [spec](Point p) { return integrate_rk4(spec.field, p, spec.t_start, spec.t_end, spec.step_size); },
      ErrorKind::IntegrationConsistency);
}

VectorField expression_field(const std::string& xdot, const std::string& ydot) {
  Expression fx(xdot);
  Expression fy(ydot);
  return [fx, fy](double x, double y, double t) { return Point{fx(x, y, t), fy(x, y, t)}; };
}

std::vector<FlowMap> compose(const std::vector<FlowMap>& maps) {
  std::vector<FlowMap> out;
  out.reserve(maps.size());
  for (const FlowMap& m : maps) {
    if (out.empty()) {
      out.push_back(m);
    } else {
      out.push_back(m.after(out.back()));
    }
  }
  return out;
}

VolumeCheck volume_preservation_check(const FlowMap& map, const Grid& image_grid, std::size_t samples,
                                      std::uint64_t seed, double z_threshold) {
  if (samples == 0) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
  if (!(image_grid.domain() == map.image())) {
    throw Error(ErrorKind::Dimension, "histogram grid must cover the image domain");
  }
  const Domain& src = map.source();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(src.x_min, src.x_max);
  std::uniform_real_distribution<double> uy(src.y_min, src.y_max);
  std::vector<std::size_t> counts(image_grid.size(), 0);
  for (std::size_t s = 0; s < samples; ++s) {
    const Point p{ux(rng), uy(rng)};
    ++counts[image_grid.box_index_of(map(p))];
  }
  // image and source have equal area for volume-preserving maps
  const double prob = 1.0 / static_cast<double>(image_grid.size());
  const double mean = static_cast<double>(samples) * prob;
  const double sigma = std::sqrt(static_cast<double>(samples) * prob * (1.0 - prob));
  VolumeCheck out;
  out.samples = samples;
  for (std::size_t c : counts) {
    const double z = sigma > 0.0 ? std::abs(static_cast<double>(c) - mean) / sigma : 0.0;
    out.max_abs_z = std::max(out.max_abs_z, z);
  }
  out.passed = out.max_abs_z <= z_threshold;
  return out;
}

}  // namespace dynlap
