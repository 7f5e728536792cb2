#include "dynlap/difflimit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dynlap/laplacian.hpp"
#include "dynlap/quadrature.hpp"

namespace dynlap {

const char* to_string(KernelProfile p) {
  return p == KernelProfile::UniformBall ? "uniform_ball" : "truncated_quartic";
}

KernelProfile kernel_profile_from_string(const std::string& s) {
  if (s == "uniform_ball") return KernelProfile::UniformBall;
  if (s == "truncated_quartic") return KernelProfile::TruncatedQuartic;
  throw Error(ErrorKind::Configuration, "unknown kernel profile '" + s + "'");
}

double SmoothingKernel::unit_density(double r) const {
  if (r >= 1.0) return 0.0;
  if (profile == KernelProfile::UniformBall) return 1.0 / std::numbers::pi;
  const double u = 1.0 - r * r;
  return 3.0 / std::numbers::pi * u * u;
}

double SmoothingKernel::density(double x, double y) const {
  return unit_density(std::hypot(x, y) / eps) / (eps * eps);
}

SmoothingKernel make_kernel(KernelProfile profile, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "kernel radius must be positive");
  SmoothingKernel k{profile, eps, 0.25};
  if (profile == KernelProfile::TruncatedQuartic) {
    // c = ∫ x² q = π ∫_0^1 r³ q(r) dr for a radial unit-scale profile
    const QuadratureRule rule = gauss_legendre(24, 0.0, 1.0);
    double c = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double r = rule.nodes[i];
      c += rule.weights[i] * r * r * r * k.unit_density(r);
    }
    k.c = std::numbers::pi * c;
  }
  return k;
}

std::vector<double> kernel_moments(const SmoothingKernel& k, std::size_t resolution) {
  // polar tensor rule: Gauss–Legendre in r (exact for the polynomial profiles)
  // and the periodic trapezoid rule in θ
  const QuadratureRule radial = gauss_legendre(std::max<std::size_t>(8, resolution / 100), 0.0, k.eps);
  const std::size_t nt = std::max<std::size_t>(16, resolution);
  std::vector<double> m(6, 0.0);
  const double dt = 2.0 * std::numbers::pi / static_cast<double>(nt);
  for (std::size_t ti = 0; ti < nt; ++ti) {
    const double th = dt * static_cast<double>(ti);
    const double ct = std::cos(th), st = std::sin(th);
    for (std::size_t ri = 0; ri < radial.nodes.size(); ++ri) {
      const double r = radial.nodes[ri];
      const double w = radial.weights[ri] * dt * r * k.density(r * ct, r * st);
      const double x = r * ct, y = r * st;
      m[0] += w;
      m[1] += w * x;
      m[2] += w * y;
      m[3] += w * x * x;
      m[4] += w * x * y;
      m[5] += w * y * y;
    }
  }
  return m;
}

namespace {

// Placing box integrals at box centers biases the stencil's second moment by
// O(h²), which swamps the O(ε²) signal of the limit check at small ε. A
// quadratic tilt w·(1 + βx(x² − μx) + βy(y² − μy)) keeps the mass, the
// symmetry and (for small β) the sign, and restores Σ w x² = Σ w y² = target.
void match_second_moments(SmoothingStencil& s, double bw, double bh, double target) {
  double mx = 0.0, my = 0.0;
  for (int b = -s.ry; b <= s.ry; ++b)
    for (int a = -s.rx; a <= s.rx; ++a) {
      const double w = s.at(a, b), x2 = a * a * bw * bw, y2 = b * b * bh * bh;
      mx += w * x2;
      my += w * y2;
    }
  double vxx = 0.0, vyy = 0.0, vxy = 0.0;
  for (int b = -s.ry; b <= s.ry; ++b)
    for (int a = -s.rx; a <= s.rx; ++a) {
      const double w = s.at(a, b), dx = a * a * bw * bw - mx, dy = b * b * bh * bh - my;
      vxx += w * dx * dx;
      vyy += w * dy * dy;
      vxy += w * dx * dy;
    }
  const double det = vxx * vyy - vxy * vxy;
  if (!(std::abs(det) > 0.0)) return;
  const double rx = target - mx, ry = target - my;
  const double beta_x = (rx * vyy - ry * vxy) / det;
  const double beta_y = (ry * vxx - rx * vxy) / det;
  for (int b = -s.ry; b <= s.ry; ++b)
    for (int a = -s.rx; a <= s.rx; ++a) {
      double& w = s.weights[static_cast<std::size_t>((b + s.ry) * (2 * s.rx + 1) + (a + s.rx))];
      w *= 1.0 + beta_x * (a * a * bw * bw - mx) + beta_y * (b * b * bh * bh - my);
    }
}

}  // namespace

SmoothingStencil make_stencil(const SmoothingKernel& k, const Grid& grid) {
  const double bw = grid.box_width(), bh = grid.box_height();
  if (k.eps < 2.0 * std::max(bw, bh) * (1.0 - 1e-12)) {
    throw Error(ErrorKind::UnderResolvedKernel,
                "eps=" + std::to_string(k.eps) + " is below two box widths (" + std::to_string(2.0 * std::max(bw, bh)) +
                    ")");
  }
  SmoothingStencil s;
  s.rx = static_cast<int>(std::ceil(k.eps / bw + 0.5));
  s.ry = static_cast<int>(std::ceil(k.eps / bh + 0.5));
  const auto wx = static_cast<std::size_t>(2 * s.rx + 1);
  s.weights.assign(wx * static_cast<std::size_t>(2 * s.ry + 1), 0.0);
  const QuadratureRule gl = gauss_legendre(6);
  constexpr int kSub = 4;
  auto box_integral = [&](int a, int b) {
    const double x0 = (a - 0.5) * bw, x1 = (a + 0.5) * bw;
    const double y0 = (b - 0.5) * bh, y1 = (b + 0.5) * bh;
    if (k.profile == KernelProfile::UniformBall) {
      return disc_rectangle_area(x0, x1, y0, y1, k.eps) / (std::numbers::pi * k.eps * k.eps);
    }
    double acc = 0.0;
    const double sx = (x1 - x0) / kSub, sy = (y1 - y0) / kSub;
    for (int u = 0; u < kSub; ++u)
      for (int v = 0; v < kSub; ++v)
        for (std::size_t p = 0; p < gl.nodes.size(); ++p)
          for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
            const double x = x0 + sx * (u + 0.5 + 0.5 * gl.nodes[p]);
            const double y = y0 + sy * (v + 0.5 + 0.5 * gl.nodes[q]);
            acc += 0.25 * sx * sy * gl.weights[p] * gl.weights[q] * k.density(x, y);
          }
    return acc;
  };
  // evaluate one quadrant and mirror so the stencil is exactly symmetric
  double total = 0.0;
  for (int b = 0; b <= s.ry; ++b) {
    for (int a = 0; a <= s.rx; ++a) {
      const double w = box_integral(a, b);
      for (int sb : {b, -b})
        for (int sa : {a, -a}) {
          s.weights[static_cast<std::size_t>((sb + s.ry) * (2 * s.rx + 1) + (sa + s.rx))] = w;
        }
    }
  }
  for (double w : s.weights) total += w;
  for (double& w : s.weights) w /= total;
  match_second_moments(s, bw, bh, k.c * k.eps * k.eps);
  return s;
}

std::vector<bool> interior_mask(const Grid& grid, double eps) {
  const Domain& d = grid.domain();
  std::vector<bool> mask(grid.size(), true);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Point c = grid.center(k);
    bool ok = true;
    if (!d.periodic_x) ok = ok && (c.x - d.x_min >= eps) && (d.x_max - c.x >= eps);
    if (!d.periodic_y) ok = ok && (c.y - d.y_min >= eps) && (d.y_max - c.y >= eps);
    mask[k] = ok;
  }
  return mask;
}

namespace {

double convolve_at(const SmoothingStencil& s, const ScalarField& f, std::size_t i, std::size_t j) {
  const Grid& g = f.grid;
  const auto nx = static_cast<long>(g.nx()), ny = static_cast<long>(g.ny());
  double acc = 0.0;
  for (int b = -s.ry; b <= s.ry; ++b) {
    const long jj = ((static_cast<long>(j) + b) % ny + ny) % ny;
    const double* wrow = &s.weights[static_cast<std::size_t>((b + s.ry) * (2 * s.rx + 1))];
    for (int a = -s.rx; a <= s.rx; ++a) {
      const long ii = ((static_cast<long>(i) + a) % nx + nx) % nx;
      acc += wrow[a + s.rx] * f[static_cast<std::size_t>(jj * nx + ii)];
    }
  }
  return acc;
}

// Boxes whose nonzero stencil entries all land inside the grid along
// non-periodic axes. Empty on a torus (every box qualifies).
std::vector<bool> stencil_mask(const SmoothingStencil& s, const Grid& g) {
  const Domain& d = g.domain();
  if (d.is_torus()) return {};
  long ex = 0, ey = 0;
  for (int b = -s.ry; b <= s.ry; ++b)
    for (int a = -s.rx; a <= s.rx; ++a)
      if (s.at(a, b) != 0.0) {
        ex = std::max<long>(ex, std::abs(a));
        ey = std::max<long>(ey, std::abs(b));
      }
  const auto nx = static_cast<long>(g.nx()), ny = static_cast<long>(g.ny());
  std::vector<bool> mask(g.size(), true);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto i = static_cast<long>(k % g.nx()), j = static_cast<long>(k / g.nx());
    if (!d.periodic_x && (i < ex || i >= nx - ex)) mask[k] = false;
    if (!d.periodic_y && (j < ey || j >= ny - ey)) mask[k] = false;
  }
  return mask;
}

}  // namespace

ScalarField apply_smoothing(const SmoothingStencil& s, const ScalarField& f) {
  const Grid& g = f.grid;
  ScalarField out = f;
  const std::vector<bool> mask = stencil_mask(s, g);
  const auto n = static_cast<long>(g.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (!mask.empty() && !mask[kk]) continue;
    out[kk] = convolve_at(s, f, kk % g.nx(), kk / g.nx());
  }
  return out;
}

ScalarField apply_smoothing_serial(const SmoothingStencil& s, const ScalarField& f) {
  const Grid& g = f.grid;
  ScalarField out = f;
  const std::vector<bool> mask = stencil_mask(s, g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!mask.empty() && !mask[k]) continue;
    out[k] = convolve_at(s, f, k % g.nx(), k / g.nx());
  }
  return out;
}

ScalarField apply_smoothing(const SmoothingKernel& k, const ScalarField& f) {
  const SmoothingStencil s = make_stencil(k, f.grid);
  if (f.grid.domain().is_torus()) return apply_smoothing(s, f);
  // restrict to boxes whose kernel support stays inside the domain
  const std::vector<bool> mask = interior_mask(f.grid, k.eps);
  ScalarField out = f;
  const auto n = static_cast<long>(f.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const auto kk = static_cast<std::size_t>(i);
    if (mask[kk]) out[kk] = convolve_at(s, f, kk % f.grid.nx(), kk / f.grid.nx());
  }
  return out;
}

DenseMatrix smoothing_matrix(const SmoothingKernel& k, const Grid& grid) {
  const SmoothingStencil s = make_stencil(k, grid);
  const auto n = static_cast<Eigen::Index>(grid.size());
  DenseMatrix D = DenseMatrix::Zero(n, n);
  ScalarField e(grid);
  for (Eigen::Index c = 0; c < n; ++c) {
    e[static_cast<std::size_t>(c)] = 1.0;
    const ScalarField col = apply_smoothing(k, e);
    for (Eigen::Index r = 0; r < n; ++r) D(r, c) = col[static_cast<std::size_t>(r)];
    e[static_cast<std::size_t>(c)] = 0.0;
  }
  return D;
}

LimitReport verify_limit(const Grid& grid, const SparseMatrix& transfer, KernelProfile profile, double c,
                         const ScalarField& f, const std::vector<double>& eps_list, double order_threshold) {
  if (!grid.domain().is_torus()) {
    throw Error(ErrorKind::Configuration, "zero-diffusion limit check needs a fully periodic domain");
  }
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (transfer.rows() != n || transfer.cols() != n || !(f.grid == grid)) {
    throw Error(ErrorKind::Dimension, "transfer matrix and field must live on the grid");
  }
  if (eps_list.empty()) throw Error(ErrorKind::Configuration, "need at least one eps");

  const SparseMatrix Pt = transfer;
  const SparseMatrix PtT = transfer.transpose();
  const SparseMatrix lap = assemble_laplacian(grid).matrix;
  auto as_vec = [](const ScalarField& s) {
    return Vector(Eigen::Map<const Vector>(s.values.data(), static_cast<Eigen::Index>(s.size())));
  };
  auto as_field = [&](const Vector& v) { return ScalarField(grid, std::vector<double>(v.data(), v.data() + v.size())); };

  const Vector fv = as_vec(f);
  const Vector target = c * (lap * fv + PtT * (lap * (Pt * fv)));

  LimitReport rep;
  rep.order_threshold = order_threshold;
  for (double eps : eps_list) {
    const SmoothingStencil s = make_stencil(make_kernel(profile, eps), grid);
    auto D = [&](const Vector& v) { return as_vec(apply_smoothing(s, as_field(v))); };
    Vector g = D(fv);
    g = Pt * g;
    g = D(g);
    g = D(g);
    g = PtT * g;
    g = D(g);
    const Vector diff = (g - fv) / (eps * eps) - target;
    LimitSample sample;
    sample.eps = eps;
    sample.residual = diff.cwiseAbs().maxCoeff();
    if (!rep.samples.empty()) {
      const LimitSample& prev = rep.samples.back();
      sample.ratio = prev.residual / sample.residual;
      sample.order = std::log(sample.ratio) / std::log(prev.eps / eps);
    }
    rep.samples.push_back(sample);
  }
  rep.strictly_decreasing = true;
  double order_sum = 0.0;
  for (std::size_t i = 1; i < rep.samples.size(); ++i) {
    rep.strictly_decreasing = rep.strictly_decreasing && rep.samples[i].residual < rep.samples[i - 1].residual;
    order_sum += rep.samples[i].order;
  }
  rep.mean_order = rep.samples.size() > 1 ? order_sum / static_cast<double>(rep.samples.size() - 1) : 0.0;
  rep.passed = rep.samples.size() > 1 && rep.strictly_decreasing && rep.mean_order >= order_threshold;
  return rep;
}

}  // namespace dynlap
