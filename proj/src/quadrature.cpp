#include "dynlap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dynlap/error.hpp"

namespace dynlap {

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre needs n >= 1");
  QuadratureRule q;
  if (n == 1) return {{0.5 * (a + b)}, {b - a}};
  q.nodes.resize(n);
  q.weights.resize(n);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      dp = nd * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = -x;
    q.nodes[n - 1 - i] = x;
    q.weights[i] = w;
    q.weights[n - 1 - i] = w;
  }
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < n; ++i) {
    q.nodes[i] = mid + half * q.nodes[i];
    q.weights[i] *= half;
  }
  return q;
}

double disc_rectangle_area(double x0, double x1, double y0, double y1, double r) {
  const double a = std::max(x0, -r), b = std::min(x1, r);
  if (!(b > a) || !(y1 > y0)) return 0.0;
  // antiderivative of sqrt(r^2 - x^2)
  auto G = [r](double x) {
    const double xc = std::clamp(x, -r, r);
    return 0.5 * (xc * std::sqrt(std::max(0.0, r * r - xc * xc)) + r * r * std::asin(xc / r));
  };
  std::vector<double> cuts{a, b};
  for (double y : {y0, y1}) {
    if (std::abs(y) < r) {
      const double s = std::sqrt(r * r - y * y);
      for (double c : {-s, s})
        if (c > a && c < b) cuts.push_back(c);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double u = cuts[k], v = cuts[k + 1];
    if (!(v > u)) continue;
    const double m = 0.5 * (u + v);
    const double s = std::sqrt(std::max(0.0, r * r - m * m));
    const bool upper_is_arc = s < y1;
    const bool lower_is_arc = -s > y0;
    const double upper_mid = upper_is_arc ? s : y1;
    const double lower_mid = lower_is_arc ? -s : y0;
    if (upper_mid <= lower_mid) continue;
    const double arc = G(v) - G(u);
    const double upper = upper_is_arc ? arc : y1 * (v - u);
    const double lower = lower_is_arc ? -arc : y0 * (v - u);
    area += upper - lower;
  }
  return area;
}

}  // namespace dynlap
