#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "dynlap/coherent.hpp"

namespace dynlap {

const char* to_string(ImageMethod m) {
  return m == ImageMethod::MapPoints ? "map_points" : "contour_of_pushforward";
}

std::pair<double, double> volumes(const ScalarField& f, double level) {
  const std::size_t count =
      static_cast<std::size_t>(std::count_if(f.values.begin(), f.values.end(), [level](double v) { return v > level; }));
  const double vol1 = f.grid.box_area() * static_cast<double>(count);
  return {vol1, f.grid.domain().area() - vol1};
}

double weighted_median(const ScalarField& f) {
  if (f.values.empty()) throw Error(ErrorKind::DegenerateInput, "median of an empty field");
  // equal box areas: the weighted lower median is the plain lower median
  std::vector<double> v = f.values;
  const std::size_t mid = (v.size() - 1) / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  return v[mid];
}

namespace {

struct LevelEval {
  bool valid = false;
  CoherentSetResult result;
};

LevelEval evaluate_level(const ScalarField& f, double level, const std::vector<ImageStep>& steps,
                         const std::vector<double>& weights, const CheegerOptions& opt, double max_step) {
  LevelEval ev;
  ContourSet gamma = marching_squares(f, level);
  if (gamma.empty()) return ev;
  const auto [vol1, vol2] = volumes(f, level);
  const double vmin = std::min(vol1, vol2);
  if (!(vmin > 0.0)) return ev;

  CoherentSetResult& r = ev.result;
  r.level = level;
  r.len_gamma = curve_length(gamma);
  r.vol1 = vol1;
  r.vol2 = vol2;
  r.method_image = opt.method;
  double numerator = weights[0] * r.len_gamma;
  ContourSet current = gamma;
  ScalarField pushed = f;
  for (std::size_t s = 0; s < steps.size(); ++s) {
    ContourSet image;
    if (opt.method == ImageMethod::MapPoints) {
      if (!steps[s].map) throw Error(ErrorKind::Configuration, "map_points needs a flow map for every step");
      image = transport_curve(current, *steps[s].map, max_step);
    } else {
      if (!steps[s].transition) {
        throw Error(ErrorKind::Configuration, "contour_of_pushforward needs an Ulam matrix for every step");
      }
      pushed = pushforward(*steps[s].transition, pushed);
      image = marching_squares(pushed, level);
    }
    const double len = curve_length(image);
    r.image_lengths.push_back(len);
    numerator += weights[s + 1] * len;
    current = std::move(image);
  }
  r.gamma = std::move(gamma);
  r.gamma_image = std::move(current);
  r.len_image = r.image_lengths.empty() ? 0.0 : r.image_lengths.back();
  r.hD = numerator / vmin;
  ev.valid = true;
  return ev;
}

}  // namespace

CoherentSetResult optimize_cheeger(const ScalarField& f, const ImageStep& step, const CheegerOptions& opt) {
  return optimize_cheeger(f, std::vector<ImageStep>{step}, {0.5, 0.5}, opt);
}

CoherentSetResult optimize_cheeger(const ScalarField& f, const std::vector<ImageStep>& steps,
                                   const std::vector<double>& weights, const CheegerOptions& opt) {
  if (opt.n_levels < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 levels");
  if (weights.size() != steps.size() + 1) throw Error(ErrorKind::Configuration, "need one weight per curve");
  const auto [lo_it, hi_it] = std::minmax_element(f.values.begin(), f.values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) throw Error(ErrorKind::DegenerateInput, "cannot scan levels of a constant field");

  double max_step = opt.max_image_step;
  if (!(max_step > 0.0)) {
    max_step = opt.image_grid ? opt.image_grid->box_diagonal() : f.grid.box_diagonal();
  }
  const double median = weighted_median(f);
  const auto n = static_cast<long>(opt.n_levels);
  std::vector<LevelEval> evals(opt.n_levels);
  long failed = n;
  std::optional<Error> failure;

#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < n; ++k) {
    const double level = lo + (hi - lo) * static_cast<double>(k + 1) / static_cast<double>(n + 1);
    try {
      evals[static_cast<std::size_t>(k)] = evaluate_level(f, level, steps, weights, opt, max_step);
    } catch (const Error& e) {
#pragma omp critical(dynlap_cheeger_error)
      {
        if (k < failed) {
          failed = k;
          failure = e;
        }
      }
    }
  }
  if (failure) throw *failure;

  const LevelEval* best = nullptr;
  std::size_t valid = 0;
  for (const LevelEval& ev : evals) {
    if (!ev.valid) continue;
    ++valid;
    if (!best) {
      best = &ev;
      continue;
    }
    const double a = ev.result.hD, b = best->result.hD;
    const double da = std::abs(ev.result.level - median), db = std::abs(best->result.level - median);
    if (a < b || (a == b && (da < db || (da == db && ev.result.level < best->result.level)))) best = &ev;
  }
  if (!best) throw Error(ErrorKind::DegenerateField, "every scanned level produced an empty contour");
  CoherentSetResult out = best->result;
  out.levels_evaluated = valid;
  return out;
}

double gradient_l1(const ScalarField& f) {
  const Grid& g = f.grid;
  const Domain& d = g.domain();
  const std::size_t nx = g.nx(), ny = g.ny();
  auto diff = [](double lo, double hi, double h) { return (hi - lo) / (2.0 * h); };
  double total = 0.0;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      double gx = 0.0, gy = 0.0;
      if (d.periodic_x) {
        gx = diff(f[g.index((i + nx - 1) % nx, j)], f[g.index((i + 1) % nx, j)], g.box_width());
      } else if (i > 0 && i + 1 < nx) {
        gx = diff(f[g.index(i - 1, j)], f[g.index(i + 1, j)], g.box_width());
      }
      if (d.periodic_y) {
        gy = diff(f[g.index(i, (j + ny - 1) % ny)], f[g.index(i, (j + 1) % ny)], g.box_height());
      } else if (j > 0 && j + 1 < ny) {
        gy = diff(f[g.index(i, j - 1)], f[g.index(i, j + 1)], g.box_height());
      }
      total += std::hypot(gx, gy);
    }
  }
  return total * g.box_area();
}

double sobolev_ratio(const ScalarField& f, const TransitionMatrix& tm) {
  const double alpha = weighted_median(f);
  double dev = 0.0;
  for (double v : f.values) dev += std::abs(v - alpha);
  dev *= f.grid.box_area();
  if (!(dev > 0.0)) throw Error(ErrorKind::DegenerateInput, "Sobolev ratio of a constant field");
  return (gradient_l1(f) + gradient_l1(pushforward(tm, f))) / (2.0 * dev);
}

double cheeger_upper_bound(double lambda2) {
  if (lambda2 > 1e-9) {
    throw Error(ErrorKind::InvalidEigenvalue, "expected a nonpositive eigenvalue, got " + std::to_string(lambda2));
  }
  return 2.0 * std::sqrt(std::max(0.0, -lambda2));
}

}  // namespace dynlap
