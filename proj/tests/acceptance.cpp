// Acceptance gate: one PASS/FAIL line per criterion, tolerances pinned here.
//
//   acceptance            all criteria
//   acceptance 4 6        a subset
//
// Exit status is the number of failed criteria (capped at 100).

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "dynlap/difflimit.hpp"
#include "dynlap/laplacian.hpp"
#include "dynlap/pipeline.hpp"
#include "dynlap/spectral.hpp"
#include "dynlap/transfer.hpp"

using namespace dynlap;

namespace {

constexpr double pi = std::numbers::pi;

// Tolerances are relative unless stated otherwise.
namespace tol {
constexpr double shear_lambda2 = 0.02;
constexpr double shear_hD = 0.02;
constexpr double shear_bound = 0.01;
constexpr double standard_lambda2 = 0.02;
constexpr double standard_hD = 0.03;
constexpr double standard_sobolev = 0.05;
constexpr double standard_bound = 0.01;
constexpr double transitory = 0.05;
constexpr double torus_abs = 1e-3;
constexpr double static_rel = 0.01;
constexpr double order = 1.5;
constexpr double plateau_factor = 10.0;
constexpr double row_stochastic = 1e-12;
constexpr double kernel = 1e-9;
constexpr double residual = 1e-8;  // times ‖A‖∞
constexpr double objectivity = 1e-8;
constexpr double dense_iterative = 1e-8;  // times ‖A‖∞
}  // namespace tol

const std::string kOut = "acceptance-out";

struct Check {
  std::string what;
  bool ok;
};

class Criterion {
 public:
  void rel(const std::string& name, double value, double ref, double t) {
    const bool ok = std::abs(value - ref) <= t * std::abs(ref);
    std::printf("    %-34s %14.6g  ref %12.6g  ±%.1f%%  %s\n", name.c_str(), value, ref, 100 * t, ok ? "ok" : "miss");
    checks_.push_back({name, ok});
  }
  void abs(const std::string& name, double value, double ref, double t) {
    const bool ok = std::abs(value - ref) <= t;
    std::printf("    %-34s %14.6g  ref %12.6g  ±%.0e  %s\n", name.c_str(), value, ref, t, ok ? "ok" : "miss");
    checks_.push_back({name, ok});
  }
  void at_most(const std::string& name, double value, double limit) {
    const bool ok = value <= limit;
    std::printf("    %-34s %14.6g  <= %.3g  %s\n", name.c_str(), value, limit, ok ? "ok" : "miss");
    checks_.push_back({name, ok});
  }
  void at_least(const std::string& name, double value, double limit) {
    const bool ok = value >= limit;
    std::printf("    %-34s %14.6g  >= %.3g  %s\n", name.c_str(), value, limit, ok ? "ok" : "miss");
    checks_.push_back({name, ok});
  }
  void holds(const std::string& name, bool ok) {
    std::printf("    %-34s %s\n", name.c_str(), ok ? "ok" : "miss");
    checks_.push_back({name, ok});
  }
  void info(const std::string& line) { std::printf("    %s\n", line.c_str()); }

  bool passed() const {
    for (const Check& c : checks_)
      if (!c.ok) return false;
    return !checks_.empty();
  }
  std::string misses() const {
    std::string s;
    for (const Check& c : checks_)
      if (!c.ok) s += (s.empty() ? "" : ", ") + c.what;
    return s;
  }

 private:
  std::vector<Check> checks_;
};

CaseStudyReport case_study(const std::string& name) {
  CaseOverrides ov;
  ov.output_dir = kOut + "/" + name;
  ov.write_matrices = false;
  return run_case_study(name, ov);
}

void report_spectrum(Criterion& c, const Spectrum& s) {
  std::string line = "eigenvalues:";
  for (double l : s.eigenvalues) line += " " + std::to_string(l);
  c.info(line);
  double worst = 0.0;
  for (double r : s.residuals) worst = std::max(worst, r / s.operator_norm);
  c.at_most("max residual / ‖A‖∞", worst, tol::residual);
}

void shear(Criterion& c) {
  const CaseStudyReport r = case_study("shear");
  const RunArtifacts& a = r.artifacts;
  const double l2 = a.spectrum->eigenvalues[1];
  report_spectrum(c, *a.spectrum);
  c.rel("lambda2", l2, -3.0865, tol::shear_lambda2);
  c.rel("lambda2 vs -5π²/16", l2, -5 * pi * pi / 16, tol::shear_lambda2);
  c.rel("hD", a.result->hD, std::sqrt(5.0) / 2, tol::shear_hD);
  c.rel("cheeger bound", a.cheeger_bound, 3.5137, tol::shear_bound);
  c.holds("hD <= bound", a.result->hD <= a.cheeger_bound);
}

void standard(Criterion& c) {
  const CaseStudyReport r = case_study("standard");
  const RunArtifacts& a = r.artifacts;
  report_spectrum(c, *a.spectrum);
  c.rel("lambda2", a.spectrum->eigenvalues[1], -1.6466, tol::standard_lambda2);
  c.rel("hD", a.result->hD, 0.7685, tol::standard_hD);
  c.rel("sobolev ratio", a.sobolev, 1.2278, tol::standard_sobolev);
  c.rel("cheeger bound", a.cheeger_bound, 2.5664, tol::standard_bound);
  c.holds("hD <= sobolev <= bound", a.result->hD <= a.sobolev && a.sobolev <= a.cheeger_bound);
}

void transitory(Criterion& c) {
  const CaseStudyReport r = case_study("transitory");
  const RunArtifacts& a = r.artifacts;
  report_spectrum(c, *a.spectrum);
  c.rel("lambda2", a.spectrum->eigenvalues[1], -87.1430, tol::transitory);
  c.rel("hD", a.result->hD, 8.2749, tol::transitory);
  c.rel("vol1 (smaller piece)", std::min(a.result->vol1, a.result->vol2), 0.3091, tol::transitory);
  c.rel("separatrix image length", r.separatrix_image_length, 8.3057, tol::transitory);
  c.info("hD(x = 1/2) = " + std::to_string(r.separatrix_hD));
  c.holds("hD(separatrix) > hD", r.separatrix_hD > a.result->hD);
}

void static_spectra(Criterion& c) {
  const Spectrum t = solve_leading(assemble_laplacian(Grid(Domain::torus(2 * pi, 2 * pi), 128, 128)), 5);
  c.abs("torus lambda2", t.eigenvalues[1], -1.0, tol::torus_abs);
  const Spectrum r = solve_leading(assemble_laplacian(Grid(Domain::rectangle(1.5, 1), 384, 256)), 3);
  c.rel("rectangle lambda2", r.eigenvalues[1], -4 * pi * pi / 9, tol::static_rel);
  c.rel("rectangle lambda3", r.eigenvalues[2], -pi * pi, tol::static_rel);
  const Spectrum y = solve_leading(assemble_laplacian(Grid(Domain::cylinder_x(1.5, 1), 384, 256)), 3);
  c.rel("cylinder lambda2", y.eigenvalues[1], -pi * pi, tol::static_rel);
}

void zero_diffusion(Criterion& c) {
  const Grid g(standard_map_domain(), 256, 256);
  const SparseMatrix pt = build_ulam(g, g, builtin_torus_shear(), 10).transfer();
  const ScalarField f = ScalarField::sample(g, [](double x, double y) { return std::sin(x) + std::cos(y); });
  const std::vector<double> eps{0.4, 0.28, 0.2, 0.14};
  const LimitReport ok = verify_limit(g, pt, KernelProfile::UniformBall, 0.25, f, eps, tol::order);
  const LimitReport bad = verify_limit(g, pt, KernelProfile::UniformBall, 1.0 / 3.0, f, eps, tol::order);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    char line[160];
    std::snprintf(line, sizeof line, "eps %.2f  r(c=1/4) %.4e  order %.3f  r(c=1/3) %.4e", eps[i],
                  ok.samples[i].residual, ok.samples[i].order, bad.samples[i].residual);
    c.info(line);
  }
  c.holds("r strictly decreasing (c = 1/4)", ok.strictly_decreasing);
  c.at_least("mean empirical order", ok.mean_order, tol::order);
  c.holds("c = 1/3 final > 10x c = 1/4 final",
          bad.samples.back().residual > tol::plateau_factor * ok.samples.back().residual);
}

void properties(Criterion& c) {
  double row = 0.0;
  for (const auto& [grid, map] : std::vector<std::pair<Grid, FlowMap>>{
           {Grid(shear_domain(), 128, 32), builtin_shear()},
           {Grid(standard_map_domain(), 64, 64), builtin_standard_map()},
           {Grid(transitory_domain(), 32, 32), builtin_transitory_flow(0.01)}}) {
    row = std::max(row, row_stochastic_defect(build_ulam(grid, grid, map, 10).P));
  }
  c.at_most("Ulam row-stochastic defect", row, tol::row_stochastic);

  double kernel = 0.0;
  for (const auto& [grid, map] : std::vector<std::pair<Grid, FlowMap>>{
           {Grid(shear_domain(), 128, 32), builtin_shear()},
           {Grid(standard_map_domain(), 64, 64), builtin_torus_shear()}}) {
    const DiscreteOperator lap = assemble_laplacian(grid);
    kernel = std::max(kernel, kernel_defect(assemble_dynamic_laplacian(lap, lap, build_ulam(grid, grid, map, 10).transfer())));
  }
  c.at_most("dynamic Laplacian kernel defect", kernel, tol::kernel);

  // the dense route is O(n³) unblocked; n = 2304 keeps it to a few minutes on one core
  const Grid sg(standard_map_domain(), 48, 48);
  const DiscreteOperator slap = assemble_laplacian(sg);
  const DiscreteOperator sop = assemble_dynamic_laplacian(slap, slap, build_ulam(sg, sg, builtin_standard_map(), 20).transfer());
  SpectralOptions dense, iter;
  dense.method = EigenMethod::Dense;
  iter.method = EigenMethod::Iterative;
  const Spectrum sd = solve_leading(sop, 6, dense);
  const Spectrum si = solve_leading(sop, 6, iter);
  double worst = 0.0, gap = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    worst = std::max({worst, sd.residuals[i] / sd.operator_norm, si.residuals[i] / si.operator_norm});
    gap = std::max(gap, std::abs(sd.eigenvalues[i] - si.eigenvalues[i]) / sd.operator_norm);
  }
  c.at_most("eigen residual / ‖A‖∞ (n = 2304)", worst, tol::residual);
  c.at_most("dense vs iterative / ‖A‖∞ (n = 2304)", gap, tol::dense_iterative);

  const ObjectivityReport ob = objectivity_check(Grid(standard_map_domain(), 128, 128), builtin_standard_map(), 40, 32, 0, 5);
  c.at_most("objectivity, standard map, shift 32", ob.max_eigenvalue_discrepancy, tol::objectivity);
  const ObjectivityReport os = objectivity_check(Grid(shear_domain(), 128, 32), builtin_shear(), 20, 17, 0, 6);
  c.at_most("objectivity, shear, shift 17", os.max_eigenvalue_discrepancy, tol::objectivity);

  // brute-force Ulam oracle: the 4×2 shear grid with q = 8, points from the box geometry
  const Grid g(shear_domain(), 4, 2);
  const std::size_t q = 8;
  std::map<std::pair<std::size_t, std::size_t>, int> counts;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t b = 0; b < q; ++b)
        for (std::size_t a = 0; a < q; ++a) {
          const double x = static_cast<double>(i) + (static_cast<double>(a) + 0.5) / q;
          const double y = 0.5 * static_cast<double>(j) + 0.5 * (static_cast<double>(b) + 0.5) / q;
          const double tx = std::fmod(x + y, 4.0);
          ++counts[{j * 4 + i, static_cast<std::size_t>(std::floor(y / 0.5)) * 4 + static_cast<std::size_t>(tx)}];
        }
  const SparseMatrix P = build_ulam(g, g, builtin_shear(), q).P;
  bool equal = P.nonZeros() == static_cast<Eigen::Index>(counts.size());
  for (std::size_t r = 0; r < g.size(); ++r)
    for (std::size_t k = 0; k < g.size(); ++k) {
      const auto it = counts.find({r, k});
      const double expect = it == counts.end() ? 0.0 : it->second / 64.0;
      equal = equal && P.coeff(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) == expect;
    }
  c.holds("brute-force Ulam oracle (4x2 shear)", equal);
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria{
      {"shear case study", shear},
      {"standard-map case study", standard},
      {"transitory-flow case study", transitory},
      {"static spectra", static_spectra},
      {"zero-diffusion limit", zero_diffusion},
      {"property suites", properties}};

  std::set<std::size_t> pick;
  for (int i = 1; i < argc; ++i) pick.insert(static_cast<std::size_t>(std::atoi(argv[i])));
  std::printf("threads: %d\n", omp_get_max_threads());

  std::vector<std::string> lines;
  int failed = 0;
  for (std::size_t n = 1; n <= criteria.size(); ++n) {
    if (!pick.empty() && !pick.count(n)) continue;
    const auto& [name, body] = criteria[n - 1];
    std::printf("criterion %zu: %s\n", n, name.c_str());
    std::fflush(stdout);
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(c);
    } catch (const std::exception& e) {
      c.holds(std::string("error: ") + e.what(), false);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char line[512];
    std::snprintf(line, sizeof line, "%s criterion %zu (%s) [%.0f s]%s%s", c.passed() ? "PASS" : "FAIL", n,
                  name.c_str(), secs, c.passed() ? "" : ": ", c.misses().c_str());
    std::printf("%s\n\n", line);
    std::fflush(stdout);
    lines.emplace_back(line);
    if (!c.passed()) ++failed;
  }
  std::printf("summary\n");
  for (const std::string& l : lines) std::printf("  %s\n", l.c_str());
  return std::min(failed, 100);
}
