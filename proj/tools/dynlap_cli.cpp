// dynlap: coherent-set extraction from the dynamic Laplacian.
//
//   dynlap case-study shear --out case-shear
//   dynlap run config.json --threads 4
//   dynlap difflimit config.json
//   dynlap render eigenvector_2.csv contour_gamma.csv --out u2.png

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dynlap/io.hpp"
#include "dynlap/pipeline.hpp"
#include "dynlap/render.hpp"

namespace {

using namespace dynlap;

struct Common {
  std::string out;
  int threads = 0;
  std::vector<std::size_t> grid;
  std::size_t q_per_axis = 0;
  std::size_t levels = 0;
  std::size_t k = 0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "Output directory (render: PNG file)");
  app->add_option("--threads", c.threads, "OpenMP threads (default: DYNLAP_THREADS, then all cores)")
      ->check(CLI::PositiveNumber);
  app->add_option("--grid", c.grid, "Grid size NX NY")->expected(2)->check(CLI::PositiveNumber);
  app->add_option("--q-per-axis", c.q_per_axis, "Ulam test points per box axis")->check(CLI::PositiveNumber);
  app->add_option("--levels", c.levels, "Cheeger level scan size")->check(CLI::PositiveNumber);
  app->add_option("--k", c.k, "Number of eigenpairs")->check(CLI::PositiveNumber);
}

void set_threads(int requested) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("DYNLAP_THREADS")) n = std::atoi(env);
  }
  if (n > 0) omp_set_num_threads(n);
}

void apply(const Common& c, RunConfig& cfg) {
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.grid.size() == 2) {
    cfg.nx = c.grid[0];
    cfg.ny = c.grid[1];
  }
  if (c.q_per_axis) cfg.q_per_axis = c.q_per_axis;
  if (c.levels) cfg.n_levels = c.levels;
  if (c.k) cfg.k = c.k;
}

void print_metric(const std::string& name, double value, double reference, double tol, bool ok) {
  std::printf("  %-26s %14.6g  ref %12.6g  ±%4.1f%%  %s\n", name.c_str(), value, reference, 100.0 * tol,
              ok ? "pass" : "FAIL");
}

void print_run(const RunArtifacts& a) {
  std::printf("eigenvalues:");
  for (double l : a.spectrum->eigenvalues) std::printf(" %.6g", l);
  std::printf("\n");
  const CoherentSetResult& r = *a.result;
  std::printf("level %.6g  hD %.6g  |G| %.6g  |TG| %.6g  vol %.6g / %.6g\n", r.level, r.hD, r.len_gamma, r.len_image,
              r.vol1, r.vol2);
  if (std::isfinite(a.sobolev)) std::printf("sobolev ratio %.6g\n", a.sobolev);
  std::printf("cheeger bound %.6g\n", a.cheeger_bound);
  if (a.limit) {
    for (const LimitSample& s : a.limit->samples) std::printf("eps %.4g  r %.4e  order %.3f\n", s.eps, s.residual, s.order);
    std::printf("difflimit %s (mean order %.3f)\n", a.limit->passed ? "pass" : "FAIL", a.limit->mean_order);
  }
  std::printf("outputs in %s\n", a.config.output_dir.c_str());
}

RunConfig load_config(const std::string& path) { return run_config_from_json(read_json(path)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-time coherent sets from the dynamic Laplacian"};
  app.require_subcommand(1);

  Common common;
  std::string case_name;
  std::string config_path;
  std::string field_path;
  std::string contour_path;
  bool no_render = false;
  bool no_matrices = false;

  auto* cs = app.add_subcommand("case-study", "Run a reference case study (shear, standard, transitory)");
  cs->add_option("name", case_name)->required()->check(CLI::IsMember({"shear", "standard", "transitory"}));
  cs->add_flag("--no-render", no_render, "Skip PNG output");
  cs->add_flag("--no-matrices", no_matrices, "Skip Matrix Market output");
  add_common(cs, common);

  auto* run = app.add_subcommand("run", "Run the pipeline from a JSON config");
  run->add_option("config", config_path)->required()->check(CLI::ExistingFile);
  add_common(run, common);

  auto* dl = app.add_subcommand("difflimit", "Zero-diffusion limit check from a JSON config");
  dl->add_option("config", config_path)->required()->check(CLI::ExistingFile);
  add_common(dl, common);

  auto* rd = app.add_subcommand("render", "Render a field CSV (and optional contour CSV) to PNG");
  rd->add_option("field", field_path)->required()->check(CLI::ExistingFile);
  rd->add_option("contours", contour_path)->check(CLI::ExistingFile);
  add_common(rd, common);

  CLI11_PARSE(app, argc, argv);
  set_threads(common.threads);

  try {
    if (cs->parsed()) {
      CaseOverrides ov;
      ov.output_dir = common.out;
      if (common.grid.size() == 2) {
        ov.nx = common.grid[0];
        ov.ny = common.grid[1];
      }
      if (common.q_per_axis) ov.q_per_axis = common.q_per_axis;
      if (common.levels) ov.n_levels = common.levels;
      if (common.k) ov.k = common.k;
      ov.render = !no_render;
      ov.write_matrices = !no_matrices;
      const CaseStudyReport rep = run_case_study(case_name, ov);
      print_run(rep.artifacts);
      std::printf("\n%s against reference values:\n", case_name.c_str());
      for (const CaseMetric& m : rep.metrics) print_metric(m.name, m.value, m.reference, m.rel_tol, m.passed);
      for (const auto& [name, ok] : rep.checks) std::printf("  %-26s %s\n", name.c_str(), ok ? "pass" : "FAIL");
      return 0;
    }
    if (run->parsed()) {
      RunConfig cfg = load_config(config_path);
      apply(common, cfg);
      print_run(run_pipeline(cfg));
      return 0;
    }
    if (dl->parsed()) {
      RunConfig cfg = load_config(config_path);
      apply(common, cfg);
      const LimitReport rep = run_difflimit(cfg);
      for (const LimitSample& s : rep.samples) std::printf("eps %.4g  r %.4e  order %.3f\n", s.eps, s.residual, s.order);
      std::printf("strictly decreasing: %s, mean order %.3f (threshold %.2f): %s\n",
                  rep.strictly_decreasing ? "yes" : "no", rep.mean_order, rep.order_threshold,
                  rep.passed ? "pass" : "FAIL");
      return 0;
    }
    if (rd->parsed()) {
      const ScalarField f = read_field_csv(field_path);
      std::optional<ContourSet> contours;
      if (!contour_path.empty()) contours = read_contours_csv(contour_path, f.grid.domain());
      const fs::path out = common.out.empty() ? fs::path(field_path).replace_extension(".png") : fs::path(common.out);
      write_png(out, render_heatmap(f, contours ? &*contours : nullptr));
      std::printf("wrote %s\n", out.string().c_str());
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
