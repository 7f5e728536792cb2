#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dynlap/coherent.hpp"
#include "dynlap/difflimit.hpp"
#include "dynlap/io.hpp"
#include "dynlap/spectral.hpp"

namespace dynlap {

/// Every default used by run configurations, in one place.
struct Defaults {
  static constexpr double step_size = 0.01;      // RK4 step for ODE flows
  static constexpr std::size_t n_levels = 100;   // Cheeger level scan
  static constexpr std::size_t k = 6;            // eigenpairs
  static constexpr double tol = 1e-8;            // eigen residual, relative to ‖A‖∞
  static constexpr std::size_t q_per_axis = 40;  // Q = 1600 test points per box
  static constexpr std::size_t time_samples = 11;
  static constexpr std::size_t map_steps = 2;
  static constexpr std::size_t volume_samples = 100000;
  static constexpr double order_threshold = 1.5;
};

struct DynamicsConfig {
  /// "builtin" or "ode".
  std::string kind = "builtin";
  /// Built-ins: identity, translation, shear, standard, torus_shear, transitory.
  std::string name = "identity";
  double dx = 0.0;  // translation
  double dy = 0.0;
  bool printed_sign = false;  // transitory: printed (non-divergence-free) sign
  std::string xdot;         // ode
  std::string ydot;
  double t_start = 0.0;
  double t_end = 1.0;
  double step_size = Defaults::step_size;
};

struct MultistepConfig {
  /// "none", "maps" (T applied `steps - 1` times, uniform weights) or
  /// "time" (flow sampled at `samples` equal times, trapezoidal weights).
  std::string mode = "none";
  std::size_t steps = Defaults::map_steps;
  std::size_t samples = Defaults::time_samples;
};

struct DifflimitConfig {
  bool enabled = false;
  std::string profile = "uniform_ball";
  /// NaN selects the kernel's own covariance constant.
  double c = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> eps{0.4, 0.28, 0.2, 0.14};
  std::string field = "sin(x)";  // expression in x, y
  double order_threshold = Defaults::order_threshold;
};

struct RunConfig {
  Domain domain = Domain::rectangle(1.0, 1.0);
  std::size_t nx = 64;
  std::size_t ny = 64;
  DynamicsConfig dynamics;
  std::size_t q_per_axis = Defaults::q_per_axis;
  std::size_t k = Defaults::k;
  double tol = Defaults::tol;
  std::size_t n_levels = Defaults::n_levels;
  ImageMethod image_method = ImageMethod::MapPoints;
  MultistepConfig multistep;
  DifflimitConfig difflimit;
  std::string output_dir = "out";
  bool symmetrize = false;
  bool deflate_constant = false;
  /// Statistical volume-preservation check for user ODE flows.
  bool volume_check = true;
  std::size_t volume_samples = Defaults::volume_samples;
  bool render = true;
  /// Matrix Market dumps of P and the operator (hundreds of MB at case-study sizes).
  bool write_matrices = true;

  /// Throws Configuration for unknown built-ins or non-positive numbers.
  void validate() const;
};

Json to_json(const RunConfig& c);
/// Missing keys take their defaults.
RunConfig run_config_from_json(const Json& j);

struct StageRecord {
  std::string stage;
  std::string input_hash;
  double wall_seconds = 0.0;
  std::string status;  // "ok" or "failed: ..."
  std::vector<std::string> outputs;
};

struct RunArtifacts {
  RunConfig config;
  std::optional<Spectrum> spectrum;
  std::optional<CoherentSetResult> result;
  std::optional<LimitReport> limit;
  double sobolev = std::numeric_limits<double>::quiet_NaN();
  double cheeger_bound = std::numeric_limits<double>::quiet_NaN();
  std::vector<StageRecord> stages;
  Json manifest;
};

/// grid → dynamics → ulam → dynlap → spectral → coherent (→ difflimit).
/// Writes every artifact plus manifest.json under config.output_dir. On a
/// stage failure the manifest records the partial progress and the error is
/// rethrown with the stage name prefixed.
RunArtifacts run_pipeline(const RunConfig& config);

/// Zero-diffusion limit check only (difflimit section of the config).
LimitReport run_difflimit(const RunConfig& config);

struct CaseMetric {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double rel_tol = 0.0;
  bool passed = false;
};

struct CaseStudyReport {
  std::string name;
  RunArtifacts artifacts;
  std::vector<CaseMetric> metrics;
  /// Orderings such as hD <= bound, by name.
  std::vector<std::pair<std::string, bool>> checks;
  /// Transitory only: the naive vertical separatrix x = 1/2.
  double separatrix_image_length = std::numeric_limits<double>::quiet_NaN();
  double separatrix_hD = std::numeric_limits<double>::quiet_NaN();
};

struct CaseOverrides {
  std::string output_dir;
  std::optional<std::size_t> nx;
  std::optional<std::size_t> ny;
  std::optional<std::size_t> q_per_axis;
  std::optional<std::size_t> n_levels;
  std::optional<std::size_t> k;
  bool render = true;
  bool write_matrices = true;
};

/// Config of a named case study: shear, standard or transitory.
RunConfig case_study_config(const std::string& name);

/// Runs the case study, writes summary.json next to the pipeline outputs and
/// compares against the reference values.
CaseStudyReport run_case_study(const std::string& name, const CaseOverrides& overrides = {});

Json to_json(const CaseStudyReport& r);

}  // namespace dynlap
