#include "dynlap/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <algorithm>
#include <functional>
#include <map>
#include <iostream>

#include "dynlap/expression.hpp"
#include "dynlap/laplacian.hpp"
#include "dynlap/render.hpp"
#include "dynlap/transfer.hpp"

namespace dynlap {

namespace {

const std::vector<std::string> kBuiltins{"identity", "translation", "shear", "standard", "torus_shear", "transitory"};

ImageMethod image_method_from_string(const std::string& s) {
  if (s == "map_points") return ImageMethod::MapPoints;
  if (s == "contour_of_pushforward") return ImageMethod::ContourOfPushforward;
  throw Error(ErrorKind::Configuration, "unknown image method '" + s + "'");
}

// Built-ins that live on a fixed domain.
std::optional<Domain> builtin_domain(const std::string& name) {
  if (name == "shear") return shear_domain();
  if (name == "standard" || name == "torus_shear") return standard_map_domain();
  if (name == "transitory") return transitory_domain();
  return std::nullopt;
}

// Flow of the configured dynamics over [t_start, t] (t = t_end gives the full map).
FlowMap make_flow(const RunConfig& c, double t0, double t1) {
  const DynamicsConfig& d = c.dynamics;
  if (d.kind == "ode") {
    OdeFlowSpec spec{expression_field(d.xdot, d.ydot), "xdot=" + d.xdot + ";ydot=" + d.ydot, t0, t1, d.step_size};
    return ode_flow_map(spec, c.domain);
  }
  if (d.name == "transitory") return builtin_transitory_segment(t0, t1, d.step_size, d.printed_sign);
  if (d.name == "identity") return identity_map(c.domain);
  if (d.name == "translation") return translation_map(c.domain, d.dx, d.dy);
  if (d.name == "shear") return builtin_shear();
  if (d.name == "standard") return builtin_standard_map();
  if (d.name == "torus_shear") return builtin_torus_shear();
  throw Error(ErrorKind::Configuration, "unknown built-in dynamics '" + d.name + "'");
}

bool is_time_continuous(const DynamicsConfig& d) { return d.kind == "ode" || d.name == "transitory"; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

class StageRunner {
 public:
  StageRunner(fs::path dir, const Json& config) : dir_(std::move(dir)), prev_hash_(sha256_hex(config.dump())) {}

  template <class F>
  void run(const std::string& name, F&& body) {
    StageRecord rec;
    rec.stage = name;
    rec.input_hash = sha256_hex(name + ":" + prev_hash_);
    current_ = &rec;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const Error& e) {
      rec.wall_seconds = seconds_since(t0);
      rec.status = std::string("failed: ") + e.what();
      stages_.push_back(rec);
      write_manifest(false);
      throw Error(e.kind(), "stage " + name + ": " + e.what());
    }
    rec.wall_seconds = seconds_since(t0);
    rec.status = "ok";
    std::string h = rec.input_hash;
    for (const std::string& o : rec.outputs) h += files_.at(o);
    prev_hash_ = sha256_hex(h);
    stages_.push_back(rec);
    current_ = nullptr;
  }

  // Records a file written by the current stage.
  void wrote(const std::string& name) {
    files_[name] = sha256_file(dir_ / name);
    if (current_) current_->outputs.push_back(name);
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

  Json write_manifest(bool complete) {
    Json stages = Json::array();
    for (const StageRecord& s : stages_) {
      stages.push_back({{"stage", s.stage},
                        {"input_hash", s.input_hash},
                        {"wall_seconds", s.wall_seconds},
                        {"status", s.status},
                        {"outputs", s.outputs}});
    }
    Json files = Json::object();
    for (const auto& [name, hash] : files_) files[name] = {{"sha256", hash}};
    manifest_ = {{"complete", complete}, {"stages", stages}, {"files", files}};
    write_json(dir_ / "manifest.json", manifest_);
    return manifest_;
  }

  const std::vector<StageRecord>& stages() const { return stages_; }

 private:
  fs::path dir_;
  std::string prev_hash_;
  std::vector<StageRecord> stages_;
  std::map<std::string, std::string> files_;
  StageRecord* current_ = nullptr;
  Json manifest_;
};

}  // namespace

void RunConfig::validate() const {
  domain.validate();
  if (nx == 0 || ny == 0) throw Error(ErrorKind::Configuration, "grid needs nx, ny >= 1");
  if (q_per_axis == 0) throw Error(ErrorKind::Configuration, "q_per_axis must be positive");
  if (k == 0) throw Error(ErrorKind::Configuration, "k must be positive");
  if (!deflate_constant && k < 2) throw Error(ErrorKind::Configuration, "k must be >= 2 to reach the second eigenvector");
  if (!(tol > 0.0)) throw Error(ErrorKind::Configuration, "tol must be positive");
  if (n_levels < 2) throw Error(ErrorKind::Configuration, "n_levels must be >= 2");
  if (dynamics.kind == "builtin") {
    if (std::find(kBuiltins.begin(), kBuiltins.end(), dynamics.name) == kBuiltins.end()) {
      throw Error(ErrorKind::Configuration, "unknown built-in dynamics '" + dynamics.name + "'");
    }
    if (auto d = builtin_domain(dynamics.name); d && !(*d == domain)) {
      throw Error(ErrorKind::Configuration, "built-in '" + dynamics.name + "' needs its own domain");
    }
  } else if (dynamics.kind == "ode") {
    if (dynamics.xdot.empty() || dynamics.ydot.empty()) {
      throw Error(ErrorKind::Configuration, "ode dynamics need xdot and ydot expressions");
    }
    Expression check_x(dynamics.xdot);
    Expression check_y(dynamics.ydot);
    if (!(dynamics.t_end > dynamics.t_start)) throw Error(ErrorKind::Configuration, "ode needs t_end > t_start");
  } else {
    throw Error(ErrorKind::Configuration, "dynamics kind must be 'builtin' or 'ode'");
  }
  if (!(dynamics.step_size > 0.0)) throw Error(ErrorKind::Configuration, "step_size must be positive");
  const std::string& m = multistep.mode;
  if (m != "none" && m != "maps" && m != "time") {
    throw Error(ErrorKind::Configuration, "multistep mode must be none, maps or time");
  }
  if (m == "maps" && multistep.steps < 2) throw Error(ErrorKind::Configuration, "multistep maps needs steps >= 2");
  if (m == "time") {
    if (multistep.samples < 2) throw Error(ErrorKind::Configuration, "multistep time needs samples >= 2");
    if (!is_time_continuous(dynamics)) {
      throw Error(ErrorKind::Configuration, "time sampling needs a time-continuous flow (ode or transitory)");
    }
    if (image_method == ImageMethod::ContourOfPushforward) {
      throw Error(ErrorKind::Configuration, "contour_of_pushforward is not available with time sampling");
    }
  }
  if (difflimit.enabled) {
    kernel_profile_from_string(difflimit.profile);
    if (difflimit.eps.empty()) throw Error(ErrorKind::Configuration, "difflimit needs eps values");
    for (double e : difflimit.eps)
      if (!(e > 0.0)) throw Error(ErrorKind::Configuration, "difflimit eps must be positive");
    Expression check(difflimit.field);
  }
  if (volume_samples == 0) throw Error(ErrorKind::Configuration, "volume_samples must be positive");
}

Json to_json(const RunConfig& c) {
  const DynamicsConfig& d = c.dynamics;
  return {{"domain", to_json(c.domain)},
          {"nx", c.nx},
          {"ny", c.ny},
          {"dynamics",
           {{"kind", d.kind},
            {"name", d.name},
            {"dx", d.dx},
            {"dy", d.dy},
            {"printed_sign", d.printed_sign},
            {"xdot", d.xdot},
            {"ydot", d.ydot},
            {"t_start", d.t_start},
            {"t_end", d.t_end},
            {"step_size", d.step_size}}},
          {"q_per_axis", c.q_per_axis},
          {"k", c.k},
          {"tol", c.tol},
          {"n_levels", c.n_levels},
          {"image_method", to_string(c.image_method)},
          {"multistep", {{"mode", c.multistep.mode}, {"steps", c.multistep.steps}, {"samples", c.multistep.samples}}},
          {"difflimit",
           {{"enabled", c.difflimit.enabled},
            {"profile", c.difflimit.profile},
            {"c", std::isfinite(c.difflimit.c) ? Json(c.difflimit.c) : Json(nullptr)},
            {"eps", c.difflimit.eps},
            {"field", c.difflimit.field},
            {"order_threshold", c.difflimit.order_threshold}}},
          {"output_dir", c.output_dir},
          {"symmetrize", c.symmetrize},
          {"deflate_constant", c.deflate_constant},
          {"volume_check", c.volume_check},
          {"volume_samples", c.volume_samples},
          {"render", c.render},
          {"write_matrices", c.write_matrices}};
}

RunConfig run_config_from_json(const Json& j) {
  try {
    RunConfig c;
    if (j.contains("domain")) c.domain = domain_from_json(j.at("domain"));
    c.nx = j.value("nx", c.nx);
    c.ny = j.value("ny", c.ny);
    if (j.contains("dynamics")) {
      const Json& d = j.at("dynamics");
      DynamicsConfig& o = c.dynamics;
      o.kind = d.value("kind", o.kind);
      o.name = d.value("name", o.name);
      o.dx = d.value("dx", o.dx);
      o.dy = d.value("dy", o.dy);
      o.printed_sign = d.value("printed_sign", o.printed_sign);
      o.xdot = d.value("xdot", o.xdot);
      o.ydot = d.value("ydot", o.ydot);
      o.t_start = d.value("t_start", o.t_start);
      o.t_end = d.value("t_end", o.t_end);
      o.step_size = d.value("step_size", o.step_size);
      // built-ins with a fixed domain supply it when the config leaves it out
      if (!j.contains("domain") && o.kind == "builtin") {
        if (auto dom = builtin_domain(o.name)) c.domain = *dom;
      }
    }
    c.q_per_axis = j.value("q_per_axis", c.q_per_axis);
    c.k = j.value("k", c.k);
    c.tol = j.value("tol", c.tol);
    c.n_levels = j.value("n_levels", c.n_levels);
    if (j.contains("image_method")) c.image_method = image_method_from_string(j.at("image_method").get<std::string>());
    if (j.contains("multistep")) {
      const Json& m = j.at("multistep");
      c.multistep.mode = m.value("mode", c.multistep.mode);
      c.multistep.steps = m.value("steps", c.multistep.steps);
      c.multistep.samples = m.value("samples", c.multistep.samples);
    }
    if (j.contains("difflimit")) {
      const Json& d = j.at("difflimit");
      DifflimitConfig& o = c.difflimit;
      o.enabled = d.value("enabled", o.enabled);
      o.profile = d.value("profile", o.profile);
      if (d.contains("c") && !d.at("c").is_null()) o.c = d.at("c").get<double>();
      if (d.contains("eps")) o.eps = d.at("eps").get<std::vector<double>>();
      o.field = d.value("field", o.field);
      o.order_threshold = d.value("order_threshold", o.order_threshold);
    }
    c.output_dir = j.value("output_dir", c.output_dir);
    c.symmetrize = j.value("symmetrize", c.symmetrize);
    c.deflate_constant = j.value("deflate_constant", c.deflate_constant);
    c.volume_check = j.value("volume_check", c.volume_check);
    c.volume_samples = j.value("volume_samples", c.volume_samples);
    c.render = j.value("render", c.render);
    c.write_matrices = j.value("write_matrices", c.write_matrices);
    return c;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Configuration, std::string("bad config: ") + e.what());
  }
}

namespace {

LimitReport difflimit_on(const RunConfig& c, const Grid& grid, const TransitionMatrix& tm) {
  const DifflimitConfig& d = c.difflimit;
  const KernelProfile profile = kernel_profile_from_string(d.profile);
  const double cc = std::isfinite(d.c) ? d.c : make_kernel(profile, d.eps.front()).c;
  Expression fx(d.field);
  const ScalarField f = ScalarField::sample(grid, [&](double x, double y) { return fx(x, y, 0.0); });
  return verify_limit(grid, tm.transfer(), profile, cc, f, d.eps, d.order_threshold);
}

}  // namespace

RunArtifacts run_pipeline(const RunConfig& config) {
  config.validate();
  RunArtifacts art;
  art.config = config;
  const fs::path dir = config.output_dir;
  fs::create_directories(dir);
  const Json cfg_json = to_json(config);
  StageRunner runner(dir, cfg_json);

  std::optional<Grid> grid;
  std::vector<FlowMap> maps;        // T^(i) from the initial time, i = 1..n-1
  std::vector<FlowMap> step_maps;   // increments T^(i-1) -> T^(i)
  std::vector<double> weights;
  std::vector<TransitionMatrix> ulam;
  std::optional<DiscreteOperator> op;

  runner.run("grid", [&] {
    grid.emplace(config.domain, config.nx, config.ny);
    write_json(runner.path("config.json"), cfg_json);
    runner.wrote("config.json");
    write_json(runner.path("grid.json"), to_json(*grid));
    runner.wrote("grid.json");
  });

  runner.run("dynamics", [&] {
    const MultistepConfig& ms = config.multistep;
    const double t0 = config.dynamics.t_start, t1 = config.dynamics.t_end;
    if (ms.mode == "none") {
      maps.push_back(make_flow(config, t0, t1));
      step_maps = maps;
      weights = {0.5, 0.5};
    } else if (ms.mode == "maps") {
      const FlowMap t = make_flow(config, t0, t1);
      step_maps.assign(ms.steps - 1, t);
      maps = compose(step_maps);
      weights.assign(ms.steps, 1.0 / static_cast<double>(ms.steps));
    } else {
      const std::size_t m = ms.samples;
      auto time = [&](std::size_t i) { return t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(m - 1); };
      for (std::size_t i = 1; i < m; ++i) {
        maps.push_back(make_flow(config, t0, time(i)));
        step_maps.push_back(make_flow(config, time(i - 1), time(i)));
      }
      weights = trapezoid_weights(m);
    }
    Json dyn = {{"fingerprints", Json::array()}, {"weights", weights}};
    for (const FlowMap& m : maps) dyn["fingerprints"].push_back(m.fingerprint());
    if (config.dynamics.kind == "ode" && config.volume_check) {
      const VolumeCheck vc = volume_preservation_check(maps.back(), *grid, config.volume_samples);
      dyn["volume_check"] = {{"samples", vc.samples}, {"max_abs_z", vc.max_abs_z}, {"passed", vc.passed}};
      if (!vc.passed) {
        std::cerr << "warning: flow failed the volume-preservation check (max |z| = " << vc.max_abs_z << ")\n";
      }
    }
    write_json(runner.path("dynamics.json"), dyn);
    runner.wrote("dynamics.json");
  });

  runner.run("ulam", [&] {
    for (std::size_t i = 0; i < maps.size(); ++i) {
      ulam.push_back(build_ulam(*grid, *grid, maps[i], config.q_per_axis));
      const std::string base = maps.size() == 1 ? "ulam_P" : "ulam_P_" + std::to_string(i + 1);
      if (config.write_matrices) {
        write_matrix_market(runner.path(base + ".mtx"), ulam.back().P);
        runner.wrote(base + ".mtx");
      }
      write_json(runner.path(base + ".json"), sidecar(ulam.back()));
      runner.wrote(base + ".json");
    }
  });

  runner.run("dynlap", [&] {
    const DiscreteOperator lap = assemble_laplacian(*grid);
    if (config.multistep.mode == "none") {
      op = assemble_dynamic_laplacian(lap, lap, ulam.front().transfer());
    } else {
      std::vector<DiscreteOperator> laps(maps.size() + 1, lap);
      std::vector<SparseMatrix> transfers{sparse_identity(static_cast<Eigen::Index>(grid->size()))};
      for (const TransitionMatrix& tm : ulam) transfers.push_back(tm.transfer());
      op = assemble_multistep(laps, transfers, weights);
    }
    op->fingerprint = maps.back().fingerprint();
    op->q_per_axis = config.q_per_axis;
    if (config.symmetrize) op = symmetrized(*op);
    if (config.write_matrices) {
      write_matrix_market(runner.path("operator.mtx"), op->matrix);
      runner.wrote("operator.mtx");
    }
    write_json(runner.path("operator.json"), sidecar(*op));
    runner.wrote("operator.json");
  });

  runner.run("spectral", [&] {
    SpectralOptions opt;
    opt.tol = config.tol;
    opt.deflate_constant = config.deflate_constant;
    art.spectrum = solve_leading(*op, config.k, opt);
    write_json(runner.path("eigenvalues.json"), to_json(*art.spectrum));
    runner.wrote("eigenvalues.json");
    for (std::size_t i = 0; i < art.spectrum->size(); ++i) {
      const std::string name = "eigenvector_" + std::to_string(i + 1) + ".csv";
      write_field_csv(runner.path(name), art.spectrum->eigenvectors[i]);
      runner.wrote(name);
    }
  });

  runner.run("coherent", [&] {
    const std::size_t idx = config.deflate_constant ? 0 : 1;
    if (art.spectrum->size() <= idx) throw Error(ErrorKind::Configuration, "not enough eigenpairs for u2");
    const ScalarField& u2 = art.spectrum->eigenvectors[idx];
    const double lambda2 = art.spectrum->eigenvalues[idx];
    std::vector<ImageStep> steps;
    for (std::size_t i = 0; i < step_maps.size(); ++i) {
      // for "maps" every increment is T itself, whose Ulam matrix is the first one
      steps.push_back({&step_maps[i], config.multistep.mode == "time" ? nullptr : &ulam.front()});
    }
    CheegerOptions co;
    co.n_levels = config.n_levels;
    co.method = config.image_method;
    co.image_grid = &*grid;
    CoherentSetResult r = optimize_cheeger(u2, steps, weights, co);
    art.cheeger_bound = cheeger_upper_bound(lambda2);
    r.cheeger_bound = art.cheeger_bound;
    if (config.multistep.mode == "none") {
      art.sobolev = sobolev_ratio(u2, ulam.front());
      r.sobolev_bound = art.sobolev;
    }
    write_contours_csv(runner.path("contour_gamma.csv"), r.gamma);
    runner.wrote("contour_gamma.csv");
    write_contours_csv(runner.path("contour_image.csv"), r.gamma_image);
    runner.wrote("contour_image.csv");
    write_json(runner.path("result.json"), to_json(r));
    runner.wrote("result.json");
    if (config.render) {
      write_png(runner.path("u2.png"), render_heatmap(u2, &r.gamma));
      runner.wrote("u2.png");
      if (maps.size() == 1) {
        write_png(runner.path("u2_image.png"), render_heatmap(pushforward(ulam.front(), u2), &r.gamma_image));
        runner.wrote("u2_image.png");
      }
    }
    art.result = std::move(r);
  });

  if (config.difflimit.enabled) {
    runner.run("difflimit", [&] {
      art.limit = difflimit_on(config, *grid, ulam.front());
      write_json(runner.path("difflimit.json"), to_json(*art.limit));
      runner.wrote("difflimit.json");
    });
  }

  art.manifest = runner.write_manifest(true);
  art.stages = runner.stages();
  return art;
}

LimitReport run_difflimit(const RunConfig& config) {
  RunConfig c = config;
  c.difflimit.enabled = true;
  c.validate();
  if (!c.domain.is_torus()) throw Error(ErrorKind::Configuration, "difflimit needs a fully periodic domain");
  const Grid grid(c.domain, c.nx, c.ny);
  const TransitionMatrix tm = build_ulam(grid, grid, make_flow(c, c.dynamics.t_start, c.dynamics.t_end), c.q_per_axis);
  LimitReport rep = difflimit_on(c, grid, tm);
  fs::create_directories(c.output_dir);
  write_json(fs::path(c.output_dir) / "difflimit.json", to_json(rep));
  return rep;
}

RunConfig case_study_config(const std::string& name) {
  RunConfig c;
  c.dynamics.kind = "builtin";
  c.dynamics.name = name;
  c.q_per_axis = 40;
  if (name == "shear") {
    c.domain = shear_domain();
    c.nx = 256;
    c.ny = 64;
  } else if (name == "standard") {
    c.domain = standard_map_domain();
    c.nx = c.ny = 128;
  } else if (name == "transitory") {
    c.domain = transitory_domain();
    c.nx = c.ny = 128;
    c.dynamics.step_size = 0.01;
  } else {
    throw Error(ErrorKind::Configuration, "unknown case study '" + name + "' (shear, standard, transitory)");
  }
  c.output_dir = "case-" + name;
  return c;
}

namespace {

struct Reference {
  const char* metric;
  double value;
  double rel_tol;
};

std::vector<Reference> references(const std::string& name) {
  if (name == "shear") return {{"lambda2", -3.0865, 0.02}, {"hD", 1.1180, 0.02}, {"cheeger_bound", 3.5137, 0.01}};
  if (name == "standard") {
    return {{"lambda2", -1.6466, 0.02}, {"hD", 0.7685, 0.03}, {"sobolev", 1.2278, 0.05}, {"cheeger_bound", 2.5664, 0.01}};
  }
  return {{"lambda2", -87.1430, 0.05},
          {"hD", 8.2749, 0.05},
          {"min_volume", 0.3091, 0.05},
          {"separatrix_image_length", 8.3057, 0.05}};
}

}  // namespace

CaseStudyReport run_case_study(const std::string& name, const CaseOverrides& ov) {
  RunConfig c = case_study_config(name);
  if (!ov.output_dir.empty()) c.output_dir = ov.output_dir;
  if (ov.nx) c.nx = *ov.nx;
  if (ov.ny) c.ny = *ov.ny;
  if (ov.q_per_axis) c.q_per_axis = *ov.q_per_axis;
  if (ov.n_levels) c.n_levels = *ov.n_levels;
  if (ov.k) c.k = *ov.k;
  c.render = ov.render;
  c.write_matrices = ov.write_matrices;

  CaseStudyReport rep;
  rep.name = name;
  rep.artifacts = run_pipeline(c);
  const RunArtifacts& a = rep.artifacts;
  const CoherentSetResult& r = *a.result;
  const double lambda2 = a.spectrum->eigenvalues[1];

  if (name == "transitory") {
    const Grid grid(c.domain, c.nx, c.ny);
    ContourSet sep;
    sep.domain = c.domain;
    sep.curves.push_back(make_polyline(c.domain, {{0.5, 0.0}, {0.5, 1.0}}));
    const FlowMap t = make_flow(c, c.dynamics.t_start, c.dynamics.t_end);
    rep.separatrix_image_length = curve_length(transport_curve(sep, t, grid.box_diagonal()));
    rep.separatrix_hD = (1.0 + rep.separatrix_image_length) / (2.0 * 0.5);
  }

  auto value_of = [&](const std::string& m) {
    if (m == "lambda2") return lambda2;
    if (m == "hD") return r.hD;
    if (m == "cheeger_bound") return a.cheeger_bound;
    if (m == "sobolev") return a.sobolev;
    if (m == "min_volume") return std::min(r.vol1, r.vol2);
    return rep.separatrix_image_length;
  };
  for (const Reference& ref : references(name)) {
    CaseMetric m{ref.metric, value_of(ref.metric), ref.value, ref.rel_tol, false};
    m.passed = std::abs(m.value - m.reference) <= m.rel_tol * std::abs(m.reference);
    rep.metrics.push_back(m);
  }
  rep.checks.emplace_back("hD <= cheeger_bound", r.hD <= a.cheeger_bound);
  if (name == "standard") {
    rep.checks.emplace_back("hD <= sobolev", r.hD <= a.sobolev);
    rep.checks.emplace_back("sobolev <= cheeger_bound", a.sobolev <= a.cheeger_bound);
  }
  if (name == "transitory") rep.checks.emplace_back("hD(separatrix) > hD", rep.separatrix_hD > r.hD);
  write_json(fs::path(c.output_dir) / "summary.json", to_json(rep));
  return rep;
}

Json to_json(const CaseStudyReport& r) {
  Json metrics = Json::array();
  for (const CaseMetric& m : r.metrics) {
    metrics.push_back({{"name", m.name},
                       {"value", m.value},
                       {"reference", m.reference},
                       {"rel_tol", m.rel_tol},
                       {"passed", m.passed}});
  }
  Json checks = Json::array();
  for (const auto& [name, ok] : r.checks) checks.push_back({{"name", name}, {"passed", ok}});
  Json j = {{"case", r.name}, {"metrics", metrics}, {"checks", checks}};
  if (r.artifacts.spectrum) j["eigenvalues"] = r.artifacts.spectrum->eigenvalues;
  if (r.artifacts.result) j["result"] = to_json(*r.artifacts.result);
  if (std::isfinite(r.separatrix_image_length)) {
    j["separatrix"] = {{"image_length", r.separatrix_image_length}, {"hD", r.separatrix_hD}};
  }
  return j;
}

}  // namespace dynlap
