#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "dynlap/io.hpp"
#include "dynlap/pipeline.hpp"
#include "dynlap/render.hpp"

using namespace dynlap;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dynlap_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig small_shear(const fs::path& out) {
  RunConfig c;
  c.domain = shear_domain();
  c.dynamics.name = "shear";
  c.nx = 32;
  c.ny = 8;
  c.q_per_axis = 8;
  c.n_levels = 20;
  c.output_dir = out.string();
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DYNLAP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config round trip") {
  RunConfig c = small_shear("x");
  c.multistep.mode = "maps";
  c.multistep.steps = 3;
  c.difflimit.enabled = true;
  c.difflimit.eps = {0.5, 0.3};
  c.write_matrices = false;
  const Json j = to_json(c);
  CHECK(to_json(run_config_from_json(j)) == j);

  // built-ins on a fixed domain supply it
  const RunConfig s = run_config_from_json(Json::parse(R"({"dynamics": {"name": "standard"}})"));
  CHECK(s.domain == standard_map_domain());
  CHECK(s.q_per_axis == Defaults::q_per_axis);
  CHECK(std::isnan(s.difflimit.c));
}

TEST_CASE("config validation") {
  auto fails = [](auto edit) {
    RunConfig c = small_shear("x");
    edit(c);
    try {
      c.validate();
    } catch (const Error& e) {
      return e.kind() == ErrorKind::Configuration || e.kind() == ErrorKind::Parse ||
             e.kind() == ErrorKind::InvalidArgument;
    }
    return false;
  };
  CHECK_NOTHROW(small_shear("x").validate());
  CHECK(fails([](RunConfig& c) { c.dynamics.name = "lorenz"; }));
  CHECK(fails([](RunConfig& c) { c.domain = Domain::rectangle(1, 1); }));
  CHECK(fails([](RunConfig& c) { c.q_per_axis = 0; }));
  CHECK(fails([](RunConfig& c) { c.k = 1; }));
  CHECK(fails([](RunConfig& c) { c.tol = -1.0; }));
  CHECK(fails([](RunConfig& c) { c.multistep.mode = "sometimes"; }));
  CHECK(fails([](RunConfig& c) { c.multistep.mode = "time"; }));
  CHECK(fails([](RunConfig& c) {
    c.dynamics.kind = "ode";
    c.domain = Domain::rectangle(1, 1);
    c.dynamics.xdot = "sin(";
    c.dynamics.ydot = "0";
  }));
  CHECK(fails([](RunConfig& c) {
    c.difflimit.enabled = true;
    c.difflimit.profile = "gaussian";
  }));
  CHECK_THROWS_AS(run_config_from_json(Json::parse(R"({"nx": "many"})")), Error);
  CHECK_THROWS_AS(run_config_from_json(Json::parse(R"({"image_method": "guess"})")), Error);
}

TEST_CASE("identity dynamics reproduce the static problem") {
  const fs::path out = scratch("identity");
  RunConfig c;
  c.domain = Domain::rectangle(1.5, 1);
  c.nx = 24;
  c.ny = 16;
  c.q_per_axis = 4;
  c.n_levels = 40;
  c.render = false;
  c.output_dir = out.string();
  const RunArtifacts a = run_pipeline(c);

  const Spectrum st = solve_leading(assemble_laplacian(Grid(c.domain, c.nx, c.ny)), c.k);
  CHECK(a.spectrum->eigenvalues[1] == Approx(st.eigenvalues[1]).epsilon(1e-12));
  // u2 ~ cos(2πx/3) and the best cut is x = 3/4: hD = (1 + 1) / (2 · 3/4)
  const CoherentSetResult& r = *a.result;
  CHECK(r.len_image == Approx(r.len_gamma).epsilon(1e-12));
  CHECK(r.hD == Approx(4.0 / 3.0).epsilon(0.02));
  CHECK(std::min(r.vol1, r.vol2) == Approx(0.75).epsilon(0.05));
  fs::remove_all(out);
}

TEST_CASE("two-step map sampling equals the single-step operator") {
  const fs::path a_dir = scratch("single"), b_dir = scratch("two");
  RunConfig one = small_shear(a_dir);
  one.render = false;
  RunConfig two = one;
  two.output_dir = b_dir.string();
  two.multistep.mode = "maps";
  two.multistep.steps = 2;
  const RunArtifacts a = run_pipeline(one);
  const RunArtifacts b = run_pipeline(two);
  for (std::size_t i = 0; i < a.spectrum->size(); ++i) CHECK(a.spectrum->eigenvalues[i] == b.spectrum->eigenvalues[i]);
  CHECK(read_matrix_market(a_dir / "operator.mtx").isApprox(read_matrix_market(b_dir / "operator.mtx"), 0.0));
  CHECK(a.result->hD == b.result->hD);
  fs::remove_all(a_dir);
  fs::remove_all(b_dir);
}

TEST_CASE("user ODE flow with the volume check") {
  const fs::path out = scratch("ode");
  RunConfig c;
  c.domain = Domain{-1, 1, -1, 1, false, false};
  c.dynamics.kind = "ode";
  c.dynamics.xdot = "-y";
  c.dynamics.ydot = "x";
  c.dynamics.t_start = 0.0;
  c.dynamics.t_end = pi / 2;
  c.nx = c.ny = 16;
  c.q_per_axis = 6;
  c.n_levels = 20;
  c.volume_samples = 20000;
  c.render = false;
  c.output_dir = out.string();
  run_pipeline(c);
  const Json dyn = read_json(out / "dynamics.json");
  CHECK(dyn.at("volume_check").at("passed").get<bool>());
  fs::remove_all(out);
}

TEST_CASE("manifest lists every output with its hash") {
  const fs::path out = scratch("manifest");
  RunConfig c = small_shear(out);
  c.difflimit.enabled = false;
  const RunArtifacts a = run_pipeline(c);
  const Json& m = a.manifest;
  CHECK(m.at("complete").get<bool>());
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(out)) {
    const std::string n = e.path().filename().string();
    if (n == "manifest.json") continue;
    names.push_back(n);
    REQUIRE(m.at("files").contains(n));
    CHECK(m.at("files").at(n).at("sha256").get<std::string>() == sha256_file(e.path()));
  }
  CHECK(names.size() == m.at("files").size());
  std::vector<std::string> stages;
  for (const Json& s : m.at("stages")) {
    stages.push_back(s.at("stage").get<std::string>());
    CHECK(s.at("status") == "ok");
    CHECK(s.at("input_hash").get<std::string>().size() == 64);
  }
  CHECK(stages == std::vector<std::string>{"grid", "dynamics", "ulam", "dynlap", "spectral", "coherent"});
  for (const char* f : {"ulam_P.mtx", "operator.mtx", "eigenvector_2.csv", "contour_gamma.csv", "u2.png", "result.json"})
    CHECK(m.at("files").contains(f));
  fs::remove_all(out);
}

TEST_CASE("runs are reproducible byte for byte") {
  const fs::path a = scratch("rep_a"), b = scratch("rep_b");
  run_pipeline(small_shear(a));
  run_pipeline(small_shear(b));
  for (const char* f : {"result.json", "eigenvalues.json", "u2.png", "u2_image.png", "operator.mtx", "contour_gamma.csv"}) {
    CHECK_MESSAGE(slurp(a / f) == slurp(b / f), f);
  }
  const Json ma = read_json(a / "manifest.json"), mb = read_json(b / "manifest.json");
  // config.json records the output directory, everything else must match
  for (const auto& [name, h] : ma.at("files").items()) {
    if (name == "config.json") continue;
    CHECK(h == mb.at("files").at(name));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("a failing stage leaves a partial manifest") {
  const fs::path out = scratch("fail");
  RunConfig c = small_shear(out);
  c.nx = 4;
  c.ny = 4;
  c.k = 20;  // more eigenpairs than boxes
  try {
    run_pipeline(c);
    FAIL("expected the spectral stage to fail");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("stage spectral") != std::string::npos);
  }
  const Json m = read_json(out / "manifest.json");
  CHECK_FALSE(m.at("complete").get<bool>());
  CHECK(m.at("stages").back().at("stage") == "spectral");
  CHECK(m.at("stages").back().at("status").get<std::string>().rfind("failed", 0) == 0);
  CHECK(m.at("files").contains("operator.mtx"));
  CHECK_FALSE(m.at("files").contains("eigenvalues.json"));
  fs::remove_all(out);
}

TEST_CASE("render") {
  const Grid g(Domain::rectangle(1, 1), 2, 2);
  const Image flat = render_heatmap(ScalarField(g, 3.0), nullptr, 4);
  CHECK(flat.width == 8);
  CHECK(flat.height == 8);
  for (std::size_t y = 0; y < 8; ++y)
    for (std::size_t x = 0; x < 8; ++x) CHECK(flat.pixel(x, y) == diverging_color(0.5));

  // checkerboard: four uniform blocks, diagonal blocks equal, neighbours differ
  ScalarField cb(g);
  for (std::size_t k = 0; k < g.size(); ++k) cb[k] = (g.box(k).i + g.box(k).j) % 2 ? 1.0 : -1.0;
  const Image img = render_heatmap(cb, nullptr, 4);
  for (std::size_t y = 0; y < 8; ++y)
    for (std::size_t x = 0; x < 8; ++x) CHECK(img.pixel(x, y) == img.pixel(x / 4 * 4, y / 4 * 4));
  CHECK(img.pixel(0, 0) == img.pixel(4, 4));
  CHECK(img.pixel(0, 4) == img.pixel(4, 0));
  CHECK(img.pixel(0, 0) != img.pixel(4, 0));
  // top row first: the top-left block is box (0, 1), the maximum
  CHECK(img.pixel(0, 0) == diverging_color(1.0));
  CHECK(img.pixel(4, 0) == diverging_color(0.0));
}

TEST_CASE("render errors") {
  const Grid g(Domain::rectangle(1, 1), 2, 2);
  ScalarField f(g);
  f.values.clear();
  try {
    render_heatmap(f);
    FAIL("expected Render");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Render);
  }
  CHECK_THROWS_AS(write_png(scratch("png") / "e.png", Image{}), Error);
}

TEST_CASE("png bytes are deterministic") {
  const fs::path d = scratch("png2");
  const Grid g(Domain::torus(1, 1), 5, 3);
  const ScalarField f = ScalarField::sample(g, [](double x, double y) { return x - y; });
  write_png(d / "a.png", render_heatmap(f));
  write_png(d / "b.png", render_heatmap(f));
  const std::string a = slurp(d / "a.png");
  CHECK(a == slurp(d / "b.png"));
  CHECK(a.substr(1, 3) == "PNG");
  fs::remove_all(d);
}

TEST_CASE("matrix market round trip") {
  const fs::path d = scratch("mtx");
  SparseMatrix m(3, 4);
  m.insert(0, 0) = 0.1;
  m.insert(2, 3) = -1.0 / 3.0;
  m.insert(1, 2) = 1e-300;
  m.makeCompressed();
  write_matrix_market(d / "m.mtx", m);
  const SparseMatrix r = read_matrix_market(d / "m.mtx");
  CHECK(r.rows() == 3);
  CHECK(r.cols() == 4);
  CHECK(r.nonZeros() == 3);
  CHECK(r.coeff(0, 0) == 0.1);
  CHECK(r.coeff(2, 3) == -1.0 / 3.0);
  CHECK(r.coeff(1, 2) == 1e-300);
  CHECK(slurp(d / "m.mtx").rfind("%%MatrixMarket matrix coordinate real general", 0) == 0);

  std::ofstream(d / "bad.mtx") << "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n";
  CHECK_THROWS_AS(read_matrix_market(d / "bad.mtx"), Error);
  CHECK_THROWS_AS(read_matrix_market(d / "missing.mtx"), Error);
  fs::remove_all(d);
}

TEST_CASE("field and contour csv round trips") {
  const fs::path d = scratch("csv");
  const Grid g(Domain::rectangle(2, 1), 6, 3);
  const ScalarField f = ScalarField::sample(g, [](double x, double y) { return std::sin(x) / 7 + y; });
  write_field_csv(d / "f.csv", f);
  const ScalarField r = read_field_csv(d / "f.csv");
  CHECK(r.values == f.values);
  CHECK(r.grid.nx() == 6);
  CHECK(r.grid.ny() == 3);
  CHECK(r.grid.domain().x_min == Approx(0.0).scale(1.0));
  CHECK(r.grid.domain().x_max == Approx(2.0));
  CHECK(r.grid.domain().y_max == Approx(1.0));

  const Domain cyl = Domain::cylinder_x(4, 1);
  ContourSet c;
  c.level = 0.25;
  c.domain = cyl;
  c.curves.push_back(make_polyline(cyl, {{3.5, 0.1}, {3.9, 0.2}, {0.3, 0.3}}));
  c.curves.push_back(make_polyline(cyl, {{1, 0.5}, {2, 0.5}, {1.5, 0.9}}, true));
  write_contours_csv(d / "c.csv", c);
  const ContourSet rc = read_contours_csv(d / "c.csv", cyl);
  REQUIRE(rc.curves.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(rc.curves[i].points == c.curves[i].points);
    CHECK(rc.curves[i].wrap_x == c.curves[i].wrap_x);
    CHECK(rc.curves[i].wrap_y == c.curves[i].wrap_y);
  }
  CHECK(curve_length(rc) == Approx(curve_length(c)).epsilon(1e-12));
  fs::remove_all(d);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("command line") {
  const fs::path d = scratch("cmd");
  RunConfig c = small_shear(d / "run");
  c.render = false;
  write_json(d / "config.json", to_json(c));
  CHECK(run_cli("run " + (d / "config.json").string() + " --k 4 --levels 10") == 0);
  CHECK(read_json(d / "run" / "config.json").at("k") == 4);
  CHECK(read_json(d / "run" / "manifest.json").at("complete").get<bool>());

  CHECK(run_cli("render " + (d / "run" / "eigenvector_2.csv").string() + " " + (d / "run" / "contour_gamma.csv").string() +
                " --out " + (d / "u2.png").string()) == 0);
  CHECK(fs::file_size(d / "u2.png") > 0);

  CHECK(run_cli("") != 0);
  CHECK(run_cli("case-study lorenz") != 0);
  CHECK(run_cli("run " + (d / "missing.json").string()) != 0);
  write_json(d / "bad.json", Json::parse(R"({"dynamics": {"name": "lorenz"}})"));
  CHECK(run_cli("run " + (d / "bad.json").string()) == 2);
  fs::remove_all(d);
}
