#include "dynlap/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>

namespace dynlap {

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  return in;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s, const fs::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() && s.find_first_not_of(" \r\t", used) != std::string::npos) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
  }
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

void write_matrix_market(const fs::path& path, const SparseMatrix& m) {
  std::ofstream out = open_out(path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << fmt(it.value()) << '\n';
    }
  }
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

SparseMatrix read_matrix_market(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0) {
    throw Error(ErrorKind::Parse, path.string() + ": missing MatrixMarket banner");
  }
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (object != "matrix" || format != "coordinate" || field != "real" || symmetry != "general") {
    throw Error(ErrorKind::Parse, path.string() + ": only 'matrix coordinate real general' is supported");
  }
  std::size_t lineno = 1;
  do {
    if (!std::getline(in, line)) throw Error(ErrorKind::Parse, path.string() + ": missing size line");
    ++lineno;
  } while (line.empty() || line[0] == '%');
  long rows = 0, cols = 0, nnz = 0;
  if (std::sscanf(line.c_str(), "%ld %ld %ld", &rows, &cols, &nnz) != 3 || rows < 0 || cols < 0 || nnz < 0) {
    throw Error(ErrorKind::Parse, path.string() + ": bad size line");
  }
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(nnz));
  for (long k = 0; k < nnz; ++k) {
    if (!std::getline(in, line)) throw Error(ErrorKind::Parse, path.string() + ": truncated entry list");
    ++lineno;
    long r = 0, c = 0;
    double v = 0.0;
    if (std::sscanf(line.c_str(), "%ld %ld %lf", &r, &c, &v) != 3 || r < 1 || r > rows || c < 1 || c > cols) {
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) + ": bad entry");
    }
    trips.emplace_back(r - 1, c - 1, v);
  }
  SparseMatrix m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

Json to_json(const Domain& d) {
  return {{"x_min", d.x_min},     {"x_max", d.x_max},           {"y_min", d.y_min},
          {"y_max", d.y_max},     {"periodic_x", d.periodic_x}, {"periodic_y", d.periodic_y}};
}

Domain domain_from_json(const Json& j) {
  Domain d;
  d.x_min = j.value("x_min", 0.0);
  d.x_max = j.at("x_max").get<double>();
  d.y_min = j.value("y_min", 0.0);
  d.y_max = j.at("y_max").get<double>();
  d.periodic_x = j.value("periodic_x", false);
  d.periodic_y = j.value("periodic_y", false);
  d.validate();
  return d;
}

Json to_json(const Grid& g) { return {{"domain", to_json(g.domain())}, {"nx", g.nx()}, {"ny", g.ny()}}; }

Grid grid_from_json(const Json& j) {
  return Grid(domain_from_json(j.at("domain")), j.at("nx").get<std::size_t>(), j.at("ny").get<std::size_t>());
}

Json sidecar(const TransitionMatrix& tm) {
  return {{"kind", "ulam_transition"},
          {"source_grid", to_json(tm.source)},
          {"image_grid", to_json(tm.image)},
          {"fingerprint", tm.fingerprint},
          {"q_per_axis", tm.q_per_axis}};
}

Json sidecar(const DiscreteOperator& op) {
  return {{"kind", to_string(op.kind)},
          {"grid", to_json(op.grid)},
          {"fingerprint", op.fingerprint},
          {"q_per_axis", op.q_per_axis}};
}

Json to_json(const Spectrum& s) {
  Json j;
  j["eigenvalues"] = s.eigenvalues;
  j["imaginary_parts"] = s.imaginary_parts;
  j["residuals"] = s.residuals;
  j["operator_norm"] = s.operator_norm;
  j["iterations"] = s.iterations;
  j["method"] = s.method_used == EigenMethod::Dense ? "dense" : "iterative";
  return j;
}

Json to_json(const CoherentSetResult& r) {
  return {{"level", r.level},
          {"hD", r.hD},
          {"len_gamma", r.len_gamma},
          {"len_image", r.len_image},
          {"vol1", r.vol1},
          {"vol2", r.vol2},
          {"sobolev_bound", finite_or_null(r.sobolev_bound)},
          {"cheeger_bound", finite_or_null(r.cheeger_bound)}};
}

Json to_json(const LimitReport& r) {
  Json samples = Json::array();
  for (const LimitSample& s : r.samples) {
    samples.push_back({{"eps", s.eps}, {"residual", s.residual}, {"ratio", s.ratio}});
  }
  return {{"samples", samples},
          {"strictly_decreasing", r.strictly_decreasing},
          {"mean_order", r.mean_order},
          {"order_threshold", r.order_threshold},
          {"passed", r.passed}};
}

void write_field_csv(const fs::path& path, const ScalarField& f) {
  std::ofstream out = open_out(path);
  out << "i,j,x,y,value\n";
  const Grid& g = f.grid;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto [i, j] = g.box(k);
    const Point c = g.center(k);
    out << i << ',' << j << ',' << fmt(c.x) << ',' << fmt(c.y) << ',' << fmt(f[k]) << '\n';
  }
}

ScalarField read_field_csv(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("i,j,x,y,value", 0) != 0) {
    throw Error(ErrorKind::Parse, path.string() + ": expected header i,j,x,y,value");
  }
  struct Row {
    std::size_t i, j;
    double x, y, v;
  };
  std::vector<Row> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != 5) throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) + ": need 5 columns");
    const double i = parse_double(cells[0], path, lineno), j = parse_double(cells[1], path, lineno);
    if (i < 0 || j < 0 || i != std::floor(i) || j != std::floor(j)) {
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) + ": bad box index");
    }
    rows.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), parse_double(cells[2], path, lineno),
                    parse_double(cells[3], path, lineno), parse_double(cells[4], path, lineno)});
  }
  if (rows.empty()) throw Error(ErrorKind::Parse, path.string() + ": no data rows");
  std::size_t nx = 0, ny = 0;
  for (const Row& r : rows) {
    nx = std::max(nx, r.i + 1);
    ny = std::max(ny, r.j + 1);
  }
  if (rows.size() != nx * ny) throw Error(ErrorKind::Parse, path.string() + ": rows do not form a full grid");
  // box size from the spread of centers; a single row/column is taken as unit-sized
  double x_lo = rows[0].x, x_hi = rows[0].x, y_lo = rows[0].y, y_hi = rows[0].y;
  for (const Row& r : rows) {
    x_lo = std::min(x_lo, r.x);
    x_hi = std::max(x_hi, r.x);
    y_lo = std::min(y_lo, r.y);
    y_hi = std::max(y_hi, r.y);
  }
  const double bw = nx > 1 ? (x_hi - x_lo) / static_cast<double>(nx - 1) : 1.0;
  const double bh = ny > 1 ? (y_hi - y_lo) / static_cast<double>(ny - 1) : 1.0;
  Domain d{x_lo - 0.5 * bw, x_hi + 0.5 * bw, y_lo - 0.5 * bh, y_hi + 0.5 * bh, false, false};
  ScalarField f(Grid(d, nx, ny));
  std::vector<bool> seen(nx * ny, false);
  for (const Row& r : rows) {
    const std::size_t k = r.j * nx + r.i;
    if (seen[k]) throw Error(ErrorKind::Parse, path.string() + ": duplicate box " + std::to_string(k));
    seen[k] = true;
    f[k] = r.v;
  }
  return f;
}

void write_contours_csv(const fs::path& path, const ContourSet& c) {
  std::ofstream out = open_out(path);
  out << "curve_id,vertex_id,x,y,wrap_x,wrap_y\n";
  for (std::size_t id = 0; id < c.curves.size(); ++id) {
    const Polyline& p = c.curves[id];
    for (std::size_t v = 0; v < p.size(); ++v) {
      out << id << ',' << v << ',' << fmt(p.points[v].x) << ',' << fmt(p.points[v].y) << ',' << p.wrap_x[v] << ','
          << p.wrap_y[v] << '\n';
    }
  }
}

ContourSet read_contours_csv(const fs::path& path, const Domain& domain) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("curve_id,vertex_id,x,y,wrap_x,wrap_y", 0) != 0) {
    throw Error(ErrorKind::Parse, path.string() + ": expected header curve_id,vertex_id,x,y,wrap_x,wrap_y");
  }
  ContourSet out;
  out.domain = domain;
  std::map<long, Polyline> curves;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (cells.size() != 6) throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) + ": need 6 columns");
    Polyline& p = curves[static_cast<long>(parse_double(cells[0], path, lineno))];
    p.points.push_back({parse_double(cells[2], path, lineno), parse_double(cells[3], path, lineno)});
    p.wrap_x.push_back(static_cast<int>(parse_double(cells[4], path, lineno)));
    p.wrap_y.push_back(static_cast<int>(parse_double(cells[5], path, lineno)));
  }
  for (auto& [id, p] : curves) {
    (void)id;
    p.closed = p.size() > 2 && p.points.front() == p.points.back();
    out.curves.push_back(std::move(p));
  }
  return out;
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

Json read_json(const fs::path& path) {
  std::ifstream in = open_in(path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

namespace {

std::string hex_digest(EVP_MD_CTX* ctx) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

using MdCtx = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

}  // namespace

std::string sha256_hex(const std::string& data) {
  MdCtx ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  EVP_DigestUpdate(ctx.get(), data.data(), data.size());
  return hex_digest(ctx.get());
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in = open_in(path);
  MdCtx ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return hex_digest(ctx.get());
}

}  // namespace dynlap
