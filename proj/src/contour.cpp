#include <array>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "dynlap/coherent.hpp"

namespace dynlap {

namespace {

int wrap_count(double delta, double period) { return static_cast<int>(-std::round(delta / period)); }

struct Lattice {
  std::size_t nx, ny;
  std::size_t cells_x, cells_y;
  bool px, py;
};

}  // namespace

std::size_t ContourSet::vertex_count() const {
  std::size_t n = 0;
  for (const auto& c : curves) n += c.size();
  return n;
}

Polyline make_polyline(const Domain& domain, const std::vector<Point>& points, bool closed) {
  Polyline out;
  out.closed = closed;
  for (std::size_t v = 0; v < points.size(); ++v) {
    const Point p = domain.wrap(points[v]);
    int wx = 0, wy = 0;
    if (v > 0) {
      const Point prev = out.points.back();
      if (domain.periodic_x) wx = wrap_count(p.x - prev.x, domain.width());
      if (domain.periodic_y) wy = wrap_count(p.y - prev.y, domain.height());
    }
    out.points.push_back(p);
    out.wrap_x.push_back(wx);
    out.wrap_y.push_back(wy);
  }
  return out;
}

ContourSet marching_squares(const ScalarField& f, double level) {
  const Grid& g = f.grid;
  const Domain& d = g.domain();
  ContourSet out;
  out.level = level;
  out.domain = d;

  Lattice L{g.nx(), g.ny(), 0, 0, d.periodic_x, d.periodic_y};
  L.cells_x = L.px ? (L.nx >= 2 ? L.nx : 0) : (L.nx >= 2 ? L.nx - 1 : 0);
  L.cells_y = L.py ? (L.ny >= 2 ? L.ny : 0) : (L.ny >= 2 ? L.ny - 1 : 0);
  if (L.cells_x == 0 || L.cells_y == 0) return out;

  const std::size_t n = g.size();
  auto above = [&](std::size_t i, std::size_t j) { return f[g.index(i % L.nx, j % L.ny)] > level; };
  auto value = [&](std::size_t i, std::size_t j) { return f[g.index(i % L.nx, j % L.ny)]; };

  // edge ids: horizontal H(i,j) = j*nx + i joins (i,j)-(i+1,j);
  // vertical V(i,j) = n + j*nx + i joins (i,j)-(i,j+1)
  auto h_id = [&](std::size_t i, std::size_t j) { return (j % L.ny) * L.nx + (i % L.nx); };
  auto v_id = [&](std::size_t i, std::size_t j) { return n + (j % L.ny) * L.nx + (i % L.nx); };

  constexpr std::uint32_t kNone = UINT32_MAX;
  std::vector<std::array<std::uint32_t, 2>> adj(2 * n, {kNone, kNone});
  auto link_one = [&](std::size_t a, std::size_t b) {
    auto& s = adj[a];
    if (s[0] == kNone) s[0] = static_cast<std::uint32_t>(b);
    else s[1] = static_cast<std::uint32_t>(b);
  };
  auto link = [&](std::size_t a, std::size_t b) {
    link_one(a, b);
    link_one(b, a);
  };

  for (std::size_t cj = 0; cj < L.cells_y; ++cj) {
    for (std::size_t ci = 0; ci < L.cells_x; ++ci) {
      const bool a = above(ci, cj), b = above(ci + 1, cj), c = above(ci + 1, cj + 1), dd = above(ci, cj + 1);
      const int code = int(a) | int(b) << 1 | int(c) << 2 | int(dd) << 3;
      if (code == 0 || code == 15) continue;
      const std::size_t bottom = h_id(ci, cj), right = v_id(ci + 1, cj);
      const std::size_t top = h_id(ci, cj + 1), left = v_id(ci, cj);
      if (code == 5 || code == 10) {
        const double center = 0.25 * (value(ci, cj) + value(ci + 1, cj) + value(ci + 1, cj + 1) + value(ci, cj + 1));
        const bool center_above = center > level;
        // isolate the corners whose class differs from the center
        const bool isolate_ac = (code == 5) != center_above;
        if (isolate_ac) {
          link(left, bottom);
          link(right, top);
        } else {
          link(bottom, right);
          link(top, left);
        }
        continue;
      }
      std::size_t ends[2];
      int m = 0;
      if (a != b) ends[m++] = bottom;
      if (b != c) ends[m++] = right;
      if (c != dd) ends[m++] = top;
      if (dd != a) ends[m++] = left;
      link(ends[0], ends[1]);
    }
  }

  auto vertex = [&](std::size_t id) -> Point {
    if (id < n) {
      const std::size_t i = id % L.nx, j = id / L.nx;
      const double fa = value(i, j), fb = value(i + 1, j);
      const double t = (level - fa) / (fb - fa);
      const Point c = g.center(i, j);
      return d.wrap({c.x + t * g.box_width(), c.y});
    }
    const std::size_t k = id - n;
    const std::size_t i = k % L.nx, j = k / L.nx;
    const double fa = value(i, j), fb = value(i, j + 1);
    const double t = (level - fa) / (fb - fa);
    const Point c = g.center(i, j);
    return d.wrap({c.x, c.y + t * g.box_height()});
  };

  // Open ends sit on the outermost lattice edges. The mirror closure makes the
  // normal derivative vanish at a wall, so the curve runs straight out to it.
  auto wall_point = [&](std::size_t id, Point p) -> std::optional<Point> {
    if (id < n) {
      const std::size_t j = id / L.nx;
      if (L.py) return std::nullopt;
      if (j == 0) return Point{p.x, d.y_min};
      if (j + 1 == L.ny) return Point{p.x, d.y_max};
      return std::nullopt;
    }
    const std::size_t i = (id - n) % L.nx;
    if (L.px) return std::nullopt;
    if (i == 0) return Point{d.x_min, p.y};
    if (i + 1 == L.nx) return Point{d.x_max, p.y};
    return std::nullopt;
  };

  std::vector<char> used(2 * n, 0);
  auto walk = [&](std::size_t start, bool closed) {
    std::vector<Point> pts;
    std::size_t prev = kNone, cur = start;
    if (!closed) {
      if (auto w = wall_point(start, vertex(start))) pts.push_back(*w);
    }
    for (;;) {
      used[cur] = 1;
      pts.push_back(vertex(cur));
      std::size_t next = kNone;
      for (std::uint32_t nb : adj[cur]) {
        if (nb != kNone && nb != prev && !used[nb]) {
          next = nb;
          break;
        }
      }
      if (next == kNone) break;
      prev = cur;
      cur = next;
    }
    if (!closed) {
      if (auto w = wall_point(cur, pts.back())) pts.push_back(*w);
    }
    if (closed && pts.size() > 1) pts.push_back(pts.front());
    out.curves.push_back(make_polyline(d, pts, closed && pts.size() > 2));
  };

  for (std::size_t id = 0; id < 2 * n; ++id) {
    if (!used[id] && adj[id][0] != kNone && adj[id][1] == kNone) walk(id, false);
  }
  for (std::size_t id = 0; id < 2 * n; ++id) {
    if (!used[id] && adj[id][0] != kNone) walk(id, true);
  }
  return out;
}

double curve_length(const Polyline& p, const Domain& domain) {
  double len = 0.0;
  for (std::size_t v = 1; v < p.points.size(); ++v) {
    const double dx = p.points[v].x - p.points[v - 1].x + p.wrap_x[v] * domain.width();
    const double dy = p.points[v].y - p.points[v - 1].y + p.wrap_y[v] * domain.height();
    len += std::hypot(dx, dy);
  }
  return len;
}

double curve_length(const ContourSet& c) {
  double len = 0.0;
  for (const Polyline& p : c.curves) len += curve_length(p, c.domain);
  return len;
}

namespace {

constexpr int kMaxBisections = 24;

struct Transporter {
  const FlowMap& map;
  const Domain& image;
  double max_step;

  double image_gap(Point a, Point b) const {
    const Point d = image.displacement(a, b);
    return std::hypot(d.x, d.y);
  }

  // Appends the images strictly after `qa` up to and including `qb`.
  void refine(Point ua, Point ub, Point qa, Point qb, int depth, std::vector<Point>& out) const {
    if (max_step > 0.0 && depth < kMaxBisections && image_gap(qa, qb) > max_step) {
      const Point um{0.5 * (ua.x + ub.x), 0.5 * (ua.y + ub.y)};
      const Point qm = apply(um);
      refine(ua, um, qa, qm, depth + 1, out);
      refine(um, ub, qm, qb, depth + 1, out);
      return;
    }
    out.push_back(qb);
  }

  Point apply(Point p) const {
    try {
      return map(map.source().wrap(p));
    } catch (const Error& e) {
      throw Error(ErrorKind::Transport,
                  "vertex (" + std::to_string(p.x) + ", " + std::to_string(p.y) + "): " + e.what());
    }
  }
};

}  // namespace

ContourSet transport_curve(const ContourSet& c, const FlowMap& map, double max_step) {
  if (!(c.domain == map.source())) throw Error(ErrorKind::Dimension, "contour does not live on the map's source");
  const Domain& src = c.domain;
  Transporter tr{map, map.image(), max_step};
  ContourSet out;
  out.level = c.level;
  out.domain = map.image();
  for (const Polyline& p : c.curves) {
    if (p.points.empty()) continue;
    std::vector<Point> images;
    Point ua = p.points.front();
    Point qa = tr.apply(ua);
    images.push_back(qa);
    for (std::size_t v = 1; v < p.points.size(); ++v) {
      const Point ub{ua.x + (p.points[v].x - p.points[v - 1].x) + p.wrap_x[v] * src.width(),
                     ua.y + (p.points[v].y - p.points[v - 1].y) + p.wrap_y[v] * src.height()};
      const Point qb = tr.apply(ub);
      tr.refine(ua, ub, qa, qb, 0, images);
      ua = ub;
      qa = qb;
    }
    out.curves.push_back(make_polyline(out.domain, images, p.closed));
  }
  return out;
}

ContourSet pushforward_contour(const TransitionMatrix& tm, const ScalarField& f, double level) {
  return marching_squares(pushforward(tm, f), level);
}

}  // namespace dynlap
