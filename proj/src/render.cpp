#include "dynlap/render.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dynlap {

std::array<std::uint8_t, 3> diverging_color(double t) {
  // ColorBrewer RdBu, reversed so low values are blue
  static constexpr std::array<std::array<double, 3>, 11> stops{{{5, 48, 97},
                                                                {33, 102, 172},
                                                                {67, 147, 195},
                                                                {146, 197, 222},
                                                                {209, 229, 240},
                                                                {247, 247, 247},
                                                                {253, 219, 199},
                                                                {244, 165, 130},
                                                                {214, 96, 77},
                                                                {178, 24, 43},
                                                                {103, 0, 31}}};
  if (!std::isfinite(t)) t = 0.5;
  t = std::clamp(t, 0.0, 1.0) * 10.0;
  const auto lo = std::min<std::size_t>(static_cast<std::size_t>(t), 9);
  const double w = t - static_cast<double>(lo);
  std::array<std::uint8_t, 3> c{};
  for (int k = 0; k < 3; ++k) {
    c[k] = static_cast<std::uint8_t>(std::lround((1.0 - w) * stops[lo][k] + w * stops[lo + 1][k]));
  }
  return c;
}

namespace {

void plot(Image& img, long x, long y) {
  if (x < 0 || y < 0 || x >= static_cast<long>(img.width) || y >= static_cast<long>(img.height)) return;
  const std::size_t o = 3 * (static_cast<std::size_t>(y) * img.width + static_cast<std::size_t>(x));
  img.rgb[o] = img.rgb[o + 1] = img.rgb[o + 2] = 0;
}

void line(Image& img, double x0, double y0, double x1, double y1) {
  // Bresenham on rounded endpoints
  long ax = std::lround(x0), ay = std::lround(y0);
  const long bx = std::lround(x1), by = std::lround(y1);
  const long dx = std::abs(bx - ax), dy = -std::abs(by - ay);
  const long sx = ax < bx ? 1 : -1, sy = ay < by ? 1 : -1;
  long err = dx + dy;
  for (;;) {
    plot(img, ax, ay);
    if (ax == bx && ay == by) break;
    const long e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      ax += sx;
    }
    if (e2 <= dx) {
      err += dx;
      ay += sy;
    }
  }
}

}  // namespace

Image render_heatmap(const ScalarField& f, const ContourSet* contours, std::size_t pixels_per_box) {
  const Grid& g = f.grid;
  if (g.size() == 0 || f.size() != g.size()) throw Error(ErrorKind::Render, "cannot render an empty field");
  if (pixels_per_box == 0) pixels_per_box = std::max<std::size_t>(1, 512 / std::max(g.nx(), g.ny()));
  Image img;
  img.width = g.nx() * pixels_per_box;
  img.height = g.ny() * pixels_per_box;
  img.rgb.assign(3 * img.width * img.height, 0);
  const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
  const double span = *hi - *lo;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto [i, j] = g.box(k);
    const auto c = diverging_color(span > 0.0 ? (f[k] - *lo) / span : 0.5);
    const std::size_t row0 = (g.ny() - 1 - j) * pixels_per_box;
    for (std::size_t r = row0; r < row0 + pixels_per_box; ++r) {
      for (std::size_t col = i * pixels_per_box; col < (i + 1) * pixels_per_box; ++col) {
        std::copy(c.begin(), c.end(), img.rgb.begin() + static_cast<std::ptrdiff_t>(3 * (r * img.width + col)));
      }
    }
  }
  if (contours) {
    const Domain& d = g.domain();
    const double sx = static_cast<double>(img.width) / d.width();
    const double sy = static_cast<double>(img.height) / d.height();
    auto px = [&](double x) { return (x - d.x_min) * sx - 0.5; };
    auto py = [&](double y) { return (d.y_max - y) * sy - 0.5; };
    for (const Polyline& p : contours->curves) {
      for (std::size_t v = 1; v < p.size(); ++v) {
        const Point a = p.points[v - 1], b = p.points[v];
        const double ox = p.wrap_x[v] * d.width(), oy = p.wrap_y[v] * d.height();
        // wrapped steps are drawn from both ends so each side of the seam gets its piece
        line(img, px(a.x), py(a.y), px(b.x + ox), py(b.y + oy));
        if (ox != 0.0 || oy != 0.0) line(img, px(a.x - ox), py(a.y - oy), px(b.x), py(b.y));
      }
    }
  }
  return img;
}

void write_png(const std::filesystem::path& path, const Image& img) {
  if (img.width == 0 || img.height == 0) throw Error(ErrorKind::Render, "cannot write an empty image");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw Error(ErrorKind::Io, "cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw Error(ErrorKind::Render, "libpng failed writing " + path.string());
  }
  png_init_io(png, fp);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t r = 0; r < img.height; ++r) {
    png_write_row(png, const_cast<png_bytep>(img.rgb.data() + 3 * r * img.width));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace dynlap
