#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "dynlap/coherent.hpp"
#include "dynlap/grid.hpp"

namespace dynlap {

struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, top row first

  std::array<std::uint8_t, 3> pixel(std::size_t x, std::size_t y) const {
    const std::size_t o = 3 * (y * width + x);
    return {rgb[o], rgb[o + 1], rgb[o + 2]};
  }
};

/// Diverging blue-white-red map of t in [0, 1].
std::array<std::uint8_t, 3> diverging_color(double t);

/// Heatmap of `f` with `pixels_per_box` square pixels per box (0 picks a size
/// near 512 pixels on the long side) and optional contours in black.
/// Throws Render for an empty grid.
Image render_heatmap(const ScalarField& f, const ContourSet* contours = nullptr, std::size_t pixels_per_box = 0);

/// 8-bit RGB PNG without timestamps, so equal images give equal bytes.
void write_png(const std::filesystem::path& path, const Image& img);

}  // namespace dynlap
