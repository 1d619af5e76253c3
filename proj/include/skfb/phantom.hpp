#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "error.hpp"
#include "volume.hpp"

namespace skfb {

/// Additive ellipse in phantom coordinates [-1,1]^2 (x to the right, y up).
struct Ellipse {
  double intensity;
  double semi_a, semi_b;
  double x0, y0;
  double theta;  ///< radians, counter-clockwise

  bool contains(double x, double y) const {
    const double c = std::cos(theta), s = std::sin(theta);
    const double dx = x - x0, dy = y - y0;
    const double u = dx * c + dy * s;
    const double v = -dx * s + dy * c;
    return (u * u) / (semi_a * semi_a) + (v * v) / (semi_b * semi_b) <= 1.0;
  }
};

struct PhantomSpec {
  std::vector<Ellipse> ellipses;
  bool clip = true;  ///< clamp the summed intensity to [0,1]

  double value(double x, double y) const {
    double v = 0.0;
    for (const auto& e : ellipses)
      if (e.contains(x, y)) v += e.intensity;
    return clip ? std::clamp(v, 0.0, 1.0) : v;
  }
};

namespace detail {
inline constexpr double kDeg = M_PI / 180.0;

// {semi_a, semi_b, x0, y0, theta (deg)} of the ten Shepp-Logan ellipses.
inline constexpr std::array<std::array<double, 5>, 10> kSheppLoganGeometry = {{
    {0.69, 0.92, 0.0, 0.0, 0.0},
    {0.6624, 0.874, 0.0, -0.0184, 0.0},
    {0.11, 0.31, 0.22, 0.0, -18.0},
    {0.16, 0.41, -0.22, 0.0, 18.0},
    {0.21, 0.25, 0.0, 0.35, 0.0},
    {0.046, 0.046, 0.0, 0.1, 0.0},
    {0.046, 0.046, 0.0, -0.1, 0.0},
    {0.046, 0.023, -0.08, -0.605, 0.0},
    {0.023, 0.023, 0.0, -0.606, 0.0},
    {0.023, 0.046, 0.06, -0.605, 0.0},
}};

inline PhantomSpec make_shepp_logan(const std::array<double, 10>& intensities) {
  PhantomSpec spec;
  for (std::size_t i = 0; i < 10; ++i) {
    const auto& g = kSheppLoganGeometry[i];
    spec.ellipses.push_back({intensities[i], g[0], g[1], g[2], g[3], g[4] * kDeg});
  }
  return spec;
}
}  // namespace detail

/// Low-contrast (Toft) intensity table.
inline PhantomSpec modified_shepp_logan() {
  return detail::make_shepp_logan({1.0, -0.8, -0.2, -0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1});
}

/// Original high-contrast intensity table.
inline PhantomSpec original_shepp_logan() {
  return detail::make_shepp_logan({1.0, -0.98, -0.02, -0.02, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01});
}

/// Phantom coordinate of pixel centre `i` on an axis of `size` pixels.
inline double phantom_coordinate(std::size_t i, std::size_t size) {
  return (2.0 * static_cast<double>(i) + 1.0 - static_cast<double>(size)) /
         static_cast<double>(size);
}

/// Rasterises `spec` on a size x size grid; row 0 is the top (y = +1).
inline Volume shepp_logan_2d(std::size_t size, const PhantomSpec& spec = modified_shepp_logan()) {
  if (size < 8) throw ConfigError("shepp_logan_2d: size must be >= 8");
  Volume out({size, size}, 0.0, GridKind::CellCentered);
  for (std::size_t r = 0; r < size; ++r) {
    const double y = -phantom_coordinate(r, size);
    for (std::size_t c = 0; c < size; ++c) out.at(r, c) = spec.value(phantom_coordinate(c, size), y);
  }
  return out;
}

namespace detail {
/// Catmull-Rom weights for fractional offset t in [0,1) over taps -1, 0, 1, 2.
inline std::array<double, 4> catmull_rom(double t) {
  const double t2 = t * t, t3 = t2 * t;
  return {0.5 * (-t3 + 2.0 * t2 - t), 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
          0.5 * (-3.0 * t3 + 4.0 * t2 + t), 0.5 * (t3 - t2)};
}

struct ResampleTaps {
  std::array<std::size_t, 4> index;
  std::array<double, 4> weight;
};

inline std::vector<ResampleTaps> resample_taps(std::size_t in, std::size_t out) {
  std::vector<ResampleTaps> taps(out);
  const double scale = static_cast<double>(in) / static_cast<double>(out);
  const auto last = static_cast<std::ptrdiff_t>(in) - 1;
  for (std::size_t o = 0; o < out; ++o) {
    const double src = (static_cast<double>(o) + 0.5) * scale - 0.5;
    const double base = std::floor(src);
    const auto i0 = static_cast<std::ptrdiff_t>(base);
    taps[o].weight = catmull_rom(src - base);
    for (std::ptrdiff_t k = 0; k < 4; ++k)
      taps[o].index[static_cast<std::size_t>(k)] =
          static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i0 - 1 + k, 0, last));
  }
  return taps;
}
}  // namespace detail

/// Catmull-Rom bicubic resampling with pixel-centre alignment and clamp-to-edge taps.
inline Volume resize_bicubic(const Volume& img, std::size_t new_h, std::size_t new_w) {
  if (img.rank() != 2) throw DimensionError("resize_bicubic: expects a 2-D image");
  if (img.dim(0) < 4 || img.dim(1) < 4) throw DimensionError("resize_bicubic: source must be >= 4x4");
  if (new_h < 2 || new_w < 2) throw ConfigError("resize_bicubic: target must be >= 2 per axis");
  const auto rows = detail::resample_taps(img.dim(0), new_h);
  const auto cols = detail::resample_taps(img.dim(1), new_w);

  // Horizontal pass then vertical pass.
  Volume tmp({img.dim(0), new_w}, 0.0);
  for (std::size_t r = 0; r < img.dim(0); ++r)
    for (std::size_t c = 0; c < new_w; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 4; ++k) acc += cols[c].weight[k] * img.at(r, cols[c].index[k]);
      tmp.at(r, c) = acc;
    }
  Volume out({new_h, new_w}, 0.0, img.grid());
  for (std::size_t r = 0; r < new_h; ++r)
    for (std::size_t c = 0; c < new_w; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 4; ++k) acc += rows[r].weight[k] * tmp.at(rows[r].index[k], c);
      out.at(r, c) = acc;
    }
  return out;
}

/// `depth` identical copies of a 2-D slice along a new leading axis.
inline Volume stack_volume(const Volume& slice, std::size_t depth) {
  if (slice.rank() != 2) throw DimensionError("stack_volume: expects a 2-D slice");
  if (depth < 1) throw ConfigError("stack_volume: depth must be >= 1");
  std::vector<double> data;
  data.reserve(depth * slice.size());
  for (std::size_t d = 0; d < depth; ++d) data.insert(data.end(), slice.data().begin(), slice.data().end());
  return Volume({depth, slice.dim(0), slice.dim(1)}, std::move(data), slice.grid());
}

/// The six 20x20 windows on the 128x128 mid-slice, rows first.
inline std::vector<Roi> roi_catalog() {
  return {
      {"White Matter", 50, 70, 50, 70},
      {"Tumor", 30, 50, 80, 100},
      {"CSF", 10, 30, 10, 30},
      {"Liver Parenchyma", 70, 90, 30, 50},
      {"Kidney Edge", 80, 100, 90, 110},
      {"Aorta", 40, 60, 10, 30},
  };
}

struct PhantomVolumeOptions {
  std::size_t source_size = 400;  ///< raster size before resampling
  std::size_t size = 128;
  std::size_t depth = 64;
  bool original_contrast = false;
};

/// The resized slice: raster at source_size, bicubic resize to size x size, then
/// clip cubic overshoot back into the source value range.
inline Volume phantom_slice(const PhantomVolumeOptions& opt = {}) {
  const PhantomSpec spec = opt.original_contrast ? original_shepp_logan() : modified_shepp_logan();
  Volume slice = shepp_logan_2d(opt.source_size, spec);
  if (opt.size == opt.source_size) return slice;
  const auto [mn, mx] = std::minmax_element(slice.data().begin(), slice.data().end());
  const double lo = *mn, hi = *mx;
  Volume out = resize_bicubic(slice, opt.size, opt.size);
  for (double& x : out.data()) x = std::clamp(x, lo, hi);
  return out;
}

/// phantom_slice stacked to `depth` identical slices.
inline Volume phantom_volume(const PhantomVolumeOptions& opt = {}) {
  return stack_volume(phantom_slice(opt), opt.depth);
}

}  // namespace skfb
