#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace skfb {

/// Placement of samples inside the unit cube.
///   NodeCentered: x_i = i / (dim - 1), both end points are samples.
///   CellCentered: x_i = (i + 0.5) / dim, one sample per cell of width 1/dim.
enum class GridKind { NodeCentered, CellCentered };

inline const char* to_string(GridKind g) {
  return g == GridKind::NodeCentered ? "node" : "cell";
}

/// Dense real-valued 1-, 2- or 3-D grid over [0,1]^d, row-major (last axis fastest).
class Volume {
 public:
  Volume() = default;

  explicit Volume(std::vector<std::size_t> dims, double fill = 0.0,
                  GridKind grid = GridKind::NodeCentered)
      : dims_(std::move(dims)), grid_(grid) {
    check_dims();
    data_.assign(count(dims_), fill);
    if (!std::isfinite(fill)) throw Error("Volume: non-finite fill value");
  }

  Volume(std::vector<std::size_t> dims, std::vector<double> data,
         GridKind grid = GridKind::NodeCentered)
      : dims_(std::move(dims)), data_(std::move(data)), grid_(grid) {
    check_dims();
    if (count(dims_) != data_.size())
      throw DimensionError("Volume: product(dims) != data length");
    for (double v : data_)
      if (!std::isfinite(v)) throw Error("Volume: non-finite sample");
  }

  std::size_t rank() const { return dims_.size(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim(std::size_t axis) const { return dims_.at(axis); }
  std::size_t size() const { return data_.size(); }
  GridKind grid() const { return grid_; }
  void set_grid(GridKind g) { grid_ = g; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double operator[](std::size_t flat) const { return data_[flat]; }
  double& operator[](std::size_t flat) { return data_[flat]; }

  /// Stride (in samples) of `axis`.
  std::size_t stride(std::size_t axis) const {
    std::size_t s = 1;
    for (std::size_t a = axis + 1; a < dims_.size(); ++a) s *= dims_[a];
    return s;
  }

  double at(std::size_t i) const { return data_[i]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * dims_[1] + j]; }
  double at(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }
  double& at(std::size_t i, std::size_t j) { return data_[i * dims_[1] + j]; }
  double& at(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }

  /// Domain coordinate of index i along `axis` under this volume's grid kind.
  double coordinate(std::size_t axis, std::size_t i) const {
    return grid_coordinate(i, dims_.at(axis), grid_);
  }

  static double grid_coordinate(std::size_t i, std::size_t n, GridKind g) {
    if (g == GridKind::CellCentered)
      return (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    if (n == 1) return 0.0;
    return static_cast<double>(i) / static_cast<double>(n - 1);
  }

  bool same_shape(const Volume& o) const { return dims_ == o.dims_; }

  friend bool operator==(const Volume& a, const Volume& b) {
    return a.dims_ == b.dims_ && a.data_ == b.data_;
  }

 private:
  static std::size_t count(const std::vector<std::size_t>& d) {
    return std::accumulate(d.begin(), d.end(), std::size_t{1}, std::multiplies<>());
  }
  void check_dims() const {
    if (dims_.empty() || dims_.size() > 3)
      throw DimensionError("Volume: rank must be 1, 2 or 3");
    for (auto d : dims_)
      if (d == 0) throw DimensionError("Volume: zero-length axis");
  }

  std::vector<std::size_t> dims_;
  std::vector<double> data_;
  GridKind grid_ = GridKind::NodeCentered;
};

/// Half-open index window [r0,r1) x [c0,c1) on a 2-D slice; rows are axis 0.
struct Roi {
  std::string name;
  std::size_t r0 = 0, r1 = 0;
  std::size_t c0 = 0, c1 = 0;

  std::size_t rows() const { return r1 - r0; }
  std::size_t cols() const { return c1 - c0; }
  bool fits(std::size_t height, std::size_t width) const {
    return r0 < r1 && r1 <= height && c0 < c1 && c1 <= width;
  }
};

/// A real function on [0,1]^arity. Points are passed as a span of `arity` coordinates.
struct AnalyticFn {
  std::size_t arity = 1;
  std::function<double(std::span<const double>)> eval;

  double operator()(std::span<const double> p) const { return eval(p); }
  double operator()(double x) const { return eval(std::span<const double>(&x, 1)); }
};

/// f(x) = prod_a sin(pi x_a) on [0,1]^d.
inline AnalyticFn sine_product(std::size_t arity) {
  return {arity, [](std::span<const double> p) {
            double v = 1.0;
            for (double x : p) v *= std::sin(M_PI * x);
            return v;
          }};
}

inline AnalyticFn constant_fn(std::size_t arity, double c) {
  return {arity, [c](std::span<const double>) { return c; }};
}

inline Volume sample_function(const AnalyticFn& f, const std::vector<std::size_t>& dims,
                              GridKind grid = GridKind::NodeCentered) {
  if (dims.size() != f.arity)
    throw DimensionError("sample_function: arity does not match number of axes");
  for (auto d : dims)
    if (d < 2) throw DimensionError("sample_function: each axis needs >= 2 samples");
  Volume out(dims, 0.0, grid);
  std::array<double, 3> p{};
  std::array<std::size_t, 3> idx{};
  const std::size_t rank = dims.size();
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t a = rank; a-- > 0;) {
      idx[a] = rem % dims[a];
      rem /= dims[a];
    }
    for (std::size_t a = 0; a < rank; ++a)
      p[a] = Volume::grid_coordinate(idx[a], dims[a], grid);
    double v = f(std::span<const double>(p.data(), rank));
    if (!std::isfinite(v)) throw Error("sample_function: function returned non-finite value");
    out[flat] = v;
  }
  return out;
}

inline Volume extract_roi(const Volume& slice, const Roi& roi) {
  if (slice.rank() != 2) throw DimensionError("extract_roi: expects a 2-D slice");
  if (!roi.fits(slice.dim(0), slice.dim(1)))
    throw BoundsError("extract_roi: window '" + roi.name + "' outside slice bounds");
  std::vector<double> out;
  out.reserve(roi.rows() * roi.cols());
  for (std::size_t r = roi.r0; r < roi.r1; ++r)
    for (std::size_t c = roi.c0; c < roi.c1; ++c) out.push_back(slice.at(r, c));
  return Volume({roi.rows(), roi.cols()}, std::move(out), slice.grid());
}

/// The 2-D slice volume[index, :, :].
inline Volume mid_slice(const Volume& vol, std::size_t index) {
  if (vol.rank() != 3) throw DimensionError("mid_slice: expects a 3-D volume");
  if (index >= vol.dim(0)) throw BoundsError("mid_slice: index out of range");
  const std::size_t plane = vol.dim(1) * vol.dim(2);
  auto first = vol.data().begin() + static_cast<std::ptrdiff_t>(index * plane);
  return Volume({vol.dim(1), vol.dim(2)},
                std::vector<double>(first, first + static_cast<std::ptrdiff_t>(plane)),
                vol.grid());
}

/// Grid-measure-normalised L^p distance: ((1/N) sum |a-b|^p)^(1/p), or max|a-b| when
/// p is infinite. Only p in {1, 2, inf} is accepted.
inline double lp_distance(const Volume& a, const Volume& b, double p) {
  if (!a.same_shape(b)) throw DimensionError("lp_distance: shape mismatch");
  const auto x = a.data();
  const auto y = b.data();
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
  }
  if (p != 1.0 && p != 2.0) throw ConfigError("lp_distance: p must be 1, 2 or inf");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = std::abs(x[i] - y[i]);
    s += p == 1.0 ? d : d * d;
  }
  s /= static_cast<double>(x.size());
  return p == 1.0 ? s : std::sqrt(s);
}

}  // namespace skfb
