#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "boundary.hpp"
#include "error.hpp"
#include "kernels.hpp"
#include "volume.hpp"

namespace skfb {

struct BilateralParams {
  double sigma_spatial = 1.0;  ///< grid-index units
  double sigma_range = 0.05;   ///< intensity units

  void validate() const {
    if (!(sigma_spatial > 0.0) || !(sigma_range > 0.0))
      throw ConfigError("bilateral: sigma_spatial and sigma_range must be positive");
  }
};

namespace detail {

/// Applies `stencil` along one axis of `in`, writing into `out` (same shape).
inline void convolve_axis(const Volume& in, Volume& out, std::size_t axis,
                          const DiscreteStencil& stencil, Boundary b) {
  const std::size_t n = in.dim(axis);
  const std::size_t stride = in.stride(axis);
  const std::size_t outer = in.size() / (n * stride);
  const auto K = static_cast<std::ptrdiff_t>(stencil.half_width);
  const auto N = static_cast<std::ptrdiff_t>(n);
  const auto src = in.data();
  auto dst = out.data();
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < stride; ++s) {
      const std::size_t base = o * n * stride + s;
      auto get = [&](std::ptrdiff_t i) { return src[base + static_cast<std::size_t>(i) * stride]; };
      for (std::ptrdiff_t i = 0; i < N; ++i) {
        double acc = 0.0;
        if (i - K >= 0 && i + K < N) {
          for (std::ptrdiff_t k = -K; k <= K; ++k) acc += stencil[k] * get(i - k);
        } else {
          for (std::ptrdiff_t k = -K; k <= K; ++k) acc += stencil[k] * extended(get, i - k, N, b);
        }
        dst[base + static_cast<std::size_t>(i) * stride] = acc;
      }
    }
  }
}

inline std::array<std::ptrdiff_t, 3> unflatten(std::size_t flat, const Volume& v) {
  std::array<std::ptrdiff_t, 3> idx{};
  for (std::size_t a = v.rank(); a-- > 0;) {
    idx[a] = static_cast<std::ptrdiff_t>(flat % v.dim(a));
    flat /= v.dim(a);
  }
  return idx;
}

}  // namespace detail

/// Separable discrete Gaussian: the truncated, renormalised stencil applied along each axis.
inline Volume gaussian_filter(const Volume& v, double sigma, Boundary b = Boundary::Reflect) {
  const DiscreteStencil stencil = discrete_gaussian_stencil(sigma);
  Volume cur = v;
  Volume next = v;
  for (std::size_t axis = 0; axis < v.rank(); ++axis) {
    detail::convolve_axis(cur, next, axis, stencil, b);
    std::swap(cur, next);
  }
  return cur;
}

inline Volume iterated_gaussian(const Volume& v, double sigma, int iterations,
                                Boundary b = Boundary::Reflect) {
  if (iterations < 1) throw ConfigError("iterated_gaussian: iterations must be >= 1");
  Volume out = gaussian_filter(v, sigma, b);
  for (int it = 1; it < iterations; ++it) out = gaussian_filter(out, sigma, b);
  return out;
}

/// Bilateral filter over the full (2K+1)^d window, K = max(floor(3 sigma_s), 1).
/// Spatial weight uses the squared Euclidean offset; range weight compares against
/// the centre sample.
inline Volume bilateral_filter(const Volume& v, const BilateralParams& p,
                               Boundary b = Boundary::Reflect) {
  p.validate();
  const std::size_t rank = v.rank();
  const auto K = static_cast<std::ptrdiff_t>(gaussian_half_width(p.sigma_spatial));

  struct Offset {
    std::array<std::ptrdiff_t, 3> d;
    std::ptrdiff_t flat;
    double spatial;
  };
  std::vector<Offset> window;
  const std::ptrdiff_t span0 = 2 * K + 1;
  const std::ptrdiff_t count = rank == 1 ? span0 : rank == 2 ? span0 * span0 : span0 * span0 * span0;
  window.reserve(static_cast<std::size_t>(count));
  for (std::ptrdiff_t c = 0; c < count; ++c) {
    Offset o{{0, 0, 0}, 0, 0.0};
    std::ptrdiff_t rem = c;
    double r2 = 0.0;
    for (std::size_t a = rank; a-- > 0;) {
      o.d[a] = rem % span0 - K;
      rem /= span0;
      r2 += static_cast<double>(o.d[a] * o.d[a]);
    }
    for (std::size_t a = 0; a < rank; ++a)
      o.flat = o.flat * static_cast<std::ptrdiff_t>(v.dim(a)) + o.d[a];
    o.spatial = std::exp(-r2 / (2.0 * p.sigma_spatial * p.sigma_spatial));
    window.push_back(o);
  }

  const double inv_two_sr2 = 1.0 / (2.0 * p.sigma_range * p.sigma_range);
  Volume out(v.dims(), 0.0, v.grid());
  const auto src = v.data();
  for (std::size_t flat = 0; flat < v.size(); ++flat) {
    const auto idx = detail::unflatten(flat, v);
    bool interior = true;
    for (std::size_t a = 0; a < rank; ++a)
      interior = interior && idx[a] - K >= 0 && idx[a] + K < static_cast<std::ptrdiff_t>(v.dim(a));
    const double centre = src[flat];
    double num = 0.0, den = 0.0;
    for (const auto& o : window) {
      double q;
      if (interior) {
        q = src[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(flat) + o.flat)];
      } else {
        auto at = idx;
        for (std::size_t a = 0; a < rank; ++a) at[a] += o.d[a];
        q = detail::extended_at(v, at, b);
      }
      const double diff = centre - q;
      const double w = o.spatial * std::exp(-diff * diff * inv_two_sr2);
      num += w * q;
      den += w;
    }
    out[flat] = num / den;
  }
  return out;
}

/// Points at which an operator is evaluated: the lattice of a `dims`-shaped volume
/// laid out per `grid`.
/// When `coords` is non-empty it lists the coordinates per axis explicitly (tensor
/// product; coords[a].size() must equal dims[a]).
struct EvalGrid {
  std::vector<std::size_t> dims;
  GridKind grid = GridKind::NodeCentered;
  std::vector<std::vector<double>> coords{};

  static EvalGrid point(std::span<const double> x) {
    EvalGrid g;
    for (double c : x) {
      g.dims.push_back(1);
      g.coords.push_back({c});
    }
    return g;
  }

  double coordinate(std::size_t axis, std::size_t i) const {
    return coords.empty() ? Volume::grid_coordinate(i, dims[axis], grid) : coords[axis][i];
  }
};

namespace detail {

/// Non-zero kernel taps (cell index, weight) for one coordinate.
struct Taps {
  std::vector<std::ptrdiff_t> index;
  std::vector<double> weight;
};

/// Taps of k(n x - j - shift) over all integers j.
inline Taps kernel_taps(const Kernel& k, double n, double x, double shift) {
  Taps t;
  const double u = n * x - shift;
  const double r = k.effective_radius();
  const auto lo = static_cast<std::ptrdiff_t>(std::floor(u - r)) - 1;
  const auto hi = static_cast<std::ptrdiff_t>(std::ceil(u + r)) + 1;
  for (std::ptrdiff_t j = lo; j <= hi; ++j) {
    const double w = k(u - static_cast<double>(j));
    if (w != 0.0) {
      t.index.push_back(j);
      t.weight.push_back(w);
    }
  }
  return t;
}

/// Tensor-product evaluation: out(x) = sum over taps prod_a w_a * cell(j_0, .., j_{d-1}).
template <class CellValue>
Volume tensor_evaluate(const EvalGrid& eval, const std::vector<std::vector<Taps>>& taps,
                       const CellValue& cell) {
  Volume out(eval.dims, 0.0, eval.grid);
  const std::size_t rank = eval.dims.size();
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    const auto idx = unflatten(flat, out);
    const Taps& t0 = taps[0][static_cast<std::size_t>(idx[0])];
    double acc = 0.0;
    if (rank == 1) {
      for (std::size_t a = 0; a < t0.index.size(); ++a) acc += t0.weight[a] * cell({t0.index[a], 0, 0});
    } else if (rank == 2) {
      const Taps& t1 = taps[1][static_cast<std::size_t>(idx[1])];
      for (std::size_t a = 0; a < t0.index.size(); ++a) {
        double row = 0.0;
        for (std::size_t c = 0; c < t1.index.size(); ++c)
          row += t1.weight[c] * cell({t0.index[a], t1.index[c], 0});
        acc += t0.weight[a] * row;
      }
    } else {
      const Taps& t1 = taps[1][static_cast<std::size_t>(idx[1])];
      const Taps& t2 = taps[2][static_cast<std::size_t>(idx[2])];
      for (std::size_t a = 0; a < t0.index.size(); ++a) {
        double plane = 0.0;
        for (std::size_t c = 0; c < t1.index.size(); ++c) {
          double row = 0.0;
          for (std::size_t e = 0; e < t2.index.size(); ++e)
            row += t2.weight[e] * cell({t0.index[a], t1.index[c], t2.index[e]});
          plane += t1.weight[c] * row;
        }
        acc += t0.weight[a] * plane;
      }
    }
    out[flat] = acc;
  }
  return out;
}

inline std::vector<std::vector<Taps>> grid_taps(const EvalGrid& eval, const Kernel& k, double n,
                                                double shift) {
  if (!eval.coords.empty()) {
    if (eval.coords.size() != eval.dims.size()) throw DimensionError("EvalGrid: coords/dims rank mismatch");
    for (std::size_t a = 0; a < eval.dims.size(); ++a)
      if (eval.coords[a].size() != eval.dims[a]) throw DimensionError("EvalGrid: coords/dims size mismatch");
  }
  std::vector<std::vector<Taps>> taps(eval.dims.size());
  for (std::size_t a = 0; a < eval.dims.size(); ++a)
    for (std::size_t i = 0; i < eval.dims[a]; ++i)
      taps[a].push_back(kernel_taps(k, n, eval.coordinate(a, i), shift));
  return taps;
}

// 4-point Gauss-Legendre on [-1, 1].
inline constexpr std::array<double, 4> kGaussNodes = {
    -0.86113631159405257522, -0.33998104358485626480, 0.33998104358485626480,
    0.86113631159405257522};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.34785484513745385737, 0.65214515486254614263, 0.65214515486254614263,
    0.34785484513745385737};

/// Mean of f over the cell prod_a [j_a/n, (j_a+1)/n) by tensor Gauss-Legendre.
inline double cell_mean(const AnalyticFn& f, std::array<std::ptrdiff_t, 3> j, double n) {
  const std::size_t rank = f.arity;
  const double h = 1.0 / n;
  std::array<double, 3> p{};
  double acc = 0.0;
  const std::size_t total = rank == 1 ? 4 : rank == 2 ? 16 : 64;
  for (std::size_t q = 0; q < total; ++q) {
    std::size_t rem = q;
    double w = 1.0;
    for (std::size_t a = 0; a < rank; ++a) {
      const std::size_t g = rem % 4;
      rem /= 4;
      p[a] = (static_cast<double>(j[a]) + 0.5 + 0.5 * kGaussNodes[g]) * h;
      w *= 0.5 * kGaussWeights[g];
    }
    acc += w * f(std::span<const double>(p.data(), rank));
  }
  return acc;
}

}  // namespace detail

/// Sampling-Kantorovich operator on an analytic function:
///   S_n f(x) = sum_j prod_a k(n x_a - j_a - 1/2) * (n^d * integral of f over cell j)
/// with cell j = prod_a [j_a/n, (j_a+1)/n). The kernel is centred on each cell's
/// midpoint; f is evaluated by its formula wherever a cell leaves [0,1]^d.
inline Volume sk_cell_average(const AnalyticFn& f, int n, const Kernel& k, const EvalGrid& eval) {
  if (n < 1) throw ConfigError("sk_cell_average: n must be >= 1");
  if (eval.dims.size() != f.arity) throw DimensionError("sk_cell_average: arity mismatch");
  const double nn = static_cast<double>(n);
  const auto taps = detail::grid_taps(eval, k, nn, 0.5);

  // Cache cell means over the box of cells that any tap touches.
  const std::size_t rank = f.arity;
  std::array<std::ptrdiff_t, 3> lo{0, 0, 0}, ext{1, 1, 1};
  for (std::size_t a = 0; a < rank; ++a) {
    std::ptrdiff_t mn = 0, mx = 0;
    bool first = true;
    for (const auto& t : taps[a])
      for (auto j : t.index) {
        mn = first ? j : std::min(mn, j);
        mx = first ? j : std::max(mx, j);
        first = false;
      }
    lo[a] = mn;
    ext[a] = first ? 1 : mx - mn + 1;
  }
  std::vector<double> means(static_cast<std::size_t>(ext[0] * ext[1] * ext[2]));
  for (std::ptrdiff_t a = 0; a < ext[0]; ++a)
    for (std::ptrdiff_t b = 0; b < ext[1]; ++b)
      for (std::ptrdiff_t c = 0; c < ext[2]; ++c)
        means[static_cast<std::size_t>((a * ext[1] + b) * ext[2] + c)] =
            detail::cell_mean(f, {lo[0] + a, lo[1] + b, lo[2] + c}, nn);

  return detail::tensor_evaluate(eval, taps, [&](std::array<std::ptrdiff_t, 3> j) {
    return means[static_cast<std::size_t>(((j[0] - lo[0]) * ext[1] + (j[1] - lo[1])) * ext[2] +
                                          (j[2] - lo[2]))];
  });
}

/// Sampling-Kantorovich operator on a cell-centred volume with n cells per axis.
/// Each sample is the cell mean (midpoint rule); cells outside the grid are
/// supplied by `b`.
inline Volume sk_cell_average(const Volume& v, int n, const Kernel& k, const EvalGrid& eval,
                              Boundary b = Boundary::Reflect) {
  if (n < 1) throw ConfigError("sk_cell_average: n must be >= 1");
  if (eval.dims.size() != v.rank()) throw DimensionError("sk_cell_average: rank mismatch");
  for (std::size_t a = 0; a < v.rank(); ++a)
    if (v.dim(a) != static_cast<std::size_t>(n))
      throw DimensionError("sk_cell_average: volume must have n cells per axis");
  const auto taps = detail::grid_taps(eval, k, static_cast<double>(n), 0.5);
  return detail::tensor_evaluate(eval, taps, [&](std::array<std::ptrdiff_t, 3> j) {
    return detail::extended_at(v, j, b);
  });
}

/// Point-sample quasi-interpolant on the (n+1)^d node lattice:
///   K_n f(x) = sum_{i in [0,n]^d} f(i/n) prod_a k(n x_a - i_a).
/// Terms with lattice index outside [0, n] do not exist; near the boundary the
/// compact kernels lose part of their unit sum.
inline Volume sk_point_sample(const Volume& samples, int n, const Kernel& k, const EvalGrid& eval) {
  if (n < 1) throw ConfigError("sk_point_sample: n must be >= 1");
  if (eval.dims.size() != samples.rank()) throw DimensionError("sk_point_sample: rank mismatch");
  for (std::size_t a = 0; a < samples.rank(); ++a)
    if (samples.dim(a) != static_cast<std::size_t>(n) + 1)
      throw DimensionError("sk_point_sample: samples must lie on the (n+1)^d node lattice");
  auto taps = detail::grid_taps(eval, k, static_cast<double>(n), 0.0);
  for (auto& axis : taps)
    for (auto& t : axis) {
      detail::Taps kept;
      for (std::size_t q = 0; q < t.index.size(); ++q)
        if (t.index[q] >= 0 && t.index[q] <= n) {
          kept.index.push_back(t.index[q]);
          kept.weight.push_back(t.weight[q]);
        }
      t = std::move(kept);
    }
  return detail::tensor_evaluate(eval, taps, [&](std::array<std::ptrdiff_t, 3> i) {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < samples.rank(); ++a)
      flat = flat * samples.dim(a) + static_cast<std::size_t>(i[a]);
    return samples[flat];
  });
}

/// |approx - reference| elementwise.
inline Volume pointwise_error(const Volume& approx, const Volume& reference) {
  if (!approx.same_shape(reference)) throw DimensionError("pointwise_error: shape mismatch");
  Volume out(approx.dims(), 0.0, approx.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(approx[i] - reference[i]);
  return out;
}

}  // namespace skfb
