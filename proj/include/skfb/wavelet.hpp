#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "error.hpp"
#include "volume.hpp"

namespace skfb {

/// Orthonormal two-channel filter bank. The highpass is the quadrature mirror
/// g[k] = (-1)^k h[L-1-k] of the lowpass.
class WaveletFamily {
 public:
  enum class Kind { Haar, Daubechies4 };

  static WaveletFamily haar() {
    const double s = 1.0 / std::sqrt(2.0);
    return WaveletFamily(Kind::Haar, {s, s});
  }

  /// Four-tap Daubechies filter (two vanishing moments).
  static WaveletFamily daubechies4() {
    const double r3 = std::sqrt(3.0);
    const double d = 4.0 * std::sqrt(2.0);
    return WaveletFamily(Kind::Daubechies4,
                         {(1.0 + r3) / d, (3.0 + r3) / d, (3.0 - r3) / d, (1.0 - r3) / d});
  }

  static WaveletFamily parse(const std::string& s) {
    if (s == "haar") return haar();
    if (s == "db4") return daubechies4();
    throw ConfigError("wavelet: unknown family '" + s + "' (expected haar or db4)");
  }

  Kind kind() const { return kind_; }
  std::string name() const { return kind_ == Kind::Haar ? "haar" : "db4"; }
  const std::vector<double>& lowpass() const { return h_; }
  const std::vector<double>& highpass() const { return g_; }

 private:
  WaveletFamily(Kind k, std::vector<double> h) : kind_(k), h_(std::move(h)) {
    const std::size_t L = h_.size();
    g_.resize(L);
    for (std::size_t k2 = 0; k2 < L; ++k2) g_[k2] = (k2 % 2 == 0 ? 1.0 : -1.0) * h_[L - 1 - k2];
  }

  Kind kind_;
  std::vector<double> h_, g_;
};

/// Multilevel pyramid. details[j-1] holds level j (j = 1 is the finest) keyed by
/// orientation label: one character per axis, 'L' or 'H' for the filter applied
/// along that axis. The all-'L' band of the coarsest level is `approx`.
struct WaveletDecomposition {
  int levels = 0;
  std::vector<std::size_t> shape;  ///< shape of the transformed signal
  Volume approx;
  std::vector<std::map<std::string, Volume>> details;

  std::size_t coefficient_count() const {
    std::size_t n = approx.size();
    for (const auto& lvl : details)
      for (const auto& [label, band] : lvl) n += band.size();
    return n;
  }

  double energy() const {
    double e = 0.0;
    for (double x : approx.data()) e += x * x;
    for (const auto& lvl : details)
      for (const auto& [label, band] : lvl)
        for (double x : band.data()) e += x * x;
    return e;
  }
};

/// Detail orientation labels for a rank: H; HL LH HH; the seven non-LLL triples.
inline std::vector<std::string> orientation_labels(std::size_t rank) {
  std::vector<std::string> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << rank); ++mask) {
    std::string s(rank, 'L');
    for (std::size_t a = 0; a < rank; ++a)
      if (mask & (std::size_t{1} << (rank - 1 - a))) s[a] = 'H';
    out.push_back(s);
  }
  return out;
}

namespace detail {

/// Splits `in` along `axis` into periodised lowpass and highpass halves.
inline void analyse_axis(const Volume& in, std::size_t axis, const WaveletFamily& fam, Volume& lo,
                         Volume& hi) {
  const std::size_t n = in.dim(axis);
  auto half = in.dims();
  half[axis] = n / 2;
  lo = Volume(half, 0.0);
  hi = Volume(half, 0.0);
  const std::size_t stride = in.stride(axis);
  const std::size_t outer = in.size() / (n * stride);
  const auto& h = fam.lowpass();
  const auto& g = fam.highpass();
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t s = 0; s < stride; ++s) {
      const std::size_t ib = o * n * stride + s;
      const std::size_t ob = o * (n / 2) * stride + s;
      for (std::size_t i = 0; i < n / 2; ++i) {
        double a = 0.0, d = 0.0;
        for (std::size_t k = 0; k < h.size(); ++k) {
          const double x = in[ib + ((2 * i + k) % n) * stride];
          a += h[k] * x;
          d += g[k] * x;
        }
        lo[ob + i * stride] = a;
        hi[ob + i * stride] = d;
      }
    }
}

/// Inverse of analyse_axis.
inline Volume synthesise_axis(const Volume& lo, const Volume& hi, std::size_t axis,
                              const WaveletFamily& fam) {
  const std::size_t m = lo.dim(axis);
  const std::size_t n = 2 * m;
  auto full = lo.dims();
  full[axis] = n;
  Volume out(full, 0.0);
  const std::size_t stride = lo.stride(axis);
  const std::size_t outer = lo.size() / (m * stride);
  const auto& h = fam.lowpass();
  const auto& g = fam.highpass();
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t s = 0; s < stride; ++s) {
      const std::size_t ib = o * m * stride + s;
      const std::size_t ob = o * n * stride + s;
      for (std::size_t i = 0; i < m; ++i) {
        const double a = lo[ib + i * stride];
        const double d = hi[ib + i * stride];
        for (std::size_t k = 0; k < h.size(); ++k)
          out[ob + ((2 * i + k) % n) * stride] += h[k] * a + g[k] * d;
      }
    }
  return out;
}

/// One separable level: 2^d bands keyed by orientation label.
inline std::map<std::string, Volume> analyse_level(const Volume& v, const WaveletFamily& fam) {
  std::map<std::string, Volume> bands{{"", v}};
  for (std::size_t axis = 0; axis < v.rank(); ++axis) {
    std::map<std::string, Volume> next;
    for (auto& [label, band] : bands) {
      Volume lo, hi;
      analyse_axis(band, axis, fam, lo, hi);
      next.emplace(label + "L", std::move(lo));
      next.emplace(label + "H", std::move(hi));
    }
    bands = std::move(next);
  }
  return bands;
}

inline Volume synthesise_level(std::map<std::string, Volume> bands, std::size_t rank,
                               const WaveletFamily& fam) {
  for (std::size_t axis = rank; axis-- > 0;) {
    std::map<std::string, Volume> next;
    for (const auto& [label, band] : bands) {
      if (label.back() != 'L') continue;
      const std::string stem = label.substr(0, label.size() - 1);
      const auto hi = bands.find(stem + "H");
      if (hi == bands.end()) throw DimensionError("idwt: missing subband " + stem + "H");
      if (!band.same_shape(hi->second)) throw DimensionError("idwt: subband shape mismatch");
      next.emplace(stem, synthesise_axis(band, hi->second, axis, fam));
    }
    bands = std::move(next);
  }
  return bands.at("");
}

}  // namespace detail

/// Largest J <= cap such that every axis is divisible by 2^J.
inline int max_levels(const std::vector<std::size_t>& dims, int cap) {
  int J = 0;
  while (J < cap) {
    const std::size_t block = std::size_t{1} << (J + 1);
    bool ok = true;
    for (auto d : dims) ok = ok && d % block == 0;
    if (!ok) break;
    ++J;
  }
  return J;
}

/// Periodised orthonormal pyramid transform with J levels.
inline WaveletDecomposition dwt(const Volume& v, const WaveletFamily& fam, int J) {
  if (J < 1) throw ConfigError("dwt: levels must be >= 1");
  if (max_levels(v.dims(), J) < J)
    throw DimensionError("dwt: every axis length must be divisible by 2^J");
  WaveletDecomposition dec;
  dec.levels = J;
  dec.shape = v.dims();
  Volume cur = v;
  cur.set_grid(GridKind::NodeCentered);
  const std::string approx_label(v.rank(), 'L');
  for (int j = 0; j < J; ++j) {
    auto bands = detail::analyse_level(cur, fam);
    cur = std::move(bands.at(approx_label));
    bands.erase(approx_label);
    dec.details.push_back(std::move(bands));
  }
  dec.approx = std::move(cur);
  return dec;
}

inline Volume idwt(const WaveletDecomposition& dec, const WaveletFamily& fam) {
  if (dec.levels < 1 || dec.details.size() != static_cast<std::size_t>(dec.levels))
    throw DimensionError("idwt: level count does not match detail list");
  const std::size_t rank = dec.approx.rank();
  const auto labels = orientation_labels(rank);
  Volume cur = dec.approx;
  for (int j = dec.levels; j-- > 0;) {
    const auto& lvl = dec.details[static_cast<std::size_t>(j)];
    if (lvl.size() != labels.size()) throw DimensionError("idwt: wrong number of orientations");
    std::map<std::string, Volume> bands(lvl.begin(), lvl.end());
    for (const auto& l : labels)
      if (!bands.count(l) || !bands.at(l).same_shape(cur))
        throw DimensionError("idwt: subband '" + l + "' missing or misshapen");
    bands.emplace(std::string(rank, 'L'), cur);
    cur = detail::synthesise_level(std::move(bands), rank, fam);
  }
  if (!dec.shape.empty() && cur.dims() != dec.shape)
    throw DimensionError("idwt: reconstructed shape differs from recorded shape");
  return cur;
}

struct ThresholdRule {
  enum class Mode { Hard, Soft };
  Mode mode = Mode::Hard;
  double lambda = 0.0;
};

/// Hard keeps w when |w| > lambda; soft also shrinks it towards zero by lambda.
inline double threshold(double w, const ThresholdRule& r) {
  if (!(std::abs(w) > r.lambda)) return 0.0;
  if (r.mode == ThresholdRule::Mode::Hard) return w;
  return std::copysign(std::abs(w) - r.lambda, w);
}

/// Noise estimate median(|finest all-H details|) / 0.6745 times sqrt(2 ln N).
inline double universal_threshold(const WaveletDecomposition& dec) {
  if (dec.details.empty()) return 0.0;
  const std::string finest(dec.approx.rank(), 'H');
  const auto d = dec.details.front().at(finest).data();
  std::vector<double> mags(d.size());
  std::transform(d.begin(), d.end(), mags.begin(), [](double x) { return std::abs(x); });
  const std::size_t mid = mags.size() / 2;
  std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mid), mags.end());
  double median = mags[mid];
  if (mags.size() % 2 == 0) {
    const double lower = *std::max_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  std::size_t n = 1;
  for (auto s : dec.shape) n *= s;
  return median / 0.6745 * std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

/// Thresholds every detail coefficient in place; returns how many changed.
inline std::size_t threshold_details(WaveletDecomposition& dec, const ThresholdRule& rule) {
  std::size_t changed = 0;
  for (auto& lvl : dec.details)
    for (auto& [label, band] : lvl)
      for (double& x : band.data()) {
        const double t = threshold(x, rule);
        changed += t != x;
        x = t;
      }
  return changed;
}

/// dwt, threshold every detail band (approximation untouched), idwt.
inline Volume wavelet_denoise(const Volume& v, const WaveletFamily& fam, int J,
                              const ThresholdRule& rule) {
  if (rule.lambda < 0.0) throw ConfigError("wavelet_denoise: lambda must be >= 0");
  auto dec = dwt(v, fam, J);
  // Nothing thresholded: the reconstruction is exactly v, skip its round-off.
  if (threshold_details(dec, rule) == 0) return v;
  Volume out = idwt(dec, fam);
  out.set_grid(v.grid());
  return out;
}

/// Reconstruction from the J-level approximation band alone (all details zeroed).
inline Volume approximation_projection(const Volume& v, const WaveletFamily& fam, int J) {
  auto dec = dwt(v, fam, J);
  for (auto& lvl : dec.details)
    for (auto& [label, band] : lvl) std::fill(band.data().begin(), band.data().end(), 0.0);
  Volume out = idwt(dec, fam);
  out.set_grid(v.grid());
  return out;
}

/// Projection onto the resolution-J scaling space V_J: 2^J scaling functions across
/// the whole signal, obtained from a (log2(N) - J)-level pyramid with every detail band
/// zeroed. Larger J keeps more scales; J = log2(N) is the identity.
inline Volume project_to_resolution(const Volume& v, const WaveletFamily& fam, int J) {
  if (v.rank() != 1) throw DimensionError("project_to_resolution: expects a 1-D signal");
  const std::size_t n = v.size();
  if (n < 2 || (n & (n - 1)) != 0) throw DimensionError("project_to_resolution: length must be a power of two");
  const int total = std::countr_zero(n);
  if (J < 0 || J > total) throw ConfigError("project_to_resolution: J out of range");
  if (J == total) return v;
  return approximation_projection(v, fam, total - J);
}

/// ||f - P_J f||_2 on `samples` node-centred points for each resolution J in `levels`.
inline std::vector<double> jackson_decay_check(const AnalyticFn& f, const WaveletFamily& fam,
                                               const std::vector<int>& levels,
                                               std::size_t samples = 512) {
  if (f.arity != 1) throw DimensionError("jackson_decay_check: expects a 1-D function");
  const Volume fv = sample_function(f, {samples});
  std::vector<double> errors;
  for (int J : levels) errors.push_back(lp_distance(project_to_resolution(fv, fam, J), fv, 2.0));
  return errors;
}

}  // namespace skfb
