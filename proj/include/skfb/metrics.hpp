#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"
#include "volume.hpp"

namespace skfb {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Mean magnitudes below this are treated as zero by the ratio metrics.
inline constexpr double kZeroMeanCutoff = 1e-12;

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;  ///< population (divide by N)
};

/// Accumulated about the first sample, so a flat region has exactly zero spread.
inline Moments moments(const Volume& v) {
  const auto d = v.data();
  const double n = static_cast<double>(d.size());
  const double x0 = d[0];
  double s = 0.0;
  for (double x : d) s += x - x0;
  const double shift = s / n;
  double ss = 0.0;
  for (double x : d) ss += (x - x0 - shift) * (x - x0 - shift);
  return {x0 + shift, std::sqrt(ss / n)};
}

inline double mse(const Volume& f, const Volume& g) {
  if (!f.same_shape(g)) throw DimensionError("mse: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += (f[i] - g[i]) * (f[i] - g[i]);
  return s / static_cast<double>(f.size());
}

/// 10 log10(L^2 / mse); +inf for a perfect match.
inline double psnr_from_mse(double m, double peak) {
  if (!(peak > 0.0)) throw ConfigError("psnr: peak value L must be positive");
  if (m == 0.0) return kInfinity;
  return 10.0 * std::log10(peak * peak / m);
}

inline double psnr(const Volume& f, const Volume& g, double peak = 1.0) {
  return psnr_from_mse(mse(f, g), peak);
}

/// Speckle index: coefficient of variation sigma / mu.
inline double si(const Volume& v) {
  const auto m = moments(v);
  if (std::abs(m.mean) < kZeroMeanCutoff) throw ZeroMeanRegion();
  return m.stddev / m.mean;
}

/// Speckle suppression index SI(filtered) / SI(original).
inline double ssi(const Volume& original, const Volume& filtered) {
  if (!original.same_shape(filtered)) throw DimensionError("ssi: shape mismatch");
  const double so = si(original);
  if (so == 0.0) throw ZeroSIOriginal();
  return si(filtered) / so;
}

/// Speckle mean preservation index mu(filtered) / mu(original).
inline double smpi(const Volume& original, const Volume& filtered) {
  if (!original.same_shape(filtered)) throw DimensionError("smpi: shape mismatch");
  const double mo = moments(original).mean;
  if (std::abs(mo) < kZeroMeanCutoff) throw ZeroMeanRegion();
  return moments(filtered).mean / mo;
}

/// Equivalent number of looks mu^2 / sigma^2; +inf for a flat region with nonzero mean.
inline double enl(const Volume& v) {
  const auto m = moments(v);
  if (m.stddev == 0.0) {
    if (std::abs(m.mean) < kZeroMeanCutoff) throw ZeroMeanRegion();
    return kInfinity;
  }
  return (m.mean * m.mean) / (m.stddev * m.stddev);
}

struct MetricsReport {
  std::string roi_name;
  std::string operator_name;
  std::string operator_config;  ///< JSON echo of the operator parameters
  double si = 0.0;              ///< of the filtered ROI
  double ssi = 0.0;
  double smpi = 0.0;
  double enl = 0.0;             ///< of the filtered ROI; may be +inf
  double mse = 0.0;
  double psnr = 0.0;            ///< may be +inf
};

/// All six metrics on the `roi` windows of an original and a filtered slice.
inline MetricsReport report(const Volume& original_slice, const Volume& filtered_slice,
                            const Roi& roi, double peak, const std::string& operator_name,
                            const std::string& config) {
  if (!original_slice.same_shape(filtered_slice)) throw DimensionError("report: slice shapes differ");
  const Volume o = extract_roi(original_slice, roi);
  const Volume f = extract_roi(filtered_slice, roi);
  MetricsReport r;
  r.roi_name = roi.name;
  r.operator_name = operator_name;
  r.operator_config = config;
  r.si = si(f);
  r.ssi = ssi(o, f);
  r.smpi = smpi(o, f);
  r.enl = enl(f);
  r.mse = mse(o, f);
  r.psnr = psnr_from_mse(r.mse, peak);
  return r;
}

}  // namespace skfb
