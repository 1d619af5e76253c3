#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace skfb {

/// One-dimensional kernel used by the sampling operators.
///
/// Box is the characteristic function of [-1/2, 1/2). CubicBSpline is the centred
/// cardinal cubic B-spline on [-2, 2]. GaussianMollifier is the normalised Gaussian
/// density with standard deviation sigma. All three integrate to one; the two
/// compact kinds also sum to one over integer translates.
class Kernel {
 public:
  enum class Kind { GaussianMollifier, Box, CubicBSpline };

  static Kernel box() { return Kernel(Kind::Box, 0.0); }
  static Kernel cubic_bspline() { return Kernel(Kind::CubicBSpline, 0.0); }
  static Kernel gaussian(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
      throw ConfigError("gaussian kernel: sigma must be positive");
    return Kernel(Kind::GaussianMollifier, sigma);
  }

  /// Parses `box`, `bspline3` or `gaussian:<sigma>`.
  static Kernel parse(const std::string& s) {
    if (s == "box") return box();
    if (s == "bspline3") return cubic_bspline();
    const std::string prefix = "gaussian:";
    if (s.rfind(prefix, 0) == 0) {
      try {
        std::size_t used = 0;
        const std::string rest = s.substr(prefix.size());
        const double sigma = std::stod(rest, &used);
        if (used != rest.size()) throw ConfigError("trailing characters");
        return gaussian(sigma);
      } catch (const std::exception&) {
        throw ConfigError("kernel: cannot parse '" + s + "'");
      }
    }
    throw ConfigError("kernel: unknown kernel '" + s + "' (expected box, bspline3, gaussian:<sigma>)");
  }

  Kind kind() const { return kind_; }
  double sigma() const { return sigma_; }

  std::string name() const {
    switch (kind_) {
      case Kind::Box: return "box";
      case Kind::CubicBSpline: return "bspline3";
      case Kind::GaussianMollifier: {
        char buf[64];
        std::snprintf(buf, sizeof buf, "gaussian:%.17g", sigma_);
        return buf;
      }
    }
    return {};
  }

  /// Infinite for the Gaussian.
  double support_radius() const {
    switch (kind_) {
      case Kind::Box: return 0.5;
      case Kind::CubicBSpline: return 2.0;
      case Kind::GaussianMollifier: return std::numeric_limits<double>::infinity();
    }
    return 0.0;
  }

  /// Radius beyond which the kernel is treated as zero when summing translates.
  double effective_radius() const {
    return kind_ == Kind::GaussianMollifier ? 12.0 * sigma_ : support_radius();
  }

  double operator()(double x) const {
    switch (kind_) {
      case Kind::Box:
        return (x >= -0.5 && x < 0.5) ? 1.0 : 0.0;
      case Kind::CubicBSpline: {
        const double t = std::abs(x);
        if (t < 1.0) return 2.0 / 3.0 - t * t + 0.5 * t * t * t;
        if (t < 2.0) {
          const double u = 2.0 - t;
          return u * u * u / 6.0;
        }
        return 0.0;
      }
      case Kind::GaussianMollifier: {
        const double z = x / sigma_;
        return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * M_PI) * sigma_);
      }
    }
    return 0.0;
  }

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  Kernel(Kind k, double sigma) : kind_(k), sigma_(sigma) {}

  Kind kind_;
  double sigma_;
};

inline double eval_kernel(const Kernel& k, double x) { return k(x); }

/// Sum of integer translates sum_j k(x - j), truncated to the kernel's effective support.
inline double translate_sum(const Kernel& k, double x) {
  const double r = k.effective_radius();
  const auto lo = static_cast<long>(std::floor(x - r)) - 1;
  const auto hi = static_cast<long>(std::ceil(x + r)) + 1;
  double s = 0.0;
  for (long j = lo; j <= hi; ++j) s += k(x - static_cast<double>(j));
  return s;
}

/// max over xs of |sum_j k(x - j) - 1|.
inline double check_partition_of_unity(const Kernel& k, std::span<const double> xs) {
  if (xs.empty()) throw ConfigError("check_partition_of_unity: no sample points");
  double dev = 0.0;
  for (double x : xs) dev = std::max(dev, std::abs(translate_sum(k, x) - 1.0));
  return dev;
}

/// True iff |k(x)| <= L (1 + |x|)^(-q - delta) at every sample point.
inline bool check_decay(const Kernel& k, int q, double delta, double L, std::span<const double> xs) {
  if (!(delta > 0.0) || !(L > 0.0)) throw ConfigError("check_decay: delta and L must be positive");
  for (double x : xs) {
    const double bound = L * std::pow(1.0 + std::abs(x), -static_cast<double>(q) - delta);
    if (std::abs(k(x)) > bound) return false;
  }
  return true;
}

/// Truncated, renormalised Gaussian weights w[K + i], i in [-K, K].
struct DiscreteStencil {
  std::vector<double> weights;
  std::size_t half_width = 0;

  double operator[](std::ptrdiff_t offset) const {
    return weights[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(half_width) + offset)];
  }
};

/// Half-width floor(3 sigma), never below one.
inline std::size_t gaussian_half_width(double sigma) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(3.0 * sigma)));
}

inline DiscreteStencil discrete_gaussian_stencil(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ConfigError("discrete_gaussian_stencil: sigma must be positive");
  DiscreteStencil s;
  s.half_width = gaussian_half_width(sigma);
  const auto K = static_cast<std::ptrdiff_t>(s.half_width);
  s.weights.resize(2 * s.half_width + 1);
  for (std::ptrdiff_t i = -K; i <= K; ++i) {
    const double t = static_cast<double>(i) / sigma;
    s.weights[static_cast<std::size_t>(i + K)] = std::exp(-0.5 * t * t);
  }
  // Pairwise sum from the tails inwards keeps the result symmetric-exact.
  double total = s.weights[s.half_width];
  for (std::size_t i = 1; i <= s.half_width; ++i)
    total += s.weights[s.half_width - i] + s.weights[s.half_width + i];
  for (auto& w : s.weights) w /= total;
  return s;
}

}  // namespace skfb
