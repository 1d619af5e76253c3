#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "boundary.hpp"
#include "error.hpp"
#include "kernels.hpp"
#include "operators.hpp"
#include "volume.hpp"
#include "wavelet.hpp"

namespace skfb {

using Json = nlohmann::ordered_json;

struct GaussianConfig {
  double sigma = 1.0;
  Boundary boundary = Boundary::Reflect;
};

struct BilateralConfig {
  BilateralParams params;
  Boundary boundary = Boundary::Reflect;
};

struct KantorovichConfig {
  enum class Form { Cell, Point };
  int n = 32;
  Kernel kernel = Kernel::cubic_bspline();
  Form form = Form::Point;
  Boundary boundary = Boundary::Reflect;  ///< cell form only
};

struct IteratedGaussianConfig {
  double sigma = 1.0;
  int iterations = 3;
  Boundary boundary = Boundary::Reflect;
};

struct WaveletConfig {
  WaveletFamily family = WaveletFamily::haar();
  int levels = 2;
  ThresholdRule::Mode mode = ThresholdRule::Mode::Hard;
  std::optional<double> lambda;  ///< empty: universal threshold
};

struct IdentityConfig {};

using OperatorConfig = std::variant<GaussianConfig, BilateralConfig, KantorovichConfig,
                                    IteratedGaussianConfig, WaveletConfig, IdentityConfig>;

namespace detail {

template <class T>
T require(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("operator config: missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("operator config: bad type for '") + key + "'");
  }
}

template <class T>
T optional_field(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("operator config: bad type for '") + key + "'");
  }
}

inline double positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(std::string(what) + " must be positive");
  return x;
}

}  // namespace detail

inline OperatorConfig parse_operator(const Json& j) {
  using detail::optional_field;
  using detail::positive;
  using detail::require;
  if (!j.is_object()) throw ConfigError("operator config must be a JSON object");
  const auto op = require<std::string>(j, "op");
  const Boundary boundary = parse_boundary(optional_field<std::string>(j, "boundary", "reflect"));
  if (op == "gaussian") return GaussianConfig{positive(require<double>(j, "sigma"), "sigma"), boundary};
  if (op == "bilateral") {
    BilateralConfig c;
    c.params.sigma_spatial = positive(require<double>(j, "sigma_spatial"), "sigma_spatial");
    c.params.sigma_range = positive(require<double>(j, "sigma_range"), "sigma_range");
    c.boundary = boundary;
    return c;
  }
  if (op == "kantorovich") {
    KantorovichConfig c;
    c.n = require<int>(j, "n");
    if (c.n < 1) throw ConfigError("kantorovich: n must be >= 1");
    c.kernel = Kernel::parse(optional_field<std::string>(j, "kernel", "bspline3"));
    const auto form = optional_field<std::string>(j, "form", "point");
    if (form == "cell") c.form = KantorovichConfig::Form::Cell;
    else if (form == "point") c.form = KantorovichConfig::Form::Point;
    else throw ConfigError("kantorovich: form must be 'cell' or 'point'");
    c.boundary = boundary;
    return c;
  }
  if (op == "iterated_gaussian") {
    IteratedGaussianConfig c;
    c.sigma = positive(require<double>(j, "sigma"), "sigma");
    c.iterations = optional_field<int>(j, "iterations", 3);
    if (c.iterations < 1) throw ConfigError("iterated_gaussian: iterations must be >= 1");
    c.boundary = boundary;
    return c;
  }
  if (op == "wavelet") {
    WaveletConfig c;
    c.family = WaveletFamily::parse(optional_field<std::string>(j, "family", "haar"));
    c.levels = optional_field<int>(j, "levels", 2);
    if (c.levels < 1) throw ConfigError("wavelet: levels must be >= 1");
    const auto mode = optional_field<std::string>(j, "mode", "hard");
    if (mode == "hard") c.mode = ThresholdRule::Mode::Hard;
    else if (mode == "soft") c.mode = ThresholdRule::Mode::Soft;
    else throw ConfigError("wavelet: mode must be 'hard' or 'soft'");
    if (j.contains("lambda")) {
      const auto& l = j.at("lambda");
      if (l.is_string()) {
        if (l.get<std::string>() != "universal")
          throw ConfigError("wavelet: lambda must be a number or \"universal\"");
      } else if (l.is_number()) {
        c.lambda = l.get<double>();
        if (!(*c.lambda >= 0.0)) throw ConfigError("wavelet: lambda must be >= 0");
      } else {
        throw ConfigError("wavelet: lambda must be a number or \"universal\"");
      }
    }
    return c;
  }
  if (op == "identity") return IdentityConfig{};
  throw ConfigError("unknown operator '" + op + "'");
}

inline OperatorConfig parse_operator(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("operator config is not valid JSON: ") + e.what());
  }
  return parse_operator(j);
}

inline OperatorConfig parse_operator(const char* text) { return parse_operator(std::string(text)); }

inline Json to_json(const OperatorConfig& cfg) {
  return std::visit(
      [](const auto& c) -> Json {
        using T = std::decay_t<decltype(c)>;
        Json j;
        if constexpr (std::is_same_v<T, GaussianConfig>) {
          j["op"] = "gaussian";
          j["sigma"] = c.sigma;
          j["boundary"] = to_string(c.boundary);
        } else if constexpr (std::is_same_v<T, BilateralConfig>) {
          j["op"] = "bilateral";
          j["sigma_spatial"] = c.params.sigma_spatial;
          j["sigma_range"] = c.params.sigma_range;
          j["boundary"] = to_string(c.boundary);
        } else if constexpr (std::is_same_v<T, KantorovichConfig>) {
          j["op"] = "kantorovich";
          j["n"] = c.n;
          j["kernel"] = c.kernel.name();
          j["form"] = c.form == KantorovichConfig::Form::Cell ? "cell" : "point";
          if (c.form == KantorovichConfig::Form::Cell) j["boundary"] = to_string(c.boundary);
        } else if constexpr (std::is_same_v<T, IteratedGaussianConfig>) {
          j["op"] = "iterated_gaussian";
          j["sigma"] = c.sigma;
          j["iterations"] = c.iterations;
          j["boundary"] = to_string(c.boundary);
        } else if constexpr (std::is_same_v<T, WaveletConfig>) {
          j["op"] = "wavelet";
          j["family"] = c.family.name();
          j["levels"] = c.levels;
          j["mode"] = c.mode == ThresholdRule::Mode::Hard ? "hard" : "soft";
          if (c.lambda) j["lambda"] = *c.lambda;
          else j["lambda"] = "universal";
        } else {
          j["op"] = "identity";
        }
        return j;
      },
      cfg);
}

/// Filter output plus the configuration actually used (universal lambda resolved).
struct Applied {
  Volume output;
  Json resolved;
};

/// Applies a configured operator to a volume; output has the input's shape.
///
/// The Kantorovich point form expects a node-centred (n+1)^d volume and the cell form
/// a cell-centred n^d volume; both are evaluated back on the input lattice.
inline Applied apply_operator(const OperatorConfig& cfg, const Volume& v) {
  return std::visit(
      [&](const auto& c) -> Applied {
        using T = std::decay_t<decltype(c)>;
        Json resolved = to_json(OperatorConfig{c});
        if constexpr (std::is_same_v<T, GaussianConfig>) {
          return {gaussian_filter(v, c.sigma, c.boundary), resolved};
        } else if constexpr (std::is_same_v<T, BilateralConfig>) {
          return {bilateral_filter(v, c.params, c.boundary), resolved};
        } else if constexpr (std::is_same_v<T, KantorovichConfig>) {
          const EvalGrid grid{v.dims(), v.grid()};
          if (c.form == KantorovichConfig::Form::Point) return {sk_point_sample(v, c.n, c.kernel, grid), resolved};
          return {sk_cell_average(v, c.n, c.kernel, grid, c.boundary), resolved};
        } else if constexpr (std::is_same_v<T, IteratedGaussianConfig>) {
          return {iterated_gaussian(v, c.sigma, c.iterations, c.boundary), resolved};
        } else if constexpr (std::is_same_v<T, WaveletConfig>) {
          const double lambda = c.lambda ? *c.lambda : universal_threshold(dwt(v, c.family, c.levels));
          resolved["lambda_rule"] = c.lambda ? "fixed" : "universal";
          resolved["lambda"] = lambda;
          return {wavelet_denoise(v, c.family, c.levels, {c.mode, lambda}), resolved};
        } else {
          return {v, resolved};
        }
      },
      cfg);
}

}  // namespace skfb
