#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "error.hpp"
#include "kernels.hpp"
#include "metrics.hpp"
#include "operators.hpp"
#include "phantom.hpp"
#include "volume.hpp"
#include "wavelet.hpp"

namespace skfb {

struct TableRow {
  std::string label;
  std::string op;  ///< empty for tables without an operator column
  std::vector<double> values;
  Json config;        ///< per-row parameter echo (may be null)
  std::string error;  ///< non-empty when the row could not be computed
};

struct TableResult {
  std::string name;
  std::string label_column;
  bool has_operator_column = false;
  std::vector<std::string> value_columns;
  std::vector<TableRow> rows;
  Json provenance;
};

/// `%.6g`, with inf/-inf/nan spelled out.
inline std::string format_value(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

/// Provenance as `#`-prefixed lines, then a header and one line per row.
inline void write_csv(std::ostream& os, const TableResult& t) {
  os << "# table: " << t.name << '\n';
  os << "# provenance: " << t.provenance.dump() << '\n';
  for (const auto& r : t.rows)
    if (!r.error.empty()) os << "# error " << r.label << ' ' << r.op << ": " << r.error << '\n';
  os << t.label_column;
  if (t.has_operator_column) os << ",operator";
  for (const auto& c : t.value_columns) os << ',' << c;
  os << '\n';
  for (const auto& r : t.rows) {
    os << r.label;
    if (t.has_operator_column) os << ',' << r.op;
    for (double v : r.values) os << ',' << format_value(v);
    os << '\n';
  }
}

inline void write_json(std::ostream& os, const TableResult& t) {
  auto number = [](double x) -> Json {
    if (std::isfinite(x)) return x;
    return format_value(x);
  };
  Json out;
  out["table"] = t.name;
  out["provenance"] = t.provenance;
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json j;
    j[t.label_column] = r.label;
    if (t.has_operator_column) j["operator"] = r.op;
    for (std::size_t i = 0; i < t.value_columns.size(); ++i) j[t.value_columns[i]] = number(r.values[i]);
    if (!r.config.is_null()) j["config"] = r.config;
    if (!r.error.empty()) j["error"] = r.error;
    rows.push_back(std::move(j));
  }
  out["rows"] = std::move(rows);
  os << out.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// MSE table on f(x,y,z) = sin(pi x) sin(pi y) sin(pi z)

struct MseTableConfig {
  std::vector<std::size_t> resolutions{16, 32, 64};
  GaussianConfig gaussian{1.0, Boundary::Reflect};
  BilateralConfig bilateral{{1.0, 0.1}, Boundary::Reflect};
  WaveletConfig wavelet{};
  Kernel kantorovich_kernel = Kernel::cubic_bspline();
};

/// One row per resolution N, one MSE column per operator. The Kantorovich column is
/// the point-sample operator with n = N - 1 evaluated on the same node lattice.
inline TableResult run_mse_table(const MseTableConfig& cfg) {
  if (cfg.resolutions.empty()) throw ConfigError("mse-table: no resolutions");
  for (auto n : cfg.resolutions)
    if (n < 4) throw ConfigError("mse-table: resolutions must be >= 4");

  TableResult t;
  t.name = "mse";
  t.label_column = "resolution";
  t.value_columns = {"gaussian", "bilateral", "wavelet", "kantorovich"};
  t.provenance["function"] = "sin(pi x) sin(pi y) sin(pi z)";
  t.provenance["grid"] = "node";
  t.provenance["gaussian"] = to_json(cfg.gaussian);
  t.provenance["bilateral"] = to_json(cfg.bilateral);
  t.provenance["wavelet"] = to_json(cfg.wavelet);
  t.provenance["kantorovich"] = {{"op", "kantorovich"}, {"n", "N-1"}, {"kernel", cfg.kantorovich_kernel.name()},
                                 {"form", "point"}};
  t.provenance["resolutions"] = cfg.resolutions;

  const AnalyticFn f = sine_product(3);
  for (std::size_t N : cfg.resolutions) {
    const Volume ref = sample_function(f, {N, N, N});
    TableRow row;
    row.label = std::to_string(N);
    const Applied wav = apply_operator(cfg.wavelet, ref);
    KantorovichConfig kc;
    kc.n = static_cast<int>(N) - 1;
    kc.kernel = cfg.kantorovich_kernel;
    kc.form = KantorovichConfig::Form::Point;
    row.values = {
        mse(gaussian_filter(ref, cfg.gaussian.sigma, cfg.gaussian.boundary), ref),
        mse(bilateral_filter(ref, cfg.bilateral.params, cfg.bilateral.boundary), ref),
        mse(wav.output, ref),
        mse(apply_operator(kc, ref).output, ref),
    };
    row.config = {{"wavelet_lambda", wav.resolved["lambda"]}};
    t.rows.push_back(std::move(row));
  }
  return t;
}

// ---------------------------------------------------------------------------
// ROI metric table on the phantom mid-slice

struct RoiTableConfig {
  enum class KantorovichMode { Surrogate, TrueOperator };
  enum class FilterScope { Slice, Roi };

  PhantomVolumeOptions phantom{};
  std::size_t slice_index = 32;
  KantorovichMode kantorovich = KantorovichMode::Surrogate;
  FilterScope scope = FilterScope::Slice;
  bool with_identity = false;
  double peak = 1.0;

  GaussianConfig gaussian{1.0, Boundary::Reflect};
  IteratedGaussianConfig surrogate{1.0, 3, Boundary::Reflect};
  BilateralConfig bilateral{{1.0, 0.05}, Boundary::Reflect};
  WaveletConfig wavelet{};
  Kernel true_operator_kernel = Kernel::cubic_bspline();
  int wavelet_level_cap = 2;
};

inline const std::vector<std::string>& roi_value_columns() {
  static const std::vector<std::string> cols{"si", "ssi", "smpi", "enl", "mse", "psnr"};
  return cols;
}

namespace detail {

/// (display name, operator) pairs for one image of the given shape.
inline std::vector<std::pair<std::string, OperatorConfig>> roi_operators(const RoiTableConfig& cfg,
                                                                         const Volume& img) {
  std::vector<std::pair<std::string, OperatorConfig>> ops;
  ops.emplace_back("Gaussian", cfg.gaussian);
  if (cfg.kantorovich == RoiTableConfig::KantorovichMode::Surrogate) {
    ops.emplace_back("Kantorovich", cfg.surrogate);
  } else {
    if (img.dim(0) != img.dim(1)) throw ConfigError("roi-table: true Kantorovich operator needs a square image");
    KantorovichConfig kc;
    kc.n = static_cast<int>(img.dim(0));
    kc.kernel = cfg.true_operator_kernel;
    kc.form = KantorovichConfig::Form::Cell;
    ops.emplace_back("Kantorovich", kc);
  }
  ops.emplace_back("Bilateral", cfg.bilateral);
  WaveletConfig wc = cfg.wavelet;
  wc.levels = max_levels(img.dims(), cfg.wavelet_level_cap);
  if (wc.levels < 1) throw ConfigError("roi-table: image not divisible by 2 for the wavelet transform");
  ops.emplace_back("Wavelet", wc);
  if (cfg.with_identity) ops.emplace_back("Identity", IdentityConfig{});
  return ops;
}

inline TableRow roi_row(const Volume& original, const Volume& filtered, const Roi& window,
                        const std::string& roi_name, const std::string& op_name, const Json& resolved,
                        double peak) {
  TableRow row;
  row.label = roi_name;
  row.op = op_name;
  row.config = resolved;
  try {
    const MetricsReport r = report(original, filtered, window, peak, op_name, resolved.dump());
    row.values = {r.si, r.ssi, r.smpi, r.enl, r.mse, r.psnr};
  } catch (const DegenerateError& e) {
    row.values.assign(roi_value_columns().size(), std::nan(""));
    row.error = e.what();
  }
  return row;
}

}  // namespace detail

/// Phantom volume, mid-slice, four filters, six ROIs: 24 rows in ROI-major order
/// (Gaussian, Kantorovich, Bilateral, Wavelet within each ROI). Metric failures are
/// recorded on the row instead of aborting the run.
inline TableResult run_roi_table(const RoiTableConfig& cfg) {
  const Volume volume = phantom_volume(cfg.phantom);
  const Volume slice = mid_slice(volume, cfg.slice_index);
  const auto rois = roi_catalog();
  for (const auto& roi : rois)
    if (!roi.fits(slice.dim(0), slice.dim(1)))
      throw ConfigError("roi-table: ROI '" + roi.name + "' does not fit the slice");

  TableResult t;
  t.name = "roi";
  t.label_column = "roi";
  t.has_operator_column = true;
  t.value_columns = roi_value_columns();
  t.provenance["phantom"] = {{"table", cfg.phantom.original_contrast ? "original" : "modified"},
                             {"source_size", cfg.phantom.source_size},
                             {"size", cfg.phantom.size},
                             {"depth", cfg.phantom.depth},
                             {"resize", "catmull-rom, clipped to source range"}};
  t.provenance["slice_index"] = cfg.slice_index;
  t.provenance["kantorovich"] =
      cfg.kantorovich == RoiTableConfig::KantorovichMode::Surrogate ? "surrogate" : "true-operator";
  t.provenance["filter_scope"] = cfg.scope == RoiTableConfig::FilterScope::Slice ? "slice" : "roi";
  t.provenance["peak"] = cfg.peak;
  t.provenance["si_of"] = "filtered";

  if (cfg.scope == RoiTableConfig::FilterScope::Slice) {
    std::vector<std::pair<std::string, Applied>> filtered;
    for (auto& [name, op] : detail::roi_operators(cfg, slice)) filtered.emplace_back(name, apply_operator(op, slice));
    for (const auto& roi : rois)
      for (const auto& [name, applied] : filtered)
        t.rows.push_back(detail::roi_row(slice, applied.output, roi, roi.name, name, applied.resolved, cfg.peak));
  } else {
    for (const auto& roi : rois) {
      const Volume crop = extract_roi(slice, roi);
      const Roi whole{roi.name, 0, crop.dim(0), 0, crop.dim(1)};
      for (auto& [name, op] : detail::roi_operators(cfg, crop)) {
        const Applied applied = apply_operator(op, crop);
        t.rows.push_back(detail::roi_row(crop, applied.output, whole, roi.name, name, applied.resolved, cfg.peak));
      }
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Convergence sequences on f(x) = sin(pi x)

enum class ConvergenceKind { GaussianSigma, SkN, BilateralJoint, WaveletJ };

inline ConvergenceKind parse_convergence_kind(const std::string& s) {
  if (s == "gaussian") return ConvergenceKind::GaussianSigma;
  if (s == "sk") return ConvergenceKind::SkN;
  if (s == "bilateral") return ConvergenceKind::BilateralJoint;
  if (s == "wavelet") return ConvergenceKind::WaveletJ;
  throw ConfigError("convergence: unknown kind '" + s + "' (expected gaussian, sk, bilateral, wavelet)");
}

struct ConvergenceConfig {
  ConvergenceKind kind = ConvergenceKind::GaussianSigma;
  /// Gaussian: sigma in domain units. Sk: n. Bilateral: sigma_spatial in grid units
  /// (sigma_range follows as range_per_spatial * sigma_spatial). Wavelet: J.
  std::vector<double> parameters;
  std::size_t nodes = 513;
  Boundary boundary = Boundary::Antisymmetric;
  Kernel sk_kernel = Kernel::cubic_bspline();
  double range_per_spatial = 0.025;
  WaveletFamily family = WaveletFamily::haar();

  static ConvergenceConfig defaults(ConvergenceKind k) {
    ConvergenceConfig c;
    c.kind = k;
    switch (k) {
      case ConvergenceKind::GaussianSigma: c.parameters = {0.08, 0.04, 0.02, 0.01}; break;
      case ConvergenceKind::SkN: c.parameters = {8, 16, 32, 64}; break;
      case ConvergenceKind::BilateralJoint: c.parameters = {8, 4, 2, 1}; break;
      case ConvergenceKind::WaveletJ:
        c.parameters = {1, 2, 3, 4};
        c.nodes = 512;
        break;
    }
    return c;
  }
};

/// ||Op f - f||_2 for each parameter, with error(prev) / error(this) alongside.
inline TableResult run_convergence(const ConvergenceConfig& cfg) {
  if (cfg.parameters.empty()) throw ConfigError("convergence: empty parameter list");
  const AnalyticFn f = sine_product(1);
  const Volume ref = sample_function(f, {cfg.nodes});
  const double h_inv = static_cast<double>(cfg.nodes - 1);

  TableResult t;
  t.name = "convergence";
  t.label_column = "parameter";
  t.value_columns = {"error", "ratio"};
  t.provenance["function"] = "sin(pi x)";
  t.provenance["nodes"] = cfg.nodes;
  t.provenance["norm"] = "l2, grid-normalised";

  std::vector<double> errors;
  for (double p : cfg.parameters) {
    double err = 0.0;
    switch (cfg.kind) {
      case ConvergenceKind::GaussianSigma:
        err = lp_distance(gaussian_filter(ref, p * h_inv, cfg.boundary), ref, 2.0);
        break;
      case ConvergenceKind::SkN:
        err = lp_distance(sk_cell_average(f, static_cast<int>(p), cfg.sk_kernel, {{cfg.nodes}, GridKind::NodeCentered}),
                          ref, 2.0);
        break;
      case ConvergenceKind::BilateralJoint:
        err = lp_distance(bilateral_filter(ref, {p, p * cfg.range_per_spatial}, cfg.boundary), ref, 2.0);
        break;
      case ConvergenceKind::WaveletJ:
        err = lp_distance(project_to_resolution(ref, cfg.family, static_cast<int>(p)), ref, 2.0);
        break;
    }
    errors.push_back(err);
    TableRow row;
    row.label = format_value(p);
    const double ratio = errors.size() > 1 ? errors[errors.size() - 2] / err : std::nan("");
    row.values = {err, ratio};
    t.rows.push_back(std::move(row));
  }

  switch (cfg.kind) {
    case ConvergenceKind::GaussianSigma:
      t.provenance["kind"] = "gaussian";
      t.provenance["parameter"] = "sigma (domain units)";
      t.provenance["boundary"] = to_string(cfg.boundary);
      break;
    case ConvergenceKind::SkN:
      t.provenance["kind"] = "sk";
      t.provenance["parameter"] = "n";
      t.provenance["kernel"] = cfg.sk_kernel.name();
      t.provenance["form"] = "cell";
      break;
    case ConvergenceKind::BilateralJoint:
      t.provenance["kind"] = "bilateral";
      t.provenance["parameter"] = "sigma_spatial (grid units)";
      t.provenance["sigma_range"] = "parameter * " + format_value(cfg.range_per_spatial);
      t.provenance["boundary"] = to_string(cfg.boundary);
      break;
    case ConvergenceKind::WaveletJ:
      t.provenance["kind"] = "wavelet";
      t.provenance["parameter"] = "J (resolution level, 2^J scaling functions)";
      t.provenance["family"] = cfg.family.name();
      break;
  }
  return t;
}

}  // namespace skfb
