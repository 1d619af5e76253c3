// skfb: command-line front end for the approximation-operator library.
//
// Exit codes: 0 success, 1 I/O or internal failure, 2 configuration error,
// 3 numeric degeneracy.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <skfb/skfb.hpp>

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDegenerate = 3;

bool wants_json(const std::string& path, const std::string& format) {
  if (format == "json") return true;
  if (format == "csv") return false;
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

void emit_table(const skfb::TableResult& t, const std::string& path, const std::string& format) {
  std::ostringstream os;
  if (wants_json(path, format)) skfb::write_json(os, t);
  else skfb::write_csv(os, t);
  if (path.empty() || path == "-") {
    std::cout << os.str();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw skfb::IoError("cannot open '" + path + "' for writing");
  out << os.str();
  if (!out) throw skfb::IoError("write to '" + path + "' failed");
}

std::vector<std::size_t> parse_size_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw skfb::ConfigError("bad resolution list entry '" + item + "'");
    }
  }
  if (out.empty()) throw skfb::ConfigError("empty resolution list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling-Kantorovich, Gaussian, bilateral and wavelet approximation operators"};
  app.require_subcommand(1);

  std::string out_path, in_path, format = "auto";

  // phantom
  auto* phantom = app.add_subcommand("phantom", "Generate the stacked Shepp-Logan volume (VOL1)");
  skfb::PhantomVolumeOptions popt;
  std::string preview;
  phantom->add_option("--size", popt.size, "Slice edge length after resizing")->capture_default_str();
  phantom->add_option("--depth", popt.depth, "Number of stacked slices")->capture_default_str();
  phantom->add_option("--source-size", popt.source_size, "Raster size before resizing")->capture_default_str();
  phantom->add_flag("--original-contrast", popt.original_contrast, "Use the high-contrast intensity table");
  phantom->add_option("--preview", preview, "Also write the mid-slice as an 8-bit PGM");
  phantom->add_option("-o,--output", out_path, "Output VOL1 file")->required();

  // filter
  auto* filter = app.add_subcommand("filter", "Apply one operator to a VOL1 volume");
  std::string op_json;
  filter->add_option("--op", op_json, "Operator config as JSON")->required();
  filter->add_option("-i,--input", in_path, "Input VOL1 file")->required();
  filter->add_option("-o,--output", out_path, "Output VOL1 file")->required();

  // mse-table
  auto* mse = app.add_subcommand("mse-table", "MSE of the four operators on sin(pi x)sin(pi y)sin(pi z)");
  std::string resolutions = "16,32,64";
  mse->add_option("--resolutions", resolutions, "Comma-separated grid sizes")->capture_default_str();
  mse->add_option("-o,--output", out_path, "Output table (.csv or .json); stdout if omitted");
  mse->add_option("--format", format, "csv | json | auto (by extension)")->check(CLI::IsMember({"auto", "csv", "json"}));

  // roi-table
  auto* roi = app.add_subcommand("roi-table", "Speckle metrics on the six phantom ROIs");
  std::string kantorovich = "surrogate", scope = "slice";
  bool with_identity = false;
  roi->add_option("--kantorovich", kantorovich, "surrogate | true-operator")
      ->check(CLI::IsMember({"surrogate", "true-operator"}))
      ->capture_default_str();
  roi->add_option("--filter-scope", scope, "slice | roi")->check(CLI::IsMember({"slice", "roi"}))->capture_default_str();
  roi->add_flag("--with-identity", with_identity, "Append an identity-operator control row per ROI");
  roi->add_option("-o,--output", out_path, "Output table (.csv or .json); stdout if omitted");
  roi->add_option("--format", format, "csv | json | auto (by extension)")->check(CLI::IsMember({"auto", "csv", "json"}));

  // convergence
  auto* conv = app.add_subcommand("convergence", "Error sequences of an operator as its parameter is refined");
  std::string kind;
  conv->add_option("--kind", kind, "gaussian | sk | bilateral | wavelet")
      ->required()
      ->check(CLI::IsMember({"gaussian", "sk", "bilateral", "wavelet"}));
  conv->add_option("-o,--output", out_path, "Output table (.csv or .json); stdout if omitted");
  conv->add_option("--format", format, "csv | json | auto (by extension)")->check(CLI::IsMember({"auto", "csv", "json"}));

  // slice
  auto* slice = app.add_subcommand("slice", "Export one slice of a 3-D volume (or a 2-D volume) as PGM");
  std::size_t index = 32;
  std::string scaling = "minmax";
  slice->add_option("-i,--input", in_path, "Input VOL1 file")->required();
  slice->add_option("--index", index, "Index along axis 0")->capture_default_str();
  slice->add_option("--scale", scaling, "minmax | unit")->check(CLI::IsMember({"minmax", "unit"}))->capture_default_str();
  slice->add_option("-o,--output", out_path, "Output PGM file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*phantom) {
      const skfb::Volume vol = skfb::phantom_volume(popt);
      skfb::save_vol1(out_path, vol);
      if (!preview.empty())
        skfb::export_slice_pgm(skfb::mid_slice(vol, vol.dim(0) / 2), preview, skfb::GrayScaling::UnitRange);
    } else if (*filter) {
      const auto cfg = skfb::parse_operator(op_json);
      const skfb::Volume in = skfb::load_vol1(in_path);
      const auto applied = skfb::apply_operator(cfg, in);
      skfb::save_vol1(out_path, applied.output);
      std::cerr << applied.resolved.dump() << '\n';
    } else if (*mse) {
      skfb::MseTableConfig cfg;
      cfg.resolutions = parse_size_list(resolutions);
      emit_table(skfb::run_mse_table(cfg), out_path, format);
    } else if (*roi) {
      skfb::RoiTableConfig cfg;
      cfg.kantorovich = kantorovich == "surrogate" ? skfb::RoiTableConfig::KantorovichMode::Surrogate
                                                   : skfb::RoiTableConfig::KantorovichMode::TrueOperator;
      cfg.scope = scope == "slice" ? skfb::RoiTableConfig::FilterScope::Slice : skfb::RoiTableConfig::FilterScope::Roi;
      cfg.with_identity = with_identity;
      emit_table(skfb::run_roi_table(cfg), out_path, format);
    } else if (*conv) {
      emit_table(skfb::run_convergence(skfb::ConvergenceConfig::defaults(skfb::parse_convergence_kind(kind))), out_path,
                 format);
    } else if (*slice) {
      const skfb::Volume vol = skfb::load_vol1(in_path);
      const skfb::Volume img = vol.rank() == 3 ? skfb::mid_slice(vol, index) : vol;
      if (img.rank() != 2) throw skfb::DimensionError("slice: input must be 2-D or 3-D");
      skfb::export_slice_pgm(img, out_path,
                             scaling == "unit" ? skfb::GrayScaling::UnitRange : skfb::GrayScaling::MinMax);
    }
  } catch (const skfb::DegenerateError& e) {
    std::cerr << "skfb: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const skfb::IoError& e) {
    std::cerr << "skfb: " << e.what() << '\n';
    return kExitIo;
  } catch (const skfb::Error& e) {
    // Shape, bounds and parameter problems all come from user input here.
    std::cerr << "skfb: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "skfb: internal error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
