#include <skfb/experiments.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace skfb {
namespace {

// Independent numpy evaluation (odd/half-sample mirror padding, exact cell integrals).
constexpr double kGaussianErrors[4] = {0.021389657525641374, 0.00541053678003821, 0.0013539128032312381,
                                       0.00033997476974916626};
constexpr double kBilateralErrors[4] = {0.0007885317346266497, 0.00019786712519893182, 4.97455428819446e-05,
                                        1.2520468180079151e-05};
constexpr double kSkErrors[4] = {0.022363119354361184, 0.005652960384937293, 0.001417159553873604,
                                 0.0003545353750566225};

std::string csv(const TableResult& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

TEST(FormatValue, Spelling) {
  EXPECT_EQ(format_value(0.00758), "0.00758");
  EXPECT_EQ(format_value(1.0), "1");
  EXPECT_EQ(format_value(1234567.0), "1.23457e+06");
  EXPECT_EQ(format_value(kInfinity), "inf");
  EXPECT_EQ(format_value(-kInfinity), "-inf");
  EXPECT_EQ(format_value(std::nan("")), "nan");
}

TEST(Convergence, GaussianMatchesOracle) {
  const auto t = run_convergence(ConvergenceConfig::defaults(ConvergenceKind::GaussianSigma));
  ASSERT_EQ(t.rows.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(t.rows[i].values[0], kGaussianErrors[i], 1e-12);
  for (std::size_t i = 1; i < 4; ++i) {
    EXPECT_GE(t.rows[i].values[1], 3.2);
    EXPECT_LE(t.rows[i].values[1], 4.8);
  }
  EXPECT_TRUE(std::isnan(t.rows[0].values[1]));
  EXPECT_EQ(t.rows[0].label, "0.08");
}

TEST(Convergence, BilateralMatchesOracle) {
  const auto t = run_convergence(ConvergenceConfig::defaults(ConvergenceKind::BilateralJoint));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(t.rows[i].values[0], kBilateralErrors[i], 1e-12);
}

TEST(Convergence, SkMatchesOracle) {
  const auto t = run_convergence(ConvergenceConfig::defaults(ConvergenceKind::SkN));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(t.rows[i].values[0], kSkErrors[i], 1e-9 * kSkErrors[i]);
  EXPECT_EQ(t.provenance.at("form"), "cell");
}

TEST(Convergence, WaveletHalvesPerLevel) {
  const auto t = run_convergence(ConvergenceConfig::defaults(ConvergenceKind::WaveletJ));
  for (std::size_t i = 1; i < 4; ++i) EXPECT_NEAR(t.rows[i].values[1], 2.0, 0.1);
  EXPECT_THROW(parse_convergence_kind("fourier"), ConfigError);
  ConvergenceConfig empty;
  EXPECT_THROW(run_convergence(empty), ConfigError);
}

TEST(MseTable, ShapeAndSmallestRow) {
  MseTableConfig cfg;
  cfg.resolutions = {16, 32};
  const auto t = run_mse_table(cfg);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.value_columns, (std::vector<std::string>{"gaussian", "bilateral", "wavelet", "kantorovich"}));
  EXPECT_EQ(t.rows[0].label, "16");
  // Gaussian, bilateral and Kantorovich at N = 16 from the numpy oracle.
  EXPECT_NEAR(t.rows[0].values[0], 0.0009840435129759312, 1e-15);
  EXPECT_NEAR(t.rows[0].values[1], 0.0001559232711343009, 1e-15);
  EXPECT_NEAR(t.rows[0].values[3], 0.00014459080647245245, 1e-15);
  for (std::size_t c = 0; c < 4; ++c) EXPECT_LT(t.rows[1].values[c], t.rows[0].values[c]) << t.value_columns[c];
  EXPECT_TRUE(t.rows[0].config.contains("wavelet_lambda"));
  EXPECT_EQ(t.provenance.at("gaussian").at("sigma"), 1.0);
}

TEST(MseTable, RejectsBadResolutions) {
  MseTableConfig cfg;
  cfg.resolutions = {};
  EXPECT_THROW(run_mse_table(cfg), ConfigError);
  cfg.resolutions = {2};
  EXPECT_THROW(run_mse_table(cfg), ConfigError);
}

TEST(MseTable, CsvLayout) {
  MseTableConfig cfg;
  cfg.resolutions = {8};
  const std::string s = csv(run_mse_table(cfg));
  EXPECT_EQ(s.rfind("# table: mse\n# provenance: {", 0), 0u);
  EXPECT_NE(s.find("\nresolution,gaussian,bilateral,wavelet,kantorovich\n8,"), std::string::npos);
}

class RoiTableTest : public ::testing::Test {
 protected:
  static const TableResult& table() {
    static const TableResult t = [] {
      RoiTableConfig cfg;
      cfg.with_identity = true;
      return run_roi_table(cfg);
    }();
    return t;
  }
  static const TableRow& row(const std::string& roi, const std::string& op) {
    for (const auto& r : table().rows)
      if (r.label == roi && r.op == op) return r;
    throw std::runtime_error("missing row " + roi + "/" + op);
  }
};

TEST_F(RoiTableTest, RoiMajorLayout) {
  const auto& t = table();
  ASSERT_EQ(t.rows.size(), 30u);
  const std::vector<std::string> ops{"Gaussian", "Kantorovich", "Bilateral", "Wavelet", "Identity"};
  const auto rois = roi_catalog();
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(t.rows[i].label, rois[i / 5].name);
    EXPECT_EQ(t.rows[i].op, ops[i % 5]);
    EXPECT_TRUE(t.rows[i].error.empty()) << t.rows[i].error;
    EXPECT_FALSE(t.rows[i].config.is_null());
  }
  EXPECT_EQ(t.value_columns, (std::vector<std::string>{"si", "ssi", "smpi", "enl", "mse", "psnr"}));
}

TEST_F(RoiTableTest, IdentityRows) {
  for (const auto& roi : roi_catalog()) {
    const auto& r = row(roi.name, "Identity");
    EXPECT_EQ(r.values[1], 1.0);
    EXPECT_EQ(r.values[2], 1.0);
    EXPECT_EQ(r.values[4], 0.0);
    EXPECT_TRUE(std::isinf(r.values[5]));
  }
}

TEST_F(RoiTableTest, EnlIsInverseSquaredSi) {
  for (const auto& r : table().rows) {
    const double s = r.values[0], e = r.values[3];
    if (std::isfinite(e) && s > 0) {
      EXPECT_NEAR(e, 1.0 / (s * s), 1e-9 * e) << r.label << " " << r.op;
    }
  }
}

TEST_F(RoiTableTest, KidneyEdgeOrdering) {
  const double k = row("Kidney Edge", "Kantorovich").values[1];
  const double g = row("Kidney Edge", "Gaussian").values[1];
  const double b = row("Kidney Edge", "Bilateral").values[1];
  const double w = row("Kidney Edge", "Wavelet").values[1];
  EXPECT_LT(k, g);
  EXPECT_LT(g, b);
  EXPECT_LE(b, w);
}

TEST_F(RoiTableTest, WaveletConfigIsEchoed) {
  const auto& cfg = row("CSF", "Wavelet").config;
  EXPECT_EQ(cfg.at("levels"), 2);
  EXPECT_EQ(cfg.at("lambda_rule"), "universal");
  EXPECT_TRUE(cfg.contains("lambda"));
  EXPECT_EQ(row("CSF", "Kantorovich").config.at("op"), "iterated_gaussian");
}

TEST_F(RoiTableTest, CsvHeaderAndDeterminism) {
  const std::string s = csv(table());
  EXPECT_NE(s.find("\nroi,operator,si,ssi,smpi,enl,mse,psnr\n"), std::string::npos);
  EXPECT_NE(s.find("\nCSF,Identity,"), std::string::npos);
  RoiTableConfig cfg;
  cfg.with_identity = true;
  EXPECT_EQ(csv(run_roi_table(cfg)), s);
}

TEST(RoiTable, RoiScopeAndTrueOperator) {
  RoiTableConfig cfg;
  cfg.scope = RoiTableConfig::FilterScope::Roi;
  cfg.kantorovich = RoiTableConfig::KantorovichMode::TrueOperator;
  const auto t = run_roi_table(cfg);
  ASSERT_EQ(t.rows.size(), 24u);
  EXPECT_EQ(t.rows[1].config.at("op"), "kantorovich");
  EXPECT_EQ(t.rows[1].config.at("n"), 20);
  EXPECT_EQ(t.rows[3].config.at("levels"), 2);
  EXPECT_EQ(t.provenance.at("filter_scope"), "roi");
}

TEST(RoiTable, DegenerateRowsAreRecorded) {
  // A phantom too small for the catalog windows is a configuration error...
  RoiTableConfig small;
  small.phantom.size = 64;
  EXPECT_THROW(run_roi_table(small), ConfigError);
  // ...while a zero-mean window is recorded per row.
  const Volume zero({20, 20}, 0.0);
  const auto r = detail::roi_row(zero, zero, {"void", 0, 20, 0, 20}, "void", "Identity", Json::object(), 1.0);
  EXPECT_FALSE(r.error.empty());
  EXPECT_TRUE(std::isnan(r.values[0]));
  TableResult t;
  t.name = "roi";
  t.label_column = "roi";
  t.has_operator_column = true;
  t.value_columns = roi_value_columns();
  t.rows.push_back(r);
  EXPECT_NE(csv(t).find("# error void Identity: "), std::string::npos);
  EXPECT_NE(csv(t).find("\nvoid,Identity,nan,nan,nan,nan,nan,nan\n"), std::string::npos);
}

TEST(WriteJson, NonFiniteAsStrings) {
  TableResult t;
  t.name = "demo";
  t.label_column = "k";
  t.value_columns = {"v"};
  t.rows.push_back({"a", "", {kInfinity}, nullptr, ""});
  t.rows.push_back({"b", "", {0.5}, nullptr, ""});
  std::ostringstream os;
  write_json(os, t);
  const Json j = Json::parse(os.str());
  EXPECT_EQ(j.at("table"), "demo");
  EXPECT_EQ(j.at("rows")[0].at("v"), "inf");
  EXPECT_EQ(j.at("rows")[1].at("v"), 0.5);
}

}  // namespace
}  // namespace skfb
