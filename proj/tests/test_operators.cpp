#include <skfb/operators.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"

namespace skfb {
namespace {

double max_abs_diff(const Volume& a, const Volume& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Volume line(std::vector<double> v) {
  const std::size_t n = v.size();
  return Volume({n}, std::move(v));
}

TEST(Boundary, ParseAndNames) {
  for (auto b : {Boundary::Reflect, Boundary::Clamp, Boundary::Periodic, Boundary::Antisymmetric})
    EXPECT_EQ(parse_boundary(to_string(b)), b);
  EXPECT_THROW(parse_boundary("wrap"), ConfigError);
}

TEST(Boundary, ExtensionRules) {
  const Volume v = line({1, 2, 3, 4});
  auto at = [&](std::ptrdiff_t i, Boundary b) { return detail::extended_at(v, {i, 0, 0}, b); };
  // Half-sample mirror: 4 3 2 1 | 1 2 3 4 | 4 3 2 1
  EXPECT_EQ(at(-1, Boundary::Reflect), 1);
  EXPECT_EQ(at(-3, Boundary::Reflect), 3);
  EXPECT_EQ(at(4, Boundary::Reflect), 4);
  EXPECT_EQ(at(6, Boundary::Reflect), 2);
  EXPECT_EQ(at(9, Boundary::Reflect), 2);
  EXPECT_EQ(at(-2, Boundary::Clamp), 1);
  EXPECT_EQ(at(7, Boundary::Clamp), 4);
  EXPECT_EQ(at(-1, Boundary::Periodic), 4);
  EXPECT_EQ(at(5, Boundary::Periodic), 2);
  // Point reflection through the edge sample.
  EXPECT_EQ(at(-1, Boundary::Antisymmetric), 0);
  EXPECT_EQ(at(-3, Boundary::Antisymmetric), -2);
  EXPECT_EQ(at(4, Boundary::Antisymmetric), 5);
  EXPECT_EQ(at(7, Boundary::Antisymmetric), 8);
}

TEST(Boundary, ReflectMatchesWalkingMirror) {
  std::mt19937_64 rng(1);
  const Volume v = oracle::random_volume({5}, rng);
  for (std::ptrdiff_t i = -23; i < 29; ++i)
    EXPECT_EQ(detail::extended_at(v, {i, 0, 0}, Boundary::Reflect), v[static_cast<std::size_t>(oracle::mirror(i, 5))]);
}

TEST(Boundary, AntisymmetricExtendsLinesExactly) {
  const Volume v = line({0.5, 1.0, 1.5, 2.0, 2.5});
  for (std::ptrdiff_t i = -12; i < 17; ++i)
    EXPECT_DOUBLE_EQ(detail::extended_at(v, {i, 0, 0}, Boundary::Antisymmetric), 0.5 + 0.5 * static_cast<double>(i));
}

TEST(GaussianFilter, ConstantPreserved) {
  for (auto b : {Boundary::Reflect, Boundary::Clamp, Boundary::Periodic, Boundary::Antisymmetric}) {
    const Volume v({6, 7, 5}, 0.42);
    EXPECT_LE(max_abs_diff(gaussian_filter(v, 1.3, b), v), 1e-12);
  }
}

TEST(GaussianFilter, ImpulseGivesStencil) {
  std::vector<double> d(9, 0.0);
  d[4] = 1.0;
  const Volume out = gaussian_filter(line(d), 1.0, Boundary::Clamp);
  const auto s = discrete_gaussian_stencil(1.0);
  EXPECT_EQ(out[0], 0.0);
  EXPECT_EQ(out[8], 0.0);
  for (std::size_t i = 1; i < 8; ++i) EXPECT_NEAR(out[i], s.weights[i - 1], 1e-17);
}

TEST(GaussianFilter, MatchesDenseConvolution) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::size_t> size(2, 33);
  std::uniform_real_distribution<double> sig(0.3, 4.0);
  for (int trial = 0; trial < 25; ++trial) {
    const Volume v = oracle::random_volume({size(rng), size(rng)}, rng, 0.0, 1.0);
    const double sigma = sig(rng);
    EXPECT_LE(max_abs_diff(gaussian_filter(v, sigma), oracle::dense_gaussian_2d(v, sigma)), 1e-12)
        << v.dim(0) << "x" << v.dim(1) << " sigma " << sigma;
  }
}

TEST(GaussianFilter, Linear) {
  std::mt19937_64 rng(4);
  const Volume f = oracle::random_volume({9, 10, 11}, rng);
  const Volume g = oracle::random_volume({9, 10, 11}, rng);
  const double a = 1.7, c = -0.3;
  Volume mix(f.dims());
  for (std::size_t i = 0; i < f.size(); ++i) mix[i] = a * f[i] + c * g[i];
  const Volume gf = gaussian_filter(f, 1.5), gg = gaussian_filter(g, 1.5), gm = gaussian_filter(mix, 1.5);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(gm[i], a * gf[i] + c * gg[i], 1e-12);
}

TEST(GaussianFilter, RangeBound) {
  std::mt19937_64 rng(8);
  for (auto b : {Boundary::Reflect, Boundary::Clamp, Boundary::Periodic}) {
    const Volume v = oracle::random_volume({20, 17}, rng, -2.0, 5.0);
    const auto [lo, hi] = std::minmax_element(v.data().begin(), v.data().end());
    for (double x : gaussian_filter(v, 2.2, b).data()) {
      EXPECT_GE(x, *lo - 1e-12);
      EXPECT_LE(x, *hi + 1e-12);
    }
  }
}

TEST(GaussianFilter, RejectsBadSigma) {
  EXPECT_THROW(gaussian_filter(Volume({4}, 0.0), 0.0), ConfigError);
  EXPECT_THROW(gaussian_filter(Volume({4}, 0.0), -1.0), ConfigError);
}

TEST(IteratedGaussian, OneIterationIsGaussian) {
  std::mt19937_64 rng(2);
  const Volume v = oracle::random_volume({12, 13}, rng);
  EXPECT_EQ(iterated_gaussian(v, 1.0, 1), gaussian_filter(v, 1.0));
  EXPECT_EQ(iterated_gaussian(v, 1.0, 3), gaussian_filter(gaussian_filter(gaussian_filter(v, 1.0), 1.0), 1.0));
  EXPECT_LE(max_abs_diff(iterated_gaussian(Volume({8, 8}, 3.0), 1.0, 5), Volume({8, 8}, 3.0)), 1e-12);
  EXPECT_THROW(iterated_gaussian(v, 1.0, 0), ConfigError);
}

TEST(Bilateral, ConstantPreserved) {
  const Volume v({5, 6, 7}, 0.8);
  EXPECT_LE(max_abs_diff(bilateral_filter(v, {1.0, 0.05}), v), 1e-12);
}

TEST(Bilateral, HugeRangeSigmaIsGaussian) {
  std::mt19937_64 rng(6);
  const Volume v = oracle::random_volume({14, 15}, rng, 0.0, 1.0);
  for (auto b : {Boundary::Reflect, Boundary::Periodic}) {
    const Volume bil = bilateral_filter(v, {1.0, 1e6}, b);
    EXPECT_LE(max_abs_diff(bil, gaussian_filter(v, 1.0, b)), 1e-6);
  }
}

TEST(Bilateral, StepEdgePreserved) {
  std::vector<double> d(16, 0.0);
  std::fill(d.begin() + 8, d.end(), 1.0);
  const Volume v = line(d);
  EXPECT_LT(max_abs_diff(bilateral_filter(v, {1.0, 0.05}), v), 0.02);
}

TEST(Bilateral, RangeBoundAndValidation) {
  std::mt19937_64 rng(12);
  const Volume v = oracle::random_volume({10, 9, 8}, rng, 0.1, 0.9);
  const auto [lo, hi] = std::minmax_element(v.data().begin(), v.data().end());
  for (double x : bilateral_filter(v, {1.2, 0.2}).data()) {
    EXPECT_GE(x, *lo - 1e-12);
    EXPECT_LE(x, *hi + 1e-12);
  }
  EXPECT_THROW(bilateral_filter(v, {0.0, 0.1}), ConfigError);
  EXPECT_THROW(bilateral_filter(v, {1.0, -0.1}), ConfigError);
}

const AnalyticFn kIdentity1{1, [](std::span<const double> p) { return p[0]; }};

TEST(SkCellAverage, ConstantReproduced) {
  for (const Kernel& k : {Kernel::box(), Kernel::cubic_bspline()}) {
    const Volume out = sk_cell_average(constant_fn(2, 0.6), 8, k, {{9, 9}});
    for (double x : out.data()) EXPECT_NEAR(x, 0.6, 1e-12);
  }
}

TEST(SkCellAverage, BoxOnIdentityIsCellMidpoint) {
  for (int n : {3, 8, 13}) {
    const Volume out = sk_cell_average(kIdentity1, n, Kernel::box(), {{41}});
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double x = out.coordinate(0, i);
      EXPECT_NEAR(out[i], (std::floor(n * x) + 0.5) / n, 1e-14) << "n " << n << " x " << x;
    }
  }
}

TEST(SkCellAverage, BSplineReproducesLinearsAwayFromEdges) {
  // Cubic B-splines reproduce affine data; cell means of x are the midpoints.
  const Volume out = sk_cell_average(kIdentity1, 16, Kernel::cubic_bspline(), {{33}});
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(out[i], out.coordinate(0, i), 1e-13);
}

TEST(SkCellAverage, VolumeFormMatchesAnalyticOnConstants) {
  const Volume cells({8, 8}, 1.25, GridKind::CellCentered);
  const Volume out = sk_cell_average(cells, 8, Kernel::cubic_bspline(), {{5, 7}});
  for (double x : out.data()) EXPECT_NEAR(x, 1.25, 1e-12);
}

TEST(SkCellAverage, VolumeFormLinearAndBounded) {
  std::mt19937_64 rng(30);
  const Volume f = oracle::random_volume({10, 10}, rng, 0.0, 1.0);
  const Volume g = oracle::random_volume({10, 10}, rng, 0.0, 1.0);
  Volume mix(f.dims());
  for (std::size_t i = 0; i < f.size(); ++i) mix[i] = 2.0 * f[i] - 0.5 * g[i];
  const EvalGrid eval{{23, 19}};
  const Kernel k = Kernel::cubic_bspline();
  const Volume sf = sk_cell_average(f, 10, k, eval), sg = sk_cell_average(g, 10, k, eval);
  const Volume sm = sk_cell_average(mix, 10, k, eval);
  for (std::size_t i = 0; i < sf.size(); ++i) {
    EXPECT_NEAR(sm[i], 2.0 * sf[i] - 0.5 * sg[i], 1e-12);
    EXPECT_GE(sf[i], -1e-12);
    EXPECT_LE(sf[i], 1.0 + 1e-12);
  }
}

TEST(SkCellAverage, ErrorPaths) {
  EXPECT_THROW(sk_cell_average(kIdentity1, 0, Kernel::box(), {{4}}), ConfigError);
  EXPECT_THROW(sk_cell_average(kIdentity1, 4, Kernel::box(), {{4, 4}}), DimensionError);
  EXPECT_THROW(sk_cell_average(Volume({5}, 0.0), 4, Kernel::box(), {{4}}), DimensionError);
}

TEST(SkPointSample, BoxReproducesSamplesOnNodes) {
  std::mt19937_64 rng(40);
  const Volume s = oracle::random_volume({7, 7, 7}, rng);
  EXPECT_EQ(sk_point_sample(s, 6, Kernel::box(), {{7, 7, 7}}), s);
}

TEST(SkPointSample, ConstantPreserved) {
  const Volume s({9, 9}, 0.3);
  // Box: one node fires everywhere in [0,1].
  for (double x : sk_point_sample(s, 8, Kernel::box(), {{31, 31}}).data()) EXPECT_NEAR(x, 0.3, 1e-12);
  // Cubic B-spline: unit node sums only where all four taps are on the lattice.
  const Volume out = sk_point_sample(s, 8, Kernel::cubic_bspline(), {{33, 33}});
  for (std::size_t i = 0; i < 33; ++i)
    for (std::size_t j = 0; j < 33; ++j) {
      const double x = out.coordinate(0, i), y = out.coordinate(1, j);
      if (x >= 0.25 && x <= 0.75 && y >= 0.25 && y <= 0.75) {
        EXPECT_NEAR(out.at(i, j), 0.3, 1e-12);
      }
    }
}

TEST(SkPointSample, MatchesTripleSumAtRandomPoints) {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 9;
  const Volume s = oracle::random_volume({10, 10, 10}, rng);
  for (int trial = 0; trial < 10; ++trial) {
    const double p[3] = {u(rng), u(rng), u(rng)};
    const Volume out = sk_point_sample(s, n, Kernel::cubic_bspline(), EvalGrid::point(p));
    EXPECT_NEAR(out[0], oracle::point_sample_3d(s, n, p[0], p[1], p[2]), 1e-12);
  }
}

TEST(SkPointSample, LinearAndErrors) {
  std::mt19937_64 rng(51);
  const Volume f = oracle::random_volume({6, 6}, rng), g = oracle::random_volume({6, 6}, rng);
  Volume mix(f.dims());
  for (std::size_t i = 0; i < f.size(); ++i) mix[i] = f[i] + 3.0 * g[i];
  const EvalGrid eval{{11, 13}, GridKind::CellCentered};
  const Kernel k = Kernel::cubic_bspline();
  const Volume a = sk_point_sample(f, 5, k, eval), b = sk_point_sample(g, 5, k, eval);
  const Volume m = sk_point_sample(mix, 5, k, eval);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(m[i], a[i] + 3.0 * b[i], 1e-12);
  EXPECT_THROW(sk_point_sample(f, 6, k, {{3, 3}}), DimensionError);
  EXPECT_THROW(sk_point_sample(f, 5, k, {{3}}), DimensionError);
}

TEST(EvalGridTest, ExplicitCoordinatesChecked) {
  EvalGrid g{{2}, GridKind::NodeCentered, {{0.1, 0.2, 0.3}}};
  EXPECT_THROW(sk_point_sample(Volume({5}, 0.0), 4, Kernel::box(), g), DimensionError);
}

TEST(PointwiseError, HandValues) {
  const Volume e = pointwise_error(line({1, 2}), line({0, 4}));
  EXPECT_EQ(e[0], 1.0);
  EXPECT_EQ(e[1], 2.0);
  const Volume z = pointwise_error(line({1, 2}), line({1, 2}));
  EXPECT_EQ(z, Volume({2}, 0.0));
  EXPECT_THROW(pointwise_error(line({1}), line({1, 2})), DimensionError);
}

}  // namespace
}  // namespace skfb
