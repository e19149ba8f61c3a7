#include <cmath>

#include <gtest/gtest.h>

#include "graphsys/evaluation.hpp"
#include "graphsys/filter.hpp"
#include "graphsys/graph.hpp"
#include "graphsys/rng.hpp"
#include "graphsys/signal.hpp"
#include "support/oracles.hpp"

using namespace graphsys;
using graphsys::testing::random_connected_graph;

namespace {

Matrix path_laplacian(const std::vector<Edge>& edges, int n) { return CglMatrix::from_edges(n, edges).matrix(); }

}  // namespace

TEST(RelativeError, Basics) {
  const Matrix l = build_cgl(random_connected_graph(6, 1)).matrix();
  EXPECT_EQ(relative_error(l, l), 0.0);
  EXPECT_NEAR(relative_error(2.0 * l, l), 1.0, 1e-15);
  EXPECT_THROW(relative_error(l, Matrix::Zero(6, 6)), std::invalid_argument);
  EXPECT_THROW(relative_error(l, Matrix::Identity(5, 5)), std::invalid_argument);
}

TEST(FScore, Examples) {
  const Matrix a = path_laplacian({{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}}, 4);
  EXPECT_EQ(f_score(a, a).fs, 1.0);
  // truth edges {01, 12, 23}; estimate {01, 12, 03}: tp 2, fp 1, fn 1.
  const Matrix b = path_laplacian({{0, 1, 1.0}, {1, 2, 1.0}, {0, 3, 1.0}}, 4);
  const EdgeScore s = f_score(b, a);
  EXPECT_EQ(s.tp, 2);
  EXPECT_EQ(s.fp, 1);
  EXPECT_EQ(s.fn, 1);
  EXPECT_NEAR(s.fs, 2.0 * 2 / (4 + 1 + 1), 1e-15);
  EXPECT_EQ(f_score(Matrix::Zero(4, 4), a).fs, 0.0);
  EXPECT_EQ(f_score(Matrix::Zero(4, 4), Matrix::Zero(4, 4)).fs, 1.0);
  EXPECT_THROW(f_score(a, a, 0.0), std::invalid_argument);
}

TEST(FScore, ThresholdIsAbsolute) {
  const Matrix truth = path_laplacian({{0, 1, 1.0}}, 3);
  const Matrix est = path_laplacian({{0, 1, 1.0}, {1, 2, 5e-5}}, 3);
  EXPECT_EQ(f_score(est, truth).fp, 0);
  EXPECT_EQ(f_score(est, truth, 1e-5).fp, 1);
}

TEST(FScore, SymmetricUnderSwap) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Matrix a = build_cgl(random_connected_graph(8, s, 0.3)).matrix();
    const Matrix b = build_cgl(random_connected_graph(8, 50 + s, 0.3)).matrix();
    const EdgeScore ab = f_score(a, b);
    const EdgeScore ba = f_score(b, a);
    EXPECT_EQ(ab.fs, ba.fs);
    EXPECT_EQ(ab.fp, ba.fn);
    EXPECT_EQ(ab.fn, ba.fp);
    EXPECT_GE(ab.fs, 0.0);
    EXPECT_LE(ab.fs, 1.0);
  }
}

TEST(TraceNormalize, Examples) {
  const Matrix truth = build_cgl(random_connected_graph(7, 2)).matrix();
  EXPECT_LT((trace_normalize(3.5 * truth, truth) - truth).norm(), 1e-13 * truth.norm());
  EXPECT_EQ(trace_normalize(truth, truth), truth);
  const Matrix other = build_cgl(random_connected_graph(7, 3)).matrix();
  EXPECT_NEAR(trace_normalize(other, truth).trace(), truth.trace(), 1e-12 * truth.trace());
  EXPECT_THROW(trace_normalize(Matrix::Zero(7, 7), truth), std::invalid_argument);
}

TEST(TraceNormalize, RelativeErrorIsScaleInvariant) {
  const Matrix truth = build_cgl(random_connected_graph(7, 4)).matrix();
  const Matrix est = build_cgl(random_connected_graph(7, 5)).matrix();
  const double base = relative_error(trace_normalize(est, truth), truth);
  for (double c : {1e-3, 0.5, 7.0, 1e4}) {
    EXPECT_NEAR(relative_error(trace_normalize(c * est, truth), truth), base, 1e-12);
  }
}

TEST(AlphaGrid, Shape) {
  Matrix s = Matrix::Identity(36, 36);
  s(0, 1) = s(1, 0) = 1.0;
  const auto grid = alpha_grid(s, 36, 1080);
  ASSERT_EQ(grid.size(), 15u);
  EXPECT_EQ(grid[0], 0.0);
  EXPECT_NEAR(grid[1], 0.75 * std::sqrt(std::log(36.0) / 1080.0), 1e-15);
  EXPECT_NEAR(grid[1], 0.0432, 5e-5);
  for (std::size_t r = 2; r < grid.size(); ++r) EXPECT_LT(grid[r], grid[r - 1]);
  EXPECT_EQ(std::count(grid.begin(), grid.end(), 0.0), 1);
  EXPECT_NEAR(grid[14], std::pow(0.75, 14) * std::sqrt(std::log(36.0) / 1080.0), 1e-17);
}

TEST(AlphaGrid, ShrinksWithSampleCount) {
  Matrix s = Matrix::Identity(4, 4);
  s(2, 3) = s(3, 2) = -0.5;
  const auto small = alpha_grid(s, 4, 10);
  const auto large = alpha_grid(s, 4, 10000000);
  for (std::size_t r = 1; r < small.size(); ++r) {
    EXPECT_LT(large[r], small[r]);
    EXPECT_LT(large[r], 1e-3);
  }
  EXPECT_THROW(alpha_grid(s, 4, 0), std::invalid_argument);
  EXPECT_THROW(alpha_grid(s, 1, 5), std::invalid_argument);
}

TEST(Method, NamesRoundTrip) {
  for (Method m : {Method::gsi, Method::cgl_noprefilter, Method::ipf}) EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_THROW(parse_method("gls"), std::invalid_argument);
}

TEST(BestAlphaSweep, ExactCovariancePicksZero) {
  GraphModelSpec spec;
  spec.n = 16;
  spec.p = 0.3;
  spec.seed = 4;
  const CglMatrix l = build_cgl(generate_graph(spec));
  const FilterSpec filter{FilterKind::variance_shifting, 0.3};
  const Matrix sigma = apply_filter(filter, l);
  GsiOptions opts;
  opts.filter_kind = filter.kind;
  TrialInput input{sigma, 0, l, Method::gsi, filter, opts, kDefaultEdgeEps};
  const SweepOutcome out = best_alpha_sweep(input, alpha_grid(sigma, 16, 160));
  EXPECT_EQ(out.metrics.alpha_used, 0.0);
  EXPECT_LT(out.metrics.re, 1e-4);
  EXPECT_EQ(out.metrics.fs, 1.0);
}

TEST(BestAlphaSweep, ReportsFsOfTheReMinimizer) {
  GraphModelSpec spec;
  spec.seed = 9;
  const CglMatrix l = build_cgl(generate_graph(spec));
  const FilterSpec filter{FilterKind::hop_localized, 1};
  const Matrix s = sample_covariance(sample_signals(apply_filter(filter, l), 36, 3));
  GsiOptions opts;
  TrialInput input{s, 36, l, Method::cgl_noprefilter, filter, opts, kDefaultEdgeEps};
  const auto grid = alpha_grid(s, 36, 36);
  const SweepOutcome out = best_alpha_sweep(input, grid);
  double best_re = INFINITY;
  MetricReport at_best;
  for (double a : grid) {
    const MetricReport m = score_estimate(estimate_cgl({s, a, std::nullopt}).laplacian.matrix(), l, a);
    if (m.re < best_re) {
      best_re = m.re;
      at_best = m;
    }
  }
  EXPECT_NEAR(out.metrics.re, at_best.re, 1e-6);
  EXPECT_EQ(out.metrics.alpha_used, at_best.alpha_used);
  EXPECT_NEAR(out.metrics.fs, at_best.fs, 1e-12);
}

TEST(BestAlphaSweep, RegularizationHelpsAtSmallSampleSizes) {
  int positive = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GraphModelSpec spec;
    spec.seed = 200 + seed;
    const CglMatrix l = build_cgl(generate_graph(spec));
    const FilterSpec filter{FilterKind::hop_localized, 1};
    const Matrix s = sample_covariance(sample_signals(apply_filter(filter, l), 36, substream_seed(seed, 36)));
    GsiOptions opts;
    opts.filter_kind = filter.kind;
    TrialInput input{s, 36, l, Method::gsi, filter, opts, kDefaultEdgeEps};
    if (best_alpha_sweep(input, alpha_grid(s, 36, 36)).metrics.alpha_used > 0.0) ++positive;
  }
  EXPECT_GE(positive, 7);
}

TEST(ScoreEstimate, NormalizesBeforeScoring) {
  const CglMatrix l = build_cgl(random_connected_graph(8, 7));
  const MetricReport m = score_estimate(4.0 * l.matrix(), l, 0.1);
  EXPECT_LT(m.re, 1e-14);
  EXPECT_EQ(m.fs, 1.0);
  EXPECT_EQ(m.alpha_used, 0.1);
}
