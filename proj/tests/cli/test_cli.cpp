#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "graphsys/cgl.hpp"
#include "graphsys/evaluation.hpp"
#include "graphsys/experiment.hpp"
#include "graphsys/filter.hpp"
#include "graphsys/graph.hpp"
#include "graphsys/io.hpp"
#include "graphsys/signal.hpp"

namespace fs = std::filesystem;
using graphsys::cli::run_cli;
using namespace graphsys;

namespace {

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("graphsys_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    write_text_file(dir_ / name, text);
    return path(name);
  }

  fs::path dir_;
};

const char* kGridConfig = R"({
  "graph": {"kind": "grid", "n": 16, "seed": 11},
  "filter": {"kind": "exponential_decay", "beta": 0.5},
  "k_over_n": [5],
  "trials": 3,
  "threads": 1
})";

}  // namespace

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"generate"}).code, 2);
  EXPECT_EQ(invoke({"sample", "--graph", path("missing.json")}).code, 2);
  const Invocation help = invoke({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("identify"), std::string::npos);
}

TEST_F(CliTest, GenerateWritesOneGraphPerTrialDeterministically) {
  const std::string cfg = write("cfg.json", kGridConfig);
  ASSERT_EQ(invoke({"generate", "--config", cfg, "--out", path("a")}).code, 0);
  ASSERT_EQ(invoke({"generate", "--config", cfg, "--out", path("b")}).code, 0);
  int files = 0;
  for (const auto& entry : fs::directory_iterator(path("a"))) {
    ++files;
    const fs::path twin = fs::path(path("b")) / entry.path().filename();
    EXPECT_EQ(read_text_file(entry.path()), read_text_file(twin));
  }
  EXPECT_EQ(files, 3);

  GraphModelSpec spec;
  spec.kind = GraphKind::grid;
  spec.n = 16;
  spec.seed = trial_seed(11, 1);
  EXPECT_EQ(read_graph(fs::path(path("a")) / "graph_001.json"), generate_graph(spec));

  ASSERT_EQ(invoke({"generate", "--config", cfg, "--seed", "12", "--out", path("c")}).code, 0);
  EXPECT_NE(read_text_file(fs::path(path("a")) / "graph_000.json"),
            read_text_file(fs::path(path("c")) / "graph_000.json"));
}

TEST_F(CliTest, GenerateRejectsNonSquareGrid) {
  const std::string cfg = write("cfg.json", R"({"graph": {"kind": "grid", "n": 35}, "filter": {"kind": "hop_localized", "beta": 2}})");
  const Invocation r = invoke({"generate", "--config", cfg, "--out", path("g")});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("perfect square"), std::string::npos) << r.err;
}

TEST_F(CliTest, SampleIsSeedDeterministicAndConsistent) {
  GraphModelSpec spec;
  spec.n = 12;
  spec.p = 0.4;
  spec.seed = 3;
  const WeightedGraph g = generate_graph(spec);
  write_graph(path("g.json"), g);
  EXPECT_EQ(invoke({"sample", "--graph", path("g.json"), "--filter", "exponential_decay", "--k", "0"}).code, 2);
  EXPECT_EQ(invoke({"sample", "--graph", path("g.json"), "--k", "5"}).code, 2);

  const std::vector<std::string> args{"sample", "--graph", path("g.json"), "--filter", "exponential_decay",
                                      "--beta", "0.5", "--k", "1200", "--seed", "9"};
  const Invocation first = invoke(args);
  const Invocation second = invoke(args);
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_EQ(first.out, second.out);

  const Matrix s = sample_covariance(SignalBatch{matrix_from_csv(first.out)});
  const Matrix sigma = apply_filter({FilterKind::exponential_decay, 0.5}, build_cgl(g));
  EXPECT_LT(relative_error(s, sigma), 0.1);
}

TEST_F(CliTest, IdentifyRecoversExactVarianceShift) {
  GraphModelSpec spec;
  spec.seed = 4;
  const WeightedGraph g = generate_graph(spec);
  const CglMatrix l = build_cgl(g);
  write_matrix_csv(path("cov.csv"), apply_filter({FilterKind::variance_shifting, 0.3}, l));
  write_graph(path("truth.json"), g);

  const Invocation r = invoke({"identify", "--covariance", path("cov.csv"), "--filter", "variance_shifting", "--truth",
                     path("truth.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_NEAR(doc.at("beta_hat").get<double>(), 0.3, 1e-10);
  EXPECT_TRUE(doc.at("converged").get<bool>());
  EXPECT_LT(doc.at("metrics").at("re").get<double>(), 1e-6);
  EXPECT_DOUBLE_EQ(doc.at("metrics").at("fs").get<double>(), 1.0);
}

TEST_F(CliTest, IdentifyBaselineAndOutputFile) {
  GraphModelSpec spec;
  spec.n = 10;
  spec.p = 0.4;
  spec.seed = 8;
  const CglMatrix l = build_cgl(generate_graph(spec));
  const Matrix sigma = apply_filter({FilterKind::frequency_scaling, 1.0}, l) + 0.2 * Matrix::Identity(10, 10);
  write_matrix_csv(path("cov.csv"), sigma);
  ASSERT_EQ(invoke({"identify", "--covariance", path("cov.csv"), "--method", "cgl_noprefilter", "--alpha", "0.01",
                 "--out", path("res/out.json")})
                .code,
            0);
  const auto doc = nlohmann::json::parse(read_text_file(path("res/out.json")));
  const CglMatrix direct = estimate_cgl({sigma, 0.01, std::nullopt}).laplacian;
  const auto rows = doc.at("L_hat");
  double gap = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) gap = std::max(gap, std::abs(rows[i][j].get<double>() - direct(i, j)));
  }
  EXPECT_LT(gap, 1e-12);
  EXPECT_FALSE(doc.contains("metrics"));
}

TEST_F(CliTest, IdentifyArgumentChecks) {
  write_matrix_csv(path("cov.csv"), Matrix::Identity(3, 3));
  write_matrix_csv(path("x.csv"), Matrix::Identity(3, 3));
  EXPECT_EQ(invoke({"identify", "--covariance", path("cov.csv")}).code, 2);
  EXPECT_EQ(invoke({"identify", "--filter", "hop_localized"}).code, 2);
  EXPECT_EQ(invoke({"identify", "--covariance", path("cov.csv"), "--signals", path("x.csv"), "--filter",
                 "hop_localized"})
                .code,
            2);
  EXPECT_EQ(invoke({"identify", "--covariance", path("cov.csv"), "--filter", "hop_localized", "--alpha", "grid"}).code,
            2);
  EXPECT_EQ(invoke({"identify", "--covariance", path("cov.csv"), "--filter", "hop_localized", "--alpha", "abc"}).code,
            2);
  EXPECT_EQ(invoke({"identify", "--covariance", path("cov.csv"), "--filter", "wavelet"}).code, 2);
  EXPECT_EQ(invoke({"identify", "--covariance", path("cov.csv"), "--method", "ipf", "--filter", "hop_localized"}).code,
            2);
  write_text_file(path("bad.csv"), "1,2\n3\n");
  EXPECT_EQ(invoke({"identify", "--covariance", path("bad.csv"), "--filter", "hop_localized"}).code, 1);
}

TEST_F(CliTest, IdentifyGridSelectsAlphaFromSignals) {
  GraphModelSpec spec;
  spec.n = 16;
  spec.kind = GraphKind::grid;
  spec.seed = 2;
  const WeightedGraph g = generate_graph(spec);
  write_graph(path("g.json"), g);
  ASSERT_EQ(invoke({"sample", "--graph", path("g.json"), "--filter", "exponential_decay", "--beta", "0.5", "--k", "80",
                 "--seed", "1", "--out", path("x.csv")})
                .code,
            0);
  const Invocation r = invoke({"identify", "--signals", path("x.csv"), "--filter", "exponential_decay", "--alpha", "grid",
                     "--truth", path("g.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  const Matrix s = sample_covariance(SignalBatch{read_matrix_csv(path("x.csv"))});
  const auto grid = alpha_grid(s, 16, 80);
  const double chosen = doc.at("metrics").at("alpha").get<double>();
  EXPECT_NE(std::find(grid.begin(), grid.end(), chosen), grid.end());
  EXPECT_TRUE(doc.at("scale_note").get<bool>());
}

TEST_F(CliTest, SweepAndReport) {
  const std::string cfg = write("cfg.json", kGridConfig);
  const Invocation first = invoke({"sweep", "--config", cfg, "--out", path("s1")});
  ASSERT_EQ(first.code, 0) << first.err;
  ASSERT_EQ(invoke({"sweep", "--config", cfg, "--out", path("s2")}).code, 0);
  const std::string csv = read_text_file(fs::path(path("s1")) / "results.csv");
  EXPECT_EQ(csv, read_text_file(fs::path(path("s2")) / "results.csv"));
  EXPECT_EQ(rows_from_csv(csv).size(), 9u);  // 3 methods x 3 trials x 1 ratio
  EXPECT_TRUE(fs::exists(fs::path(path("s1")) / "series.csv"));
  EXPECT_NE(first.out.find("gsi"), std::string::npos);

  ASSERT_EQ(invoke({"sweep", "--config", cfg, "--out", path("s3"), "--method", "ipf"}).code, 0);
  EXPECT_EQ(rows_from_csv(read_text_file(fs::path(path("s3")) / "results.csv")).size(), 3u);
  EXPECT_EQ(invoke({"sweep", "--config", cfg, "--method", "nope"}).code, 2);

  const Invocation report = invoke({"report", "--results", path("s1/results.csv"), "--out", path("r")});
  ASSERT_EQ(report.code, 0) << report.err;
  EXPECT_EQ(report.out, first.out);
  EXPECT_EQ(read_text_file(fs::path(path("r")) / "series.csv"), read_text_file(fs::path(path("s1")) / "series.csv"));
}
