#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "graphsys/evaluation.hpp"
#include "graphsys/filter.hpp"
#include "graphsys/graph.hpp"
#include "graphsys/identify.hpp"

namespace graphsys {

enum class AlphaMode { grid, fixed };

/// Monte-Carlo experiment description, normally read from JSON:
///
///   {
///     "graph":   {"kind": "erdos_renyi", "n": 36, "p": 0.2, "seed": 7, ...},
///     "filter":  {"kind": "exponential_decay", "beta": 0.5}   (or an array),
///     "k_over_n": [5, 30],
///     "trials": 10,
///     "alpha_mode": "grid" | "fixed", "alpha": 0.0,
///     "methods": ["gsi", "cgl_noprefilter", "ipf"],
///     "exact_covariance": false,
///     "record_wall_time": false,
///     "edge_eps": 1e-4,
///     "threads": 0,
///     "output_dir": "out"
///   }
///
/// graph.seed is the root seed. Trial t draws its graph from substream t of
/// the root; its samples for a given k come from substream k of the trial
/// seed.
struct ExperimentConfig {
  GraphModelSpec graph;
  std::vector<FilterSpec> filters;
  std::vector<double> k_over_n{0.5, 1, 2, 5, 10, 30};
  int trials = 10;
  AlphaMode alpha_mode = AlphaMode::grid;
  double alpha = 0.0;
  std::vector<Method> methods{Method::gsi, Method::cgl_noprefilter, Method::ipf};
  bool exact_covariance = false;
  /// Off by default so reruns produce byte-identical CSVs (wall_ms = 0).
  bool record_wall_time = false;
  double edge_eps = kDefaultEdgeEps;
  int threads = 0;  // 0: hardware concurrency
  std::string output_dir = "out";
  GsiOptions gsi;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

ExperimentConfig parse_experiment_config(std::string_view json_text);

struct ResultRow {
  std::string method;
  std::string graph_kind;
  std::string filter_kind;
  double beta_true = 0.0;
  double beta_hat = 0.0;
  int n = 0;
  int k = 0;  // 0 for exact-covariance runs
  std::uint64_t trial_seed = 0;
  double alpha = 0.0;
  double re = 0.0;
  double fs = 0.0;
  double wall_ms = 0.0;
};

inline constexpr std::string_view kResultsHeader =
    "method,graph_kind,filter_kind,beta_true,beta_hat,n,k,trial_seed,alpha,re,fs,wall_ms";

std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_csv(std::string_view text);

/// Seed of trial t under a root seed.
std::uint64_t trial_seed(std::uint64_t root_seed, int trial);

/// Sample count for a ratio: max(1, round(ratio * n)).
int samples_for_ratio(double k_over_n, int n);

/// Runs every (filter, trial, k) cell and every method in it. Cells run on a
/// worker pool; rows come back in cell order regardless of scheduling. A
/// failing method records NaN metrics in its row and the sweep continues.
std::vector<ResultRow> run_sweep(const ExperimentConfig& config);

struct SummaryRow {
  std::string method;
  std::string graph_kind;
  std::string filter_kind;
  double beta_true = 0.0;
  int n = 0;
  int k = 0;
  int count = 0;  // rows with finite metrics
  double mean_re = 0.0;
  double stderr_re = 0.0;
  double mean_fs = 0.0;
  double stderr_fs = 0.0;
};

/// Means and standard errors grouped by (method, graph, filter, beta, n, k),
/// in first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

/// Plain-text table: k/n against mean RE and mean FS per method.
std::string summary_table(const std::vector<SummaryRow>& summary);

/// CSV series for plotting:
/// method,graph_kind,filter_kind,beta_true,k_over_n,mean_re,stderr_re,mean_fs,stderr_fs,trials
std::string series_csv(const std::vector<SummaryRow>& summary);

}  // namespace graphsys
