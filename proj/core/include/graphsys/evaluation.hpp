#pragma once

#include <string_view>
#include <vector>

#include "graphsys/filter.hpp"
#include "graphsys/graph.hpp"
#include "graphsys/identify.hpp"
#include "graphsys/types.hpp"

namespace graphsys {

inline constexpr double kDefaultEdgeEps = 1e-4;

struct EdgeScore {
  double fs = 0.0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

struct MetricReport {
  double re = 0.0;
  double fs = 0.0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double alpha_used = 0.0;
};

/// ||L_hat - L_star||_F / ||L_star||_F. Throws std::invalid_argument on a
/// shape mismatch or a zero reference.
double relative_error(const Matrix& L_hat, const Matrix& L_star);

/// Edge detection F-score: pair (i, j), i < j, is an edge of a matrix when
/// -entry(i, j) > edge_eps. fs = 2tp / (2tp + fn + fp), and 1 when both edge
/// sets are empty.
EdgeScore f_score(const Matrix& L_hat, const Matrix& L_star, double edge_eps = kDefaultEdgeEps);

/// (Tr(L_star) / Tr(L_hat)) L_hat. Throws std::invalid_argument if
/// Tr(L_hat) <= 0.
Matrix trace_normalize(const Matrix& L_hat, const Matrix& L_star);

/// {0} followed by 0.75^r s_max sqrt(ln(n) / k) for r = 1..14, where s_max is
/// the largest off-diagonal |S_ij|.
std::vector<double> alpha_grid(const Matrix& S, int n, int k);

enum class Method { gsi, cgl_noprefilter, ipf };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

struct MethodEstimate {
  Matrix laplacian;  // IPF output is not necessarily a CGL
  double beta_hat = 0.0;
  bool converged = true;
};

/// Runs one estimator on a covariance.
///  gsi:             identify() with base.filter_kind = filter.kind and alpha
///  cgl_noprefilter: estimate_cgl on S directly
///  ipf:             baseline_ipf with the given filter (alpha unused)
/// `warm_start` seeds the Laplacian solver when present.
MethodEstimate run_method(Method method, const Matrix& S, const FilterSpec& filter, double alpha,
                          const GsiOptions& base, const std::optional<CglMatrix>& warm_start = {});

struct TrialInput {
  Matrix S;
  int k = 0;
  CglMatrix L_star;
  Method method = Method::gsi;
  FilterSpec filter;
  GsiOptions options;
  double edge_eps = kDefaultEdgeEps;
};

struct SweepOutcome {
  MetricReport metrics;
  double beta_hat = 0.0;
  bool converged = true;
};

/// Scores `input.method` at every alpha, trace-normalizes each estimate, and
/// keeps the alpha with the smallest RE (first one on ties). FS is reported
/// for that same estimate. IPF has no regularization and is scored once with
/// alpha = 0. Solves are warm-started along the list.
SweepOutcome best_alpha_sweep(const TrialInput& input, const std::vector<double>& alphas);

/// Trace-normalized RE and FS of one estimate.
MetricReport score_estimate(const Matrix& L_hat, const CglMatrix& L_star, double alpha,
                            double edge_eps = kDefaultEdgeEps);

}  // namespace graphsys
