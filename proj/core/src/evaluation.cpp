#include "graphsys/evaluation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace graphsys {

double relative_error(const Matrix& L_hat, const Matrix& L_star) {
  if (L_hat.rows() != L_star.rows() || L_hat.cols() != L_star.cols()) {
    throw std::invalid_argument("relative_error: dimension mismatch");
  }
  const double denom = L_star.norm();
  if (denom == 0.0) throw std::invalid_argument("relative_error: reference matrix is zero");
  return (L_hat - L_star).norm() / denom;
}

EdgeScore f_score(const Matrix& L_hat, const Matrix& L_star, double edge_eps) {
  if (L_hat.rows() != L_star.rows() || L_hat.cols() != L_star.cols()) {
    throw std::invalid_argument("f_score: dimension mismatch");
  }
  if (!(edge_eps > 0.0)) throw std::invalid_argument("f_score: edge_eps must be positive");
  EdgeScore s;
  for (Eigen::Index i = 0; i < L_star.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < L_star.cols(); ++j) {
      const bool found = -L_hat(i, j) > edge_eps;
      const bool truth = -L_star(i, j) > edge_eps;
      if (found && truth) ++s.tp;
      if (found && !truth) ++s.fp;
      if (!found && truth) ++s.fn;
    }
  }
  const int denom = 2 * s.tp + s.fn + s.fp;
  s.fs = denom == 0 ? 1.0 : 2.0 * s.tp / denom;
  return s;
}

Matrix trace_normalize(const Matrix& L_hat, const Matrix& L_star) {
  const double t = L_hat.trace();
  if (!(t > 0.0)) throw std::invalid_argument("trace_normalize: estimate has non-positive trace");
  return (L_star.trace() / t) * L_hat;
}

std::vector<double> alpha_grid(const Matrix& S, int n, int k) {
  if (k < 1) throw std::invalid_argument("alpha_grid requires k >= 1");
  if (n < 2) throw std::invalid_argument("alpha_grid requires n >= 2");
  double s_max = 0.0;
  for (Eigen::Index i = 0; i < S.rows(); ++i) {
    for (Eigen::Index j = 0; j < S.cols(); ++j) {
      if (i != j) s_max = std::max(s_max, std::abs(S(i, j)));
    }
  }
  const double base = s_max * std::sqrt(std::log(static_cast<double>(n)) / k);
  std::vector<double> grid{0.0};
  double factor = 1.0;
  for (int r = 1; r <= 14; ++r) {
    factor *= 0.75;
    grid.push_back(factor * base);
  }
  return grid;
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::gsi: return "gsi";
    case Method::cgl_noprefilter: return "cgl_noprefilter";
    case Method::ipf: return "ipf";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "gsi") return Method::gsi;
  if (name == "cgl_noprefilter") return Method::cgl_noprefilter;
  if (name == "ipf") return Method::ipf;
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected gsi, cgl_noprefilter or ipf)");
}

MethodEstimate run_method(Method method, const Matrix& S, const FilterSpec& filter, double alpha,
                          const GsiOptions& base, const std::optional<CglMatrix>& warm_start) {
  switch (method) {
    case Method::gsi: {
      GsiOptions opts = base;
      opts.filter_kind = filter.kind;
      opts.alpha = alpha;
      opts.solver.warm_start = warm_start;
      GsiResult r = identify(S, opts);
      return {r.L_hat.matrix(), r.beta_hat, r.converged};
    }
    case Method::cgl_noprefilter: {
      CglSolverOptions solver = base.solver;
      solver.warm_start = warm_start;
      CglEstimate e = estimate_cgl(CglProblem{S, alpha, std::nullopt}, solver);
      return {e.laplacian.matrix(), 0.0, e.report.converged};
    }
    case Method::ipf:
      return {baseline_ipf(S, filter, base.eps_zero), filter.beta, true};
  }
  throw std::logic_error("run_method: unknown method");
}

MetricReport score_estimate(const Matrix& L_hat, const CglMatrix& L_star, double alpha,
                            double edge_eps) {
  const Matrix normalized = trace_normalize(L_hat, L_star.matrix());
  const EdgeScore fs = f_score(normalized, L_star.matrix(), edge_eps);
  return MetricReport{relative_error(normalized, L_star.matrix()), fs.fs, fs.tp, fs.fp, fs.fn, alpha};
}

SweepOutcome best_alpha_sweep(const TrialInput& input, const std::vector<double>& alphas) {
  if (input.method == Method::ipf || alphas.empty()) {
    const double alpha = alphas.empty() ? 0.0 : alphas.front();
    const MethodEstimate e =
        run_method(input.method, input.S, input.filter, alpha, input.options);
    return {score_estimate(e.laplacian, input.L_star, input.method == Method::ipf ? 0.0 : alpha,
                           input.edge_eps),
            e.beta_hat, e.converged};
  }
  SweepOutcome best;
  best.metrics.re = std::numeric_limits<double>::infinity();
  std::optional<CglMatrix> warm;
  for (double alpha : alphas) {
    const MethodEstimate e =
        run_method(input.method, input.S, input.filter, alpha, input.options, warm);
    warm = CglMatrix::from_matrix(e.laplacian);
    const MetricReport m = score_estimate(e.laplacian, input.L_star, alpha, input.edge_eps);
    if (m.re < best.metrics.re) best = {m, e.beta_hat, e.converged};
  }
  return best;
}

}  // namespace graphsys
