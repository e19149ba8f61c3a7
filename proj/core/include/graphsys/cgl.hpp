#pragma once

#include <optional>
#include <vector>

#include "graphsys/graph.hpp"
#include "graphsys/types.hpp"

namespace graphsys {

/// minimize  Tr(L K) - log|L| + ||L o H||_1  over combinatorial Laplacians L,
/// where |L| is the pseudo-determinant. H defaults to alpha (2I - 11^T),
/// which turns the penalty into alpha ||L||_1.
struct CglProblem {
  Matrix K;
  double alpha = 0.0;
  std::optional<Matrix> H;

  Matrix regularization() const;
};

struct CglSolverOptions {
  int max_sweeps = 10000;
  /// Stop once the KKT residual is below kkt_tol times the largest pair cost
  /// K_ii + K_jj - 2 K_ij (+ penalty), i.e. relative to the gradient scale.
  double kkt_tol = 1e-9;
  /// Active-set passes between two full sweeps.
  int inner_passes = 8;
  std::optional<CglMatrix> warm_start;
};

struct SolverReport {
  std::vector<double> objective_trace;  // one entry per sweep, plus the start
  int iterations = 0;                   // coordinate sweeps (full or active-set)
  double kkt_residual = 0.0;
  bool converged = false;
  bool connectivity_warning = false;
};

struct CglEstimate {
  CglMatrix laplacian;
  SolverReport report;
};

/// Tr(L K) - log det(L + 11^T/n) + ||L o H||_1. Throws std::domain_error if L
/// is disconnected (more than one zero eigenvalue).
double objective(const CglMatrix& L, const CglProblem& prob);

/// Largest violation of the optimality conditions over vertex pairs, with the
/// gradient taken along the edge direction (e_i - e_j)(e_i - e_j)^T:
/// g_ij = K_reg,ii + K_reg,jj - 2 K_reg,ij - (Theta^{-1})_ii - (Theta^{-1})_jj
/// + 2 (Theta^{-1})_ij with Theta = L + 11^T/n. Active pairs (L_ij < -1e-10)
/// contribute |g_ij|; inactive pairs contribute max(0, -g_ij).
double kkt_residual(const CglMatrix& L, const CglProblem& prob);

/// Coordinate descent over edge weights. Each coordinate step is the exact
/// constrained minimizer along that edge; the inverse of L + 11^T/n is kept
/// current with Sherman-Morrison updates and refreshed after every sweep.
/// The returned L is feasible by construction.
///
/// Throws std::invalid_argument if K is not symmetric or some pair cost is
/// not positive (no finite minimizer, e.g. K = 0 with alpha = 0).
CglEstimate estimate_cgl(const CglProblem& prob, const CglSolverOptions& opts = {});

/// Independent slow solver for cross-checking: projected gradient on the
/// edge weights with Barzilai-Borwein trial steps and Armijo backtracking,
/// run until the projected-gradient norm is below 1e-9. Limited to n <= 12.
CglMatrix estimate_cgl_reference(const CglProblem& prob);

}  // namespace graphsys
