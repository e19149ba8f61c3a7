#pragma once

#include <optional>
#include <vector>

#include "graphsys/cgl.hpp"
#include "graphsys/filter.hpp"
#include "graphsys/spectral.hpp"

namespace graphsys {

struct GsiOptions {
  FilterKind filter_kind = FilterKind::exponential_decay;
  double alpha = 0.0;
  /// Overrides the default starting beta (closed form for the shifting kinds,
  /// 1.0 for the scale-ambiguous kinds, hop_min for hop_localized).
  std::optional<double> beta_init;
  int hop_min = 1;
  int hop_max = 10;
  int max_outer_iters = 50;
  double tol_rel_change = 1e-6;
  double eps_zero = kZeroEps;
  /// Inner solver settings; a warm start seeds the first outer iteration.
  CglSolverOptions solver;

  void validate() const;
};

struct OuterIterate {
  double beta = 0.0;        // beta used for prefiltering in this iteration
  double objective = 0.0;   // CGL objective on the prefiltered covariance
  double rel_change = 0.0;  // ||L_t - L_{t-1}||_F / ||L_{t-1}||_F (inf at t = 1)
};

struct GsiResult {
  CglMatrix L_hat;
  double beta_hat = 0.0;
  std::vector<OuterIterate> outer_trace;
  bool converged = false;
  /// Set for frequency_scaling and exponential_decay: L_hat is only
  /// determined up to the factor beta / beta_hat.
  bool scale_note = false;
  SolverReport last_solver_report;

  int iterations() const { return static_cast<int>(outer_trace.size()); }
};

/// Starting filter parameter. With u1 = 1/sqrt(n) fixed by the Laplacian null
/// space: variance_shifting -> u1^T S u1, frequency_shifting -> 1/(u1^T S u1),
/// scale-ambiguous kinds -> 1.0, hop_localized -> hop_min. opts.beta_init
/// takes precedence. frequency_shifting gives 0 when 1^T S 1 is zero up to
/// rounding and throws std::invalid_argument when it is negative.
double init_beta(const Matrix& S, const GsiOptions& opts);

/// S_pf = U (h^{-1}(Lambda_s))^+ U^T with the guards of inverse_spectrum.
/// For exponential_decay and frequency_shifting (beta > 0), eigenvalues of S
/// at or above h(0) invert to frequencies <= 0. The eigenvector most aligned
/// with the constant vector keeps frequency 0 (response 0 in S_pf); every
/// other such mode is assigned the smallest resolved frequency. For these two
/// kinds, eigenvalues of S below 64 n eps_machine s_max get response 0.
Matrix prefilter(const SpectralDecomposition& s_decomp, const FilterSpec& spec,
                 double eps_zero = kZeroEps);

/// Integer line search for argmin_b ||h_b(L_hat) - S||_F over [lo, hi];
/// ties go to the smaller b.
int update_beta_hop(const CglMatrix& L_hat, const Matrix& S, int lo, int hi);

/// ||h_b(L_hat) - S||_F for a hop_localized filter with b hops.
double hop_residual(const CglMatrix& L_hat, const Matrix& S, int hops);

/// Joint estimation of the Laplacian and the filter parameter from a
/// covariance: prefilter, estimate the CGL, update beta, repeat until the
/// Laplacian changes by less than tol_rel_change and beta is unchanged.
GsiResult identify(const Matrix& S, const GsiOptions& opts);

/// Inverse prefiltering baseline: U h^{-1}(Lambda_s) U^T without projecting
/// onto the Laplacian set. The result is generally not a valid CGL.
Matrix baseline_ipf(const Matrix& S, const FilterSpec& spec, double eps_zero = kZeroEps);

}  // namespace graphsys
