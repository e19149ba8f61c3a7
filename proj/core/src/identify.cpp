#include "graphsys/identify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace graphsys {

namespace {

SpectralDecomposition checked_covariance_spectrum(const Matrix& S) {
  if (S.rows() != S.cols() || S.rows() < 2) {
    throw std::invalid_argument("covariance must be square with n >= 2");
  }
  SpectralDecomposition d = eig_sym(S);
  const double radius = d.lambdas.cwiseAbs().maxCoeff();
  if (d.lambdas.minCoeff() < -1e-8 * radius) {
    throw std::invalid_argument("covariance is not positive semidefinite");
  }
  return d;
}

}  // namespace

void GsiOptions::validate() const {
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  if (hop_min < 1 || hop_max < hop_min) {
    throw std::invalid_argument("hop search range must satisfy 1 <= hop_min <= hop_max");
  }
  if (max_outer_iters < 1) throw std::invalid_argument("max_outer_iters must be >= 1");
  if (!(tol_rel_change > 0.0)) throw std::invalid_argument("tol_rel_change must be positive");
  if (!(eps_zero > 0.0)) throw std::invalid_argument("eps_zero must be positive");
  if (beta_init) FilterSpec{filter_kind, *beta_init}.validate();
}

double init_beta(const Matrix& S, const GsiOptions& opts) {
  if (opts.beta_init) return *opts.beta_init;
  const double n = static_cast<double>(S.rows());
  const double total = S.sum();  // 1^T S 1
  switch (opts.filter_kind) {
    case FilterKind::variance_shifting:
      return std::max(total / n, 0.0);
    case FilterKind::frequency_shifting:
      // h(0) = 0 only for beta = 0, where Sigma = L^+ has 1^T Sigma 1 = 0.
      if (std::abs(total) <= 1e-12 * S.cwiseAbs().sum()) return 0.0;
      if (!(total > 0.0)) {
        throw std::invalid_argument("frequency_shifting initialization needs 1^T S 1 >= 0");
      }
      return n / total;
    case FilterKind::frequency_scaling:
    case FilterKind::exponential_decay:
      return 1.0;
    case FilterKind::hop_localized:
      return static_cast<double>(opts.hop_min);
  }
  return 1.0;
}

Matrix prefilter(const SpectralDecomposition& s_decomp, const FilterSpec& spec, double eps_zero) {
  Vector frequencies = inverse_spectrum(spec, s_decomp.lambdas, eps_zero);
  const bool peaks_at_zero = spec.kind == FilterKind::exponential_decay ||
                             (spec.kind == FilterKind::frequency_shifting && spec.beta > 0.0);
  if (peaks_at_zero && frequencies.size() > 1) {
    // s_i >= h(0) puts lambda_i at or below zero. Only the direction closest
    // to the constant vector is the null space; the other such modes get the
    // smallest resolved frequency.
    const std::vector<bool> unresolved = zero_mask(frequencies, eps_zero);
    const Vector alignment = (s_decomp.U.transpose() * Vector::Ones(frequencies.size())).cwiseAbs();
    Eigen::Index null_dir = 0;
    alignment.maxCoeff(&null_dir);
    double smallest = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < frequencies.size(); ++i) {
      if (i != null_dir && !unresolved[i]) smallest = std::min(smallest, frequencies(i));
    }
    if (std::isfinite(smallest)) {
      for (Eigen::Index i = 0; i < frequencies.size(); ++i) {
        if (i != null_dir && unresolved[i]) frequencies(i) = smallest;
      }
    }
    frequencies(null_dir) = 0.0;
  }
  if (spec.kind == FilterKind::frequency_shifting || spec.kind == FilterKind::exponential_decay) {
    // Modes with s_i zero up to rounding are rougher than the data resolve:
    // they get zero variance and do not set the pseudoinverse threshold.
    const double s_max = s_decomp.lambdas.size() ? std::max(s_decomp.lambdas.maxCoeff(), 0.0) : 0.0;
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(frequencies.size()) *
                         (s_max > 0.0 ? s_max : 1.0);
    for (Eigen::Index i = 0; i < frequencies.size(); ++i) {
      if (s_decomp.lambdas(i) <= floor) frequencies(i) = 0.0;
    }
  }
  return spectral_map(s_decomp, pseudoinverse_spectrum(frequencies, eps_zero));
}

double hop_residual(const CglMatrix& L_hat, const Matrix& S, int hops) {
  const SpectralDecomposition d = eig_sym(L_hat.matrix());
  const FilterSpec spec{FilterKind::hop_localized, static_cast<double>(hops)};
  return (spectral_map(d, filter_spectrum(spec, d.lambdas)) - S).norm();
}

int update_beta_hop(const CglMatrix& L_hat, const Matrix& S, int lo, int hi) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("update_beta_hop: empty search range");
  const SpectralDecomposition d = eig_sym(L_hat.matrix());
  // Residuals within rounding of the best count as ties.
  const double tie = 1e-12 * std::max(S.norm(), 1.0);
  int best = lo;
  double best_residual = std::numeric_limits<double>::infinity();
  for (int b = lo; b <= hi; ++b) {
    const FilterSpec spec{FilterKind::hop_localized, static_cast<double>(b)};
    const double residual = (spectral_map(d, filter_spectrum(spec, d.lambdas)) - S).norm();
    if (residual < best_residual - tie) {
      best_residual = residual;
      best = b;
    }
  }
  return best;
}

GsiResult identify(const Matrix& S, const GsiOptions& opts) {
  opts.validate();
  const SpectralDecomposition s_decomp = checked_covariance_spectrum(S);
  double beta = init_beta(S, opts);
  FilterSpec{opts.filter_kind, beta}.validate();

  CglSolverOptions solver = opts.solver;
  std::optional<CglEstimate> current;
  GsiResult result{CglMatrix::from_edges(static_cast<int>(S.rows()), {}), beta, {}, false,
                   FilterSpec{opts.filter_kind, beta}.scale_ambiguous(), {}};

  for (int it = 0; it < opts.max_outer_iters; ++it) {
    const FilterSpec spec{opts.filter_kind, beta};
    const Matrix s_pf = prefilter(s_decomp, spec, opts.eps_zero);
    if (current) solver.warm_start = current->laplacian;
    CglEstimate next = estimate_cgl(CglProblem{s_pf, opts.alpha, std::nullopt}, solver);

    double rel_change = std::numeric_limits<double>::infinity();
    if (current) {
      const double base = current->laplacian.matrix().norm();
      rel_change = (next.laplacian.matrix() - current->laplacian.matrix()).norm() /
                   (base > 0.0 ? base : 1.0);
    }
    result.outer_trace.push_back({beta, next.report.objective_trace.back(), rel_change});

    double next_beta = beta;
    if (opts.filter_kind == FilterKind::hop_localized) {
      next_beta = update_beta_hop(next.laplacian, S, opts.hop_min, opts.hop_max);
    }
    current = std::move(next);
    result.beta_hat = beta;
    if (rel_change < opts.tol_rel_change && next_beta == beta) {
      result.converged = true;
      break;
    }
    beta = next_beta;
  }

  result.L_hat = current->laplacian;
  result.last_solver_report = current->report;
  return result;
}

Matrix baseline_ipf(const Matrix& S, const FilterSpec& spec, double eps_zero) {
  const SpectralDecomposition d = checked_covariance_spectrum(S);
  return spectral_map(d, inverse_spectrum(spec, d.lambdas, eps_zero));
}

}  // namespace graphsys
