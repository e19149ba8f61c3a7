#include "graphsys/cgl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "graphsys/spectral.hpp"

namespace graphsys {

namespace {

Matrix checked_symmetric(const Matrix& k) {
  if (k.rows() != k.cols() || k.rows() < 2) {
    throw std::invalid_argument("CGL problem needs a square input of size >= 2");
  }
  if (!k.allFinite()) throw std::invalid_argument("CGL input has non-finite entries");
  const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  if ((k - k.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw std::invalid_argument("CGL input matrix is not symmetric");
  }
  return 0.5 * (k + k.transpose());
}

// Cost of one unit of weight on pair (i, j): the linear part of the objective
// is sum over pairs of w_ij * cost(i, j).
Matrix pair_costs(const Matrix& k, const Matrix& h) {
  const Eigen::Index n = k.rows();
  Matrix c = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      c(i, j) = k(i, i) + k(j, j) - 2.0 * k(i, j) + std::abs(h(i, i)) + std::abs(h(j, j)) +
                2.0 * std::abs(h(i, j));
      c(j, i) = c(i, j);
    }
  }
  return c;
}

double max_pair_cost(const Matrix& c) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < c.cols(); ++j) m = std::max(m, c(i, j));
  }
  return m;
}

void require_positive_costs(const Matrix& c) {
  const double scale = max_pair_cost(c);
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < c.cols(); ++j) {
      if (!(c(i, j) > 1e-12 * scale) || !(scale > 0.0)) {
        throw std::invalid_argument(
            "degenerate CGL input: pair (" + std::to_string(i) + ", " + std::to_string(j) +
            ") has non-positive cost, so the objective is unbounded below");
      }
    }
  }
}

Matrix laplacian_from_weights(const Matrix& w) {
  Matrix l = -w;
  l.diagonal() = w.rowwise().sum();
  return l;
}

Matrix with_mean_projector(const Matrix& l) {
  const double n = static_cast<double>(l.rows());
  return l.array() + 1.0 / n;
}

// Cholesky of L + J; returns false if it is not positive definite.
bool factor(const Matrix& l, Eigen::LLT<Matrix>& llt) {
  llt.compute(with_mean_projector(l));
  return llt.info() == Eigen::Success;
}

double log_det(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double linear_term(const Matrix& w, const Matrix& c) {
  // w and c are symmetric with zero diagonals.
  return 0.5 * w.cwiseProduct(c).sum();
}

double kkt_from_inverse(const Matrix& w, const Matrix& c, const Matrix& inv) {
  double worst = 0.0;
  const Eigen::Index n = w.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double g = c(i, j) - (inv(i, i) + inv(j, j) - 2.0 * inv(i, j));
      worst = std::max(worst, w(i, j) > 1e-10 ? std::abs(g) : std::max(0.0, -g));
    }
  }
  return worst;
}

Matrix initial_weights(const Matrix& c) {
  const Eigen::Index n = c.rows();
  // Complete graph with the weight minimizing the objective along that ray:
  // f(t) = t * sum(c) - (n - 1) log(n t).
  const double total = linear_term(Matrix::Ones(n, n) - Matrix::Identity(n, n), c);
  Matrix w = Matrix::Constant(n, n, static_cast<double>(n - 1) / total);
  w.diagonal().setZero();
  return w;
}

}  // namespace

Matrix CglProblem::regularization() const {
  const Eigen::Index n = K.rows();
  if (H) {
    if (H->rows() != n || H->cols() != n) throw std::invalid_argument("H has the wrong shape");
    if ((*H - H->transpose()).cwiseAbs().maxCoeff() > 0.0) {
      throw std::invalid_argument("H must be symmetric");
    }
    return *H;
  }
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  return alpha * (2.0 * Matrix::Identity(n, n) - Matrix::Ones(n, n));
}

double objective(const CglMatrix& L, const CglProblem& prob) {
  if (L.n() != prob.K.rows()) throw std::invalid_argument("objective: dimension mismatch");
  Eigen::LLT<Matrix> llt;
  if (!factor(L.matrix(), llt)) {
    throw std::domain_error("objective: Laplacian is disconnected (pseudo-determinant undefined)");
  }
  const Matrix h = prob.regularization();
  return (L.matrix() * prob.K).trace() - log_det(llt) + L.matrix().cwiseProduct(h).cwiseAbs().sum();
}

double kkt_residual(const CglMatrix& L, const CglProblem& prob) {
  const Matrix k = checked_symmetric(prob.K);
  const Matrix c = pair_costs(k, prob.regularization());
  Eigen::LLT<Matrix> llt;
  if (!factor(L.matrix(), llt)) throw std::domain_error("kkt_residual: Laplacian is disconnected");
  const Eigen::Index n = k.rows();
  const Matrix inv = llt.solve(Matrix::Identity(n, n));
  const Matrix w = -L.matrix() + Matrix(L.matrix().diagonal().asDiagonal());
  return kkt_from_inverse(w, c, inv);
}

CglEstimate estimate_cgl(const CglProblem& prob, const CglSolverOptions& opts) {
  const Matrix k = checked_symmetric(prob.K);
  const Matrix c = pair_costs(k, prob.regularization());
  require_positive_costs(c);
  const Eigen::Index n = k.rows();
  const Matrix identity = Matrix::Identity(n, n);
  const double tol = opts.kkt_tol * max_pair_cost(c);

  Matrix w = initial_weights(c);
  Eigen::LLT<Matrix> llt;
  if (opts.warm_start && opts.warm_start->n() == n) {
    Matrix warm = -opts.warm_start->matrix();
    warm.diagonal().setZero();
    if (factor(laplacian_from_weights(warm), llt)) w = warm;
  }
  if (!factor(laplacian_from_weights(w), llt)) {
    throw std::runtime_error("estimate_cgl: initial iterate is singular");
  }
  Matrix inv = llt.solve(identity);

  SolverReport report;
  report.objective_trace.push_back(linear_term(w, c) - log_det(llt));

  // One pass of exact coordinate minimization. Along pair e = (i, j) the
  // objective changes by  delta c_e - log(1 + delta r_e)  with
  // r_e = (e_i - e_j)^T Theta^{-1} (e_i - e_j), minimized at 1/c_e - 1/r_e.
  Vector u(n);
  auto pass = [&](bool active_only) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (active_only && w(i, j) == 0.0) continue;
        const double r = inv(i, i) + inv(j, j) - 2.0 * inv(i, j);
        double delta = 1.0 / c(i, j) - 1.0 / r;
        if (delta <= -w(i, j)) delta = -w(i, j);
        if (delta == 0.0) continue;
        w(i, j) = delta == -w(i, j) ? 0.0 : w(i, j) + delta;
        w(j, i) = w(i, j);
        u = inv.col(i) - inv.col(j);
        inv.noalias() -= (delta / (1.0 + delta * r)) * (u * u.transpose());
      }
    }
  };

  auto refresh = [&]() {
    if (!factor(laplacian_from_weights(w), llt)) {
      throw std::runtime_error("estimate_cgl: iterate lost positive definiteness");
    }
    inv = llt.solve(identity);
    report.objective_trace.push_back(linear_term(w, c) - log_det(llt));
  };

  while (report.iterations < opts.max_sweeps) {
    pass(false);
    ++report.iterations;
    refresh();
    report.kkt_residual = kkt_from_inverse(w, c, inv);
    if (report.kkt_residual <= tol) {
      report.converged = true;
      break;
    }
    for (int p = 0; p < opts.inner_passes && report.iterations < opts.max_sweeps; ++p) {
      pass(true);
      ++report.iterations;
      refresh();
    }
  }
  if (!report.converged) report.kkt_residual = kkt_from_inverse(w, c, inv);

  Matrix l = laplacian_from_weights(w);
  const Vector spectrum = eig_sym(l).lambdas;
  report.connectivity_warning = spectrum.size() > 1 && spectrum(1) < 1e-9 * spectrum.maxCoeff();

  std::vector<Edge> edges;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (w(i, j) > 0.0) edges.push_back({static_cast<int>(i), static_cast<int>(j), w(i, j)});
    }
  }
  return CglEstimate{CglMatrix::from_edges(static_cast<int>(n), edges), std::move(report)};
}

CglMatrix estimate_cgl_reference(const CglProblem& prob) {
  const Matrix k = checked_symmetric(prob.K);
  const Eigen::Index n = k.rows();
  if (n > 12) throw std::invalid_argument("estimate_cgl_reference is limited to n <= 12");
  const Matrix c = pair_costs(k, prob.regularization());
  require_positive_costs(c);
  const Matrix identity = Matrix::Identity(n, n);

  // Pairs flattened into a vector so the update reads as plain vector
  // projected gradient.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  const auto m = static_cast<Eigen::Index>(pairs.size());
  Vector cost(m);
  for (Eigen::Index e = 0; e < m; ++e) cost(e) = c(pairs[e].first, pairs[e].second);

  auto to_laplacian = [&](const Vector& w) {
    Matrix l = Matrix::Zero(n, n);
    for (Eigen::Index e = 0; e < m; ++e) {
      const auto [i, j] = pairs[e];
      l(i, j) -= w(e);
      l(j, i) -= w(e);
      l(i, i) += w(e);
      l(j, j) += w(e);
    }
    return l;
  };
  // Objective and gradient; returns +inf outside the domain.
  auto evaluate = [&](const Vector& w, Vector& grad) {
    Eigen::LLT<Matrix> llt(with_mean_projector(to_laplacian(w)));
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const double ld = log_det(llt);
    if (!std::isfinite(ld)) return std::numeric_limits<double>::infinity();
    const Matrix inv = llt.solve(identity);
    grad.resize(m);
    for (Eigen::Index e = 0; e < m; ++e) {
      const auto [i, j] = pairs[e];
      grad(e) = cost(e) - (inv(i, i) + inv(j, j) - 2.0 * inv(i, j));
    }
    return cost.dot(w) - ld;
  };

  Vector w = Vector::Constant(m, static_cast<double>(n - 1) / cost.sum());
  Vector grad;
  double f = evaluate(w, grad);
  double step = 1.0;
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxIterations = 2'000'000;

  for (int it = 0; it < kMaxIterations; ++it) {
    const Vector projected = w - (w - grad).cwiseMax(0.0);
    if (projected.norm() < 1e-9) break;

    Vector trial;
    Vector trial_grad;
    double trial_f = std::numeric_limits<double>::infinity();
    double t = step;
    for (int halvings = 0; halvings < 200; ++halvings, t *= 0.5) {
      trial = (w - t * grad).cwiseMax(0.0);
      trial_f = evaluate(trial, trial_grad);
      if (trial_f <= f + kArmijo * grad.dot(trial - w)) break;
    }
    if (!std::isfinite(trial_f) || trial_f > f) break;  // no further progress possible

    const Vector s = trial - w;
    const Vector y = trial_grad - grad;
    const double sy = s.dot(y);
    step = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-12, 1e12) : std::min(2.0 * t, 1e12);
    w = trial;
    grad = trial_grad;
    f = trial_f;
  }

  std::vector<Edge> edges;
  for (Eigen::Index e = 0; e < m; ++e) {
    if (w(e) > 0.0) {
      edges.push_back({static_cast<int>(pairs[e].first), static_cast<int>(pairs[e].second), w(e)});
    }
  }
  return CglMatrix::from_edges(static_cast<int>(n), edges);
}

}  // namespace graphsys
