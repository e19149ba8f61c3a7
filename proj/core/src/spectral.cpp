#include "graphsys/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Jacobi>

namespace graphsys {

namespace {

constexpr int kMaxJacobiSweeps = 100;

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

void fix_sign(Eigen::Ref<Vector> v) {
  Eigen::Index pivot = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > best) {
      best = std::abs(v(i));
      pivot = i;
    }
  }
  if (v(pivot) < 0.0) v = -v;
}

}  // namespace

Matrix SpectralDecomposition::reconstruct() const {
  return U * lambdas.asDiagonal() * U.transpose();
}

SpectralDecomposition eig_sym(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eig_sym: matrix is not square");
  if (!m.allFinite()) throw std::invalid_argument("eig_sym: non-finite entries");
  const Eigen::Index n = m.rows();
  Matrix a = 0.5 * (m + m.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double target = 1e-12 * a.norm();

  for (int sweep = 0; sweep < kMaxJacobiSweeps && off_diagonal_norm(a) > target; ++sweep) {
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        Eigen::JacobiRotation<double> rot;
        rot.makeJacobi(a, p, q);
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        v.applyOnTheRight(p, q, rot);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });

  SpectralDecomposition d{Matrix(n, n), Vector(n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    d.lambdas(k) = a(order[k], order[k]);
    d.U.col(k) = v.col(order[k]);
    fix_sign(d.U.col(k));
  }
  return d;
}

Matrix spectral_map(const SpectralDecomposition& d, const Vector& mapped) {
  if (mapped.size() != d.lambdas.size()) throw std::invalid_argument("spectral_map: size mismatch");
  if (!mapped.allFinite()) throw std::domain_error("spectral map produced a non-finite value");
  Matrix out = d.U * mapped.asDiagonal() * d.U.transpose();
  return 0.5 * (out + out.transpose());
}

Matrix matrix_function(const SpectralDecomposition& d, const std::function<double(double)>& f) {
  Vector mapped = d.lambdas.unaryExpr([&](double x) { return f(x); });
  return spectral_map(d, mapped);
}

std::vector<bool> zero_mask(const Vector& lambdas, double eps_zero) {
  const double radius = lambdas.size() ? lambdas.cwiseAbs().maxCoeff() : 0.0;
  std::vector<bool> mask(static_cast<std::size_t>(lambdas.size()));
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    mask[static_cast<std::size_t>(i)] = std::abs(lambdas(i)) <= eps_zero * radius;
  }
  return mask;
}

Vector pseudoinverse_spectrum(const Vector& lambdas, double eps_zero) {
  const std::vector<bool> zero = zero_mask(lambdas, eps_zero);
  Vector out(lambdas.size());
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    out(i) = zero[static_cast<std::size_t>(i)] ? 0.0 : 1.0 / lambdas(i);
  }
  return out;
}

Vector gft(const SpectralDecomposition& d, const Vector& x) {
  if (x.size() != d.U.rows()) throw std::invalid_argument("gft: dimension mismatch");
  return d.U.transpose() * x;
}

Matrix pseudoinverse(const Matrix& m, double eps_zero) {
  const SpectralDecomposition d = eig_sym(m);
  return spectral_map(d, pseudoinverse_spectrum(d.lambdas, eps_zero));
}

double pseudo_determinant(const Matrix& m, double eps_zero) {
  const SpectralDecomposition d = eig_sym(m);
  const std::vector<bool> zero = zero_mask(d.lambdas, eps_zero);
  double det = 1.0;
  for (Eigen::Index i = 0; i < d.lambdas.size(); ++i) {
    if (!zero[static_cast<std::size_t>(i)]) det *= d.lambdas(i);
  }
  return det;
}

}  // namespace graphsys
