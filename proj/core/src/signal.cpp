#include "graphsys/signal.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "graphsys/rng.hpp"
#include "graphsys/spectral.hpp"

namespace graphsys {

SignalBatch sample_signals(const Matrix& sigma, int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("sample_signals requires k >= 1");
  const SpectralDecomposition d = eig_sym(sigma);
  const double radius = d.lambdas.size() ? d.lambdas.cwiseAbs().maxCoeff() : 0.0;
  if (d.lambdas.size() && d.lambdas.minCoeff() < -1e-10 * radius) {
    throw std::invalid_argument("sample_signals: covariance is not positive semidefinite");
  }
  const Eigen::Index n = sigma.rows();
  const Matrix factor = d.U * d.lambdas.cwiseMax(0.0).cwiseSqrt().asDiagonal();

  Rng rng(seed);
  Matrix z(n, k);
  for (int s = 0; s < k; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) z(i, s) = rng.normal();
  }
  return SignalBatch{(factor * z).transpose()};
}

Matrix sample_covariance(const SignalBatch& batch) {
  if (batch.k() < 1) throw std::invalid_argument("sample_covariance requires k >= 1");
  Matrix s = batch.data.transpose() * batch.data / static_cast<double>(batch.k());
  return 0.5 * (s + s.transpose());
}

void DiffusionConfig::validate() const {
  if (!(rate > 0.0 && rate < 1.0)) throw std::invalid_argument("diffusion rate must lie in (0, 1)");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("diffusion sigma2 must be positive");
  if (steps < 0) throw std::invalid_argument("diffusion steps must be >= 0");
}

bool diffusion_is_stable(const CglMatrix& L, double rate) {
  const double lambda_max = eig_sym(L.matrix()).lambdas.maxCoeff();
  return rate * lambda_max < 1.0;
}

Vector simulate_diffusion(const CglMatrix& L, const DiffusionConfig& cfg, const Vector& x0) {
  cfg.validate();
  if (x0.size() != L.n()) throw std::invalid_argument("simulate_diffusion: dimension mismatch");
  if (!diffusion_is_stable(L, cfg.rate)) {
    std::cerr << "warning: diffusion rate r >= 1/lambda_max; the iteration may diverge\n";
  }
  Vector x = x0;
  for (int t = 0; t < cfg.steps; ++t) x -= cfg.rate * (L.matrix() * x);
  return x;
}

Matrix diffusion_covariance(const CglMatrix& L, const DiffusionConfig& cfg) {
  cfg.validate();
  const SpectralDecomposition d = eig_sym(L.matrix());
  const std::vector<bool> zero = zero_mask(d.lambdas);
  Vector mapped(d.lambdas.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) {
    const double lambda = zero[static_cast<std::size_t>(i)] ? 0.0 : d.lambdas(i);
    mapped(i) = cfg.sigma2 * std::pow(1.0 - cfg.rate * lambda, 2.0 * cfg.steps);
  }
  return spectral_map(d, mapped);
}

}  // namespace graphsys
