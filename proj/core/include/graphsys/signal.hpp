#pragma once

#include <cstdint>

#include "graphsys/graph.hpp"
#include "graphsys/types.hpp"

namespace graphsys {

/// k samples of an n-dimensional signal, one sample per row.
struct SignalBatch {
  Matrix data;

  int n() const { return static_cast<int>(data.cols()); }
  int k() const { return static_cast<int>(data.rows()); }
};

/// k draws from N(0, sigma) as x = U diag(sqrt(max(lambda, 0))) z, so singular
/// covariances are fine. Throws std::invalid_argument if sigma has an
/// eigenvalue below -1e-10 * max|lambda| or k < 1.
SignalBatch sample_signals(const Matrix& sigma, int k, std::uint64_t seed);

/// Second-moment estimate (1/k) sum x x^T (the model is zero mean).
Matrix sample_covariance(const SignalBatch& batch);

struct DiffusionConfig {
  double rate = 0.1;    // r in (0, 1)
  double sigma2 = 1.0;  // initial variance
  int steps = 0;

  void validate() const;
};

/// x(t+1) = (I - rL) x(t), iterated cfg.steps times from x0.
Vector simulate_diffusion(const CglMatrix& L, const DiffusionConfig& cfg, const Vector& x0);

/// sigma^2 (I - rL)^{2 steps}, evaluated through the spectrum of L.
Matrix diffusion_covariance(const CglMatrix& L, const DiffusionConfig& cfg);

/// True when r * lambda_max(L) < 1, i.e. the iteration contracts every
/// non-constant mode.
bool diffusion_is_stable(const CglMatrix& L, double rate);

}  // namespace graphsys
