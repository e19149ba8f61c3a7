#pragma once

#include <functional>
#include <vector>

#include "graphsys/types.hpp"

namespace graphsys {

/// Relative threshold below which an eigenvalue counts as zero (relative to
/// the largest magnitude in the same spectrum).
inline constexpr double kZeroEps = 1e-10;

/// M = U diag(lambdas) U^T with orthonormal U and ascending lambdas.
struct SpectralDecomposition {
  Matrix U;
  Vector lambdas;

  int n() const { return static_cast<int>(lambdas.size()); }
  Matrix reconstruct() const;
};

/// Cyclic Jacobi eigensolver. The input is symmetrized as (M + M^T)/2 and
/// rotated until the off-diagonal Frobenius norm drops below 1e-12 ||M||_F.
/// Each eigenvector is signed so that its first largest-magnitude component
/// is positive. Throws std::invalid_argument on non-finite or non-square
/// input.
SpectralDecomposition eig_sym(const Matrix& m);

/// U diag(f(lambda_i)) U^T. Throws std::domain_error if f returns a
/// non-finite value.
Matrix matrix_function(const SpectralDecomposition& d, const std::function<double(double)>& f);

/// Applies a whole-spectrum map (used when the map needs the spectral radius).
Matrix spectral_map(const SpectralDecomposition& d, const Vector& mapped_lambdas);

/// lambda -> 1/lambda, except |lambda| <= eps_zero * max|lambda| maps to 0.
Vector pseudoinverse_spectrum(const Vector& lambdas, double eps_zero = kZeroEps);

/// Boolean mask of the entries treated as zero by pseudoinverse_spectrum.
std::vector<bool> zero_mask(const Vector& lambdas, double eps_zero = kZeroEps);

/// Graph Fourier transform U^T x.
Vector gft(const SpectralDecomposition& d, const Vector& x);

/// Moore-Penrose pseudoinverse of a symmetric matrix.
Matrix pseudoinverse(const Matrix& m, double eps_zero = kZeroEps);

/// Product of the eigenvalues above the zero threshold.
double pseudo_determinant(const Matrix& m, double eps_zero = kZeroEps);

}  // namespace graphsys
