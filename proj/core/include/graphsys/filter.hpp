#pragma once

#include <string>
#include <string_view>

#include "graphsys/graph.hpp"
#include "graphsys/spectral.hpp"
#include "graphsys/types.hpp"

namespace graphsys {

enum class FilterKind {
  frequency_scaling,
  frequency_shifting,
  variance_shifting,
  exponential_decay,
  hop_localized,
};

std::string_view to_string(FilterKind kind);
FilterKind parse_filter_kind(std::string_view name);

/// One-parameter graph-based filter h_beta.
///
///   frequency_scaling   h(l) = 1/(beta l), h(0) = 0            beta > 0
///   frequency_shifting  h(l) = (l + beta)^+                    beta >= 0
///   variance_shifting   h(l) = l^+ + beta                      beta >= 0
///   exponential_decay   h(l) = exp(-beta l)                    beta > 0
///   hop_localized       h(l) = l^-beta, h(0) = 0               beta in {1, 2, ...}
///
/// where x^+ is the scalar pseudoinverse (1/x, or 0 at x = 0).
struct FilterSpec {
  FilterKind kind = FilterKind::exponential_decay;
  double beta = 1.0;

  /// Throws std::invalid_argument if beta is outside the kind's range. The
  /// hop count must be an exact positive integer.
  void validate() const;

  /// Hop count of a hop_localized filter.
  int hops() const;

  /// True for the kinds whose (L, beta) pair is only identifiable up to a
  /// common scale factor.
  bool scale_ambiguous() const {
    return kind == FilterKind::frequency_scaling || kind == FilterKind::exponential_decay;
  }

  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

/// h_beta(lambda) for lambda >= 0. Throws std::domain_error on negative
/// lambda.
double filter_response(const FilterSpec& spec, double lambda);

/// h_beta^{-1}(s) for s >= 0. Throws std::domain_error for s <= 0 with
/// exponential_decay and s == 0 with frequency_shifting.
double inverse_response(const FilterSpec& spec, double s);

/// Filter response over a computed spectrum: eigenvalues within the zero
/// threshold are treated as exactly 0, and small negative round-off is
/// clamped to 0.
Vector filter_spectrum(const FilterSpec& spec, const Vector& lambdas, double eps_zero = kZeroEps);

/// Inverse filter over a covariance spectrum, made total by domain guards:
/// values within eps_zero * s_max of zero take the s = 0 branch, the log of
/// exponential_decay and the reciprocal of frequency_shifting see at least
/// eps_zero * s_max (frequency_shifting with beta = 0 maps those values to 0),
/// and negative results are clamped to 0.
Vector inverse_spectrum(const FilterSpec& spec, const Vector& s, double eps_zero = kZeroEps);

/// h_beta(L) = U h_beta(Lambda) U^T.
Matrix apply_filter(const FilterSpec& spec, const CglMatrix& L, double eps_zero = kZeroEps);

/// (I - (beta/t) L)^t by repeated multiplication.
Matrix diffusion_kernel_limit(const CglMatrix& L, double beta, int t);

}  // namespace graphsys
