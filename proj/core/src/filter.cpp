#include "graphsys/filter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graphsys {

namespace {

double scalar_pinv(double x) { return x == 0.0 ? 0.0 : 1.0 / x; }

}  // namespace

std::string_view to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::frequency_scaling: return "frequency_scaling";
    case FilterKind::frequency_shifting: return "frequency_shifting";
    case FilterKind::variance_shifting: return "variance_shifting";
    case FilterKind::exponential_decay: return "exponential_decay";
    case FilterKind::hop_localized: return "hop_localized";
  }
  return "unknown";
}

FilterKind parse_filter_kind(std::string_view name) {
  for (FilterKind k : {FilterKind::frequency_scaling, FilterKind::frequency_shifting,
                       FilterKind::variance_shifting, FilterKind::exponential_decay,
                       FilterKind::hop_localized}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown filter kind '" + std::string(name) + "'");
}

void FilterSpec::validate() const {
  if (!std::isfinite(beta)) throw std::invalid_argument("filter beta must be finite");
  switch (kind) {
    case FilterKind::frequency_scaling:
    case FilterKind::exponential_decay:
      if (!(beta > 0.0)) {
        throw std::invalid_argument(std::string(to_string(kind)) + " requires beta > 0");
      }
      break;
    case FilterKind::frequency_shifting:
    case FilterKind::variance_shifting:
      if (!(beta >= 0.0)) {
        throw std::invalid_argument(std::string(to_string(kind)) + " requires beta >= 0");
      }
      break;
    case FilterKind::hop_localized:
      if (!(beta >= 1.0) || beta != std::floor(beta) || beta > 1e6) {
        throw std::invalid_argument("hop_localized requires an integer beta >= 1");
      }
      break;
  }
}

int FilterSpec::hops() const {
  if (kind != FilterKind::hop_localized) throw std::logic_error("hops() on a non-hop filter");
  validate();
  return static_cast<int>(beta);
}

double filter_response(const FilterSpec& spec, double lambda) {
  if (!(lambda >= 0.0)) throw std::domain_error("filter_response: lambda must be >= 0");
  switch (spec.kind) {
    case FilterKind::frequency_scaling:
      return lambda == 0.0 ? 0.0 : 1.0 / (spec.beta * lambda);
    case FilterKind::frequency_shifting:
      return scalar_pinv(lambda + spec.beta);
    case FilterKind::variance_shifting:
      return scalar_pinv(lambda) + spec.beta;
    case FilterKind::exponential_decay:
      return std::exp(-spec.beta * lambda);
    case FilterKind::hop_localized:
      return lambda == 0.0 ? 0.0 : std::pow(lambda, -spec.beta);
  }
  return 0.0;
}

double inverse_response(const FilterSpec& spec, double s) {
  if (!(s >= 0.0)) throw std::domain_error("inverse_response: s must be >= 0");
  switch (spec.kind) {
    case FilterKind::frequency_scaling:
      return s == 0.0 ? 0.0 : 1.0 / (spec.beta * s);
    case FilterKind::frequency_shifting:
      if (s == 0.0) throw std::domain_error("frequency_shifting inverse undefined at s = 0");
      return 1.0 / s - spec.beta;
    case FilterKind::variance_shifting:
      return scalar_pinv(s - spec.beta);
    case FilterKind::exponential_decay:
      if (s == 0.0) throw std::domain_error("exponential_decay inverse undefined at s = 0");
      return -std::log(s) / spec.beta;
    case FilterKind::hop_localized:
      return s == 0.0 ? 0.0 : std::pow(1.0 / s, 1.0 / spec.beta);
  }
  return 0.0;
}

Vector filter_spectrum(const FilterSpec& spec, const Vector& lambdas, double eps_zero) {
  spec.validate();
  const std::vector<bool> zero = zero_mask(lambdas, eps_zero);
  Vector out(lambdas.size());
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    const double lambda = zero[static_cast<std::size_t>(i)] ? 0.0 : std::max(lambdas(i), 0.0);
    out(i) = filter_response(spec, lambda);
  }
  return out;
}

Vector inverse_spectrum(const FilterSpec& spec, const Vector& s, double eps_zero) {
  spec.validate();
  const double s_max = s.size() ? std::max(s.maxCoeff(), 0.0) : 0.0;
  const double floor = eps_zero * (s_max > 0.0 ? s_max : 1.0);
  Vector out(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double si = std::max(s(i), 0.0);
    double value = 0.0;
    switch (spec.kind) {
      case FilterKind::frequency_scaling:
      case FilterKind::hop_localized:
        value = si <= floor ? 0.0 : inverse_response(spec, si);
        break;
      case FilterKind::variance_shifting: {
        const double shifted = si - spec.beta;
        value = std::abs(shifted) <= floor ? 0.0 : 1.0 / shifted;
        break;
      }
      case FilterKind::frequency_shifting:
        // beta = 0 is the pseudoinverse filter, which maps 0 back to 0.
        value = spec.beta == 0.0 && si <= floor ? 0.0 : inverse_response(spec, std::max(si, floor));
        break;
      case FilterKind::exponential_decay:
        value = inverse_response(spec, std::max(si, floor));
        break;
    }
    out(i) = std::max(value, 0.0);
  }
  return out;
}

Matrix apply_filter(const FilterSpec& spec, const CglMatrix& L, double eps_zero) {
  const SpectralDecomposition d = eig_sym(L.matrix());
  return spectral_map(d, filter_spectrum(spec, d.lambdas, eps_zero));
}

Matrix diffusion_kernel_limit(const CglMatrix& L, double beta, int t) {
  if (t < 1) throw std::invalid_argument("diffusion_kernel_limit requires t >= 1");
  const int n = L.n();
  const Matrix step = Matrix::Identity(n, n) - (beta / t) * L.matrix();
  Matrix out = step;
  for (int k = 1; k < t; ++k) out = out * step;
  return out;
}

}  // namespace graphsys
