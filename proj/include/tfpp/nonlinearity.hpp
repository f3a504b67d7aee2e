#pragma once

// Source terms H(u) for the pseudo-parabolic model: directional transport,
// BBM-Burgers quadratic flux, odd power laws, and the planar exponential
// source. Images are evaluated pointwise on the quadrature grid and
// projected back, so H(0) = 0 holds exactly in coefficients.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfpp/errors.hpp"
#include "tfpp/spectral.hpp"

namespace tfpp {

enum class SourceKind { advection, bbm_burgers, polynomial, exponential };

// Pointwise amplitude cap for the exponential source. exp(u^2) overflows the
// double range long before |u| = 27; crossing the cap is reported as an
// OverflowSignal and read upstream as finite-time blow-up.
inline constexpr double kExponentialAmplitudeCap = 25.0;

struct NonlinearitySpec {
  SourceKind kind = SourceKind::advection;
  std::array<double, 2> eta{0.0, 0.0};  // transport direction (advection, bbm_burgers)
  double p = 3.0;                       // power-law exponent
  double nu = 0.5;                      // working regularity of the power-law estimate

  // Regularity consumed by the contraction estimate.
  double input_nu() const {
    return kind == SourceKind::polynomial ? nu : 1.0;
  }
  // Regularity of the image space the estimate lands in.
  double output_nu() const {
    switch (kind) {
      case SourceKind::advection: return 0.0;
      case SourceKind::bbm_burgers: return -1.0;
      case SourceKind::polynomial: return nu - 1.0;
      case SourceKind::exponential: return 0.0;
    }
    return 0.0;
  }
};

inline double eta_magnitude(const NonlinearitySpec& spec) {
  return std::hypot(spec.eta[0], spec.eta[1]);
}

// Upper end of the admissible regularity window for the power-law source.
// May come out nonpositive, in which case the window is empty and the
// configuration is rejected.
inline double polynomial_nu_ceiling(double p, int dim) {
  const double d = double(dim);
  const double ratio = (d + 2.0 - 2.0 * (p - 1.0) * d) / (2.0 - 4.0 * (p - 1.0));
  return std::min(1.0, ratio);
}

// Structural checks that do not involve the time-fractional order.
inline void validate_source(const NonlinearitySpec& spec, int dim) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("source validation: dim must be 1 or 2");
  switch (spec.kind) {
    case SourceKind::advection:
      if (dim == 1 && spec.eta[1] != 0.0)
        throw std::invalid_argument(
            "transport direction has a component outside the domain dimension");
      break;
    case SourceKind::bbm_burgers:
      if (dim != 2)
        throw std::invalid_argument(
            "quadratic transport source is implemented for two-dimensional domains only");
      break;
    case SourceKind::polynomial: {
      if (!(spec.p > 2.0)) throw std::invalid_argument("power-law source requires exponent p > 2");
      const double ceiling = polynomial_nu_ceiling(spec.p, dim);
      if (!(ceiling > 0.0))
        throw std::invalid_argument(
            "power-law regularity window is empty for this dimension and exponent");
      if (!(spec.nu > 0.0 && spec.nu < ceiling))
        throw std::invalid_argument("power-law regularity nu must lie in (0, " +
                                    std::to_string(ceiling) + ")");
      break;
    }
    case SourceKind::exponential:
      if (dim != 2)
        throw std::invalid_argument("exponential source requires a two-dimensional domain");
      break;
  }
}

// Structural checks plus the hypotheses of the global small-data theorems.
inline void validate_source(const NonlinearitySpec& spec, int dim, double alpha) {
  validate_source(spec, dim);
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("source validation: alpha must lie in (0, 1)");
  if (spec.kind == SourceKind::polynomial) {
    // p/(p-1) < 1/alpha keeps the Beta-function exponent 1 - p*alpha/(p-1) positive.
    if (!(spec.p / (spec.p - 1.0) < 1.0 / alpha))
      throw std::invalid_argument("global power-law theorem requires p/(p-1) < 1/alpha");
  }
  if (spec.kind == SourceKind::exponential) {
    if (!(alpha < 2.0 / 3.0))
      throw std::invalid_argument("exponential theorem requires alpha in (0, 2/3)");
  }
}

// Image of H(u) sampled on the quadrature grid, before projection. Exposed
// separately because pointwise identities (analytic derivatives, amplitude
// caps) are sharper on the raw samples than on the truncated projection.
inline std::vector<double> eval_H_physical(const NonlinearitySpec& spec, const SpectralField& f) {
  detail::require_attached(f);
  const SpectralBasis& basis = *f.basis;
  const int dim = basis.domain.dim;
  validate_source(spec, dim);

  std::vector<double> out(basis.sample_count(), 0.0);
  switch (spec.kind) {
    case SourceKind::advection: {
      for (int axis = 0; axis < dim; ++axis) {
        if (spec.eta[axis] == 0.0) continue;
        const std::vector<double> g = detail::synthesize(f, axis);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += spec.eta[axis] * g[i];
      }
      break;
    }
    case SourceKind::bbm_burgers: {
      for (int axis = 0; axis < dim; ++axis) {
        if (spec.eta[axis] == 0.0) continue;
        const std::vector<double> g = detail::synthesize(f, axis);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += spec.eta[axis] * g[i];
      }
      std::vector<double> sq = detail::synthesize(f, -1);
      for (double& v : sq) v *= v;
      const SpectralField sq_hat = to_spectral(sq, basis);
      for (int axis = 0; axis < dim; ++axis) {
        const std::vector<double> g = detail::synthesize(sq_hat, axis);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += g[i];
      }
      break;
    }
    case SourceKind::polynomial: {
      out = detail::synthesize(f, -1);
      for (double& v : out) v = std::pow(std::fabs(v), spec.p - 1.0) * v;
      break;
    }
    case SourceKind::exponential: {
      out = detail::synthesize(f, -1);
      for (double& v : out) {
        if (!(std::fabs(v) <= kExponentialAmplitudeCap))
          throw OverflowSignal("pointwise amplitude exceeds the exponential source cap");
        v = v * v * v * std::exp(v * v);
      }
      break;
    }
  }
  return out;
}

inline SpectralField eval_H(const NonlinearitySpec& spec, const SpectralField& f) {
  SpectralField out = to_spectral(eval_H_physical(spec, f), *f.basis);
  out.nu = spec.output_nu();
  return out;
}

// Growth factor of the exponential estimate: A(w) depends on w only through
// its Orlicz norm.
inline double exponential_growth_factor(double orlicz) {
  return std::sqrt(2.0) + std::sqrt(6.0) * std::pow(6.0 * orlicz * orlicz, 1.0 / 6.0);
}

// Ratio ||H(u) - H(v)|| over the kind-specific denominator. The measured
// supremum over sampled pairs plays the role of the contraction constant;
// nothing is hard-coded.
inline double lipschitz_ratio(const NonlinearitySpec& spec, const SpectralField& u,
                              const SpectralField& v) {
  detail::require_same_basis(u, v);
  const double numer = hilbert_norm(eval_H(spec, u) - eval_H(spec, v), spec.output_nu());

  double denom = 0.0;
  switch (spec.kind) {
    case SourceKind::advection:
      denom = hilbert_norm(u - v, 1.0);
      break;
    case SourceKind::bbm_burgers:
      denom = (hilbert_norm(u, 1.0) + hilbert_norm(v, 1.0) + 1.0) * hilbert_norm(u - v, 1.0);
      break;
    case SourceKind::polynomial: {
      const double nu = spec.nu;
      denom = (std::pow(hilbert_norm(u, nu), spec.p - 1.0) +
               std::pow(hilbert_norm(v, nu), spec.p - 1.0)) *
              hilbert_norm(u - v, nu);
      break;
    }
    case SourceKind::exponential: {
      const double nu_u = orlicz_norm(u).value;
      const double nu_v = orlicz_norm(v).value;
      const double gap = orlicz_norm(u - v).value;
      denom = (nu_u * nu_u * exponential_growth_factor(nu_u) +
               nu_v * nu_v * exponential_growth_factor(nu_v)) *
              gap;
      break;
    }
  }
  if (denom == 0.0)
    throw std::invalid_argument("lipschitz ratio is undefined for identical fields");
  return numer / denom;
}

}  // namespace tfpp
