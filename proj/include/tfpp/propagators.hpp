#pragma once

// Diagonal solution operators in the eigenbasis.
//
//   S(t): mode k scaled by E_alpha(-theta_k t^alpha / (1 + theta_k))
//   R(t): mode k scaled by t^{alpha-1} (1 + theta_k)^{-1}
//                          E_{alpha,alpha}(-theta_k t^alpha / (1 + theta_k))
//
// The smooth part of R (everything except the singular t^{alpha-1} factor) is
// well defined at t = 0 and is what the time integration consumes; the full R
// multiplier is only ever materialized at strictly positive times.

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "tfpp/special_functions.hpp"
#include "tfpp/spectral.hpp"

namespace tfpp {

struct PropagatorMultipliers {
  double t = 0.0;
  double alpha = 1.0;
  std::vector<double> s_mult;    // in (0, 1], equal to 1 at t = 0
  std::vector<double> r_smooth;  // nonnegative, (1+theta)^{-1}/Gamma(alpha) at t = 0
};

class MultiplierProvider {
 public:
  virtual ~MultiplierProvider() = default;
  virtual std::shared_ptr<const PropagatorMultipliers> at(double t) const = 0;
  virtual const SpectralBasis& basis() const = 0;
  virtual double order() const = 0;  // alpha; 1 for the classical provider
};

// Production provider. Results are memoized per time value because the Picard
// iteration and its convolution weights revisit identical times many times
// over; inserts are idempotent, so concurrent recomputation is harmless.
class FractionalMultiplierProvider final : public MultiplierProvider {
 public:
  FractionalMultiplierProvider(const SpectralBasis& basis, double alpha, double tol = 1e-12)
      : basis_(&basis), alpha_(alpha), tol_(tol) {
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw std::invalid_argument("multiplier provider: alpha must lie in (0, 1]");
  }

  std::shared_ptr<const PropagatorMultipliers> at(double t) const override {
    if (!(t >= 0.0)) throw std::domain_error("multipliers: t must be nonnegative");
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = memo_.find(t);
      if (it != memo_.end()) return it->second;
    }
    auto fresh = std::make_shared<PropagatorMultipliers>();
    fresh->t = t;
    fresh->alpha = alpha_;
    const int K = basis_->mode_count();
    fresh->s_mult.resize(K);
    fresh->r_smooth.resize(K);
    if (t == 0.0) {
      const double rg = rgamma(alpha_);
      for (int k = 0; k < K; ++k) {
        fresh->s_mult[k] = 1.0;
        fresh->r_smooth[k] = rg / (1.0 + basis_->modes[k].theta);
      }
    } else {
      const double talpha = std::pow(t, alpha_);
      for (int k = 0; k < K; ++k) {
        const double theta = basis_->modes[k].theta;
        const double z = -theta * talpha / (1.0 + theta);
        fresh->s_mult[k] = mittag_leffler({alpha_, 1.0, tol_}, z);
        fresh->r_smooth[k] = mittag_leffler({alpha_, alpha_, tol_}, z) / (1.0 + theta);
      }
    }
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = memo_.emplace(t, std::move(fresh));
    (void)inserted;  // losing the race just means someone else computed it first
    return it->second;
  }

  const SpectralBasis& basis() const override { return *basis_; }
  double order() const override { return alpha_; }

 private:
  const SpectralBasis* basis_;
  double alpha_;
  double tol_;
  mutable std::mutex mu_;
  mutable std::map<double, std::shared_ptr<const PropagatorMultipliers>> memo_;
};

// First-order limit of the same operators: E_1(-x) = e^{-x}, so both kernels
// collapse to exponentials. Used by the comparison solver.
class ClassicalMultiplierProvider final : public MultiplierProvider {
 public:
  explicit ClassicalMultiplierProvider(const SpectralBasis& basis) : basis_(&basis) {}

  std::shared_ptr<const PropagatorMultipliers> at(double t) const override {
    if (!(t >= 0.0)) throw std::domain_error("multipliers: t must be nonnegative");
    auto out = std::make_shared<PropagatorMultipliers>();
    out->t = t;
    out->alpha = 1.0;
    const int K = basis_->mode_count();
    out->s_mult.resize(K);
    out->r_smooth.resize(K);
    for (int k = 0; k < K; ++k) {
      const double theta = basis_->modes[k].theta;
      const double decay = std::exp(-theta * t / (1.0 + theta));
      out->s_mult[k] = decay;
      out->r_smooth[k] = decay / (1.0 + theta);
    }
    return out;
  }

  const SpectralBasis& basis() const override { return *basis_; }
  double order() const override { return 1.0; }

 private:
  const SpectralBasis* basis_;
};

inline SpectralField apply_S(const MultiplierProvider& P, double t, const SpectralField& f) {
  detail::require_attached(f);
  if (f.basis->id != P.basis().id)
    throw std::invalid_argument("apply_S: field does not belong to the provider's basis");
  if (!(t >= 0.0)) throw std::domain_error("apply_S: t must be nonnegative");
  if (t == 0.0) return f;  // S(0) is the identity
  auto m = P.at(t);
  SpectralField out = f;
  for (std::size_t k = 0; k < out.coeffs.size(); ++k) out.coeffs[k] *= m->s_mult[k];
  return out;
}

inline SpectralField apply_R(const MultiplierProvider& P, double t, const SpectralField& f) {
  detail::require_attached(f);
  if (f.basis->id != P.basis().id)
    throw std::invalid_argument("apply_R: field does not belong to the provider's basis");
  if (!(t > 0.0))
    throw std::domain_error("apply_R: t must be positive; the kernel is singular at t = 0");
  auto m = P.at(t);
  const double singular = std::pow(t, P.order() - 1.0);
  SpectralField out = f;
  for (std::size_t k = 0; k < out.coeffs.size(); ++k)
    out.coeffs[k] *= singular * m->r_smooth[k];
  return out;
}

struct ProbeRow {
  double t = 0.0;
  int mode = 0;
  double s_weighted = 0.0;  // |S multiplier| * t^{alpha mu}
  double r_weighted = 0.0;  // theta^{nu*/2} * smooth R multiplier
};

struct LinearBoundEstimate {
  double c1 = 0.0;  // sup_k,t |E_alpha(...)| t^{alpha mu}
  double c2 = 0.0;  // sup_k,t theta^{nu*/2} (1+theta)^{-1} E_{alpha,alpha}(...)
  double mu = 0.0;
  double nu_star = 0.0;
};

// Empirical constants for the smoothing estimates
//   |S(t) w|_{D^nu} <= C1 t^{-alpha mu} |w|_{D^nu}
//   |R(t) w|_{D^nu} <= C2 t^{alpha-1} |w|_{D^{nu - nu*}}
// measured as suprema of the per-mode ratios over the probe grid. The scale
// nu drops out because both operators are diagonal.
inline LinearBoundEstimate linear_bound_probe(const MultiplierProvider& P, double mu,
                                              double nu_star,
                                              const std::vector<double>& t_grid,
                                              std::vector<ProbeRow>* rows = nullptr) {
  if (t_grid.empty()) throw std::invalid_argument("linear_bound_probe: empty time grid");
  const double alpha = P.order();
  const SpectralBasis& basis = P.basis();
  LinearBoundEstimate est;
  est.mu = mu;
  est.nu_star = nu_star;
  for (double t : t_grid) {
    if (!(t > 0.0)) throw std::invalid_argument("linear_bound_probe: grid times must be positive");
    auto m = P.at(t);
    const double tw = std::pow(t, alpha * mu);
    for (int k = 0; k < basis.mode_count(); ++k) {
      const double sw = std::fabs(m->s_mult[k]) * tw;
      const double rw = std::pow(basis.modes[k].theta, 0.5 * nu_star) * m->r_smooth[k];
      est.c1 = std::max(est.c1, sw);
      est.c2 = std::max(est.c2, rw);
      if (rows) rows->push_back(ProbeRow{t, k, sw, rw});
    }
  }
  return est;
}

// | (t+eps-tau)^{alpha-1} E_{alpha,alpha}(-theta (t+eps-tau)^alpha/(1+theta))
//   - (t-tau)^{alpha-1} E_{alpha,alpha}(-theta (t-tau)^alpha/(1+theta)) |.
// Continuity modulus of the R kernel in its singular variable; it vanishes
// with eps, uniformly in theta.
inline double kernel_continuity_modulus(double alpha, double theta, double t, double tau,
                                        double eps) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::domain_error("kernel_continuity_modulus: alpha must lie in (0, 1]");
  if (!(theta > 0.0)) throw std::domain_error("kernel_continuity_modulus: theta must be positive");
  if (!(tau > 0.0 && tau < t))
    throw std::domain_error("kernel_continuity_modulus: requires 0 < tau < t");
  if (!(eps >= 0.0)) throw std::domain_error("kernel_continuity_modulus: eps must be nonnegative");
  if (eps == 0.0) return 0.0;
  auto kernel = [&](double s) {
    const double z = -theta * std::pow(s, alpha) / (1.0 + theta);
    return std::pow(s, alpha - 1.0) * mittag_leffler({alpha, alpha, 1e-12}, z);
  };
  return std::fabs(kernel(t + eps - tau) - kernel(t - tau));
}

inline double kernel_continuity_modulus(const SpectralBasis& basis, int mode, double alpha,
                                        double t, double tau, double eps) {
  if (mode < 0 || mode >= basis.mode_count())
    throw std::invalid_argument("kernel_continuity_modulus: mode out of range");
  return kernel_continuity_modulus(alpha, basis.modes[mode].theta, t, tau, eps);
}

}  // namespace tfpp
