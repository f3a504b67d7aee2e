#pragma once

// Product integration for the weakly singular time kernels. The singular
// weight ((t - tau)^{alpha-1}, and tau^{-h} for the Q functional) is
// integrated in closed form panel by panel against a linear interpolant of
// the smooth factor, so the quadrature never samples the kernel at its
// singularity and is exact for piecewise-linear smooth factors.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tfpp/quadrature.hpp"

namespace tfpp {

// Weights w_0..w_n with  sum_j w_j f(t_j) = int_0^{t_n} f(tau)(t_n-tau)^{alpha-1} dtau
// whenever f is linear on every panel [t_j, t_{j+1}]. Panel moments telescope,
// so the g == 1 and g == tau calibration identities hold to rounding.
inline std::vector<double> product_integration_weights(const std::vector<double>& nodes,
                                                       int n, double alpha) {
  if (n < 1 || n >= static_cast<int>(nodes.size()))
    throw std::invalid_argument("product_integration_weights: target index out of range");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("product_integration_weights: alpha must lie in (0, 1]");
  const double t = nodes[n];
  std::vector<double> w(n + 1, 0.0);
  for (int j = 0; j < n; ++j) {
    const double a = nodes[j];
    const double b = nodes[j + 1];
    const double s1 = t - a;  // s1 > s2 >= 0
    const double s2 = t - b;
    const double p1 = std::pow(s1, alpha);
    const double p2 = std::pow(s2, alpha);
    const double m0 = (p1 - p2) / alpha;
    const double m1 = t * m0 - (p1 * s1 - p2 * s2) / (alpha + 1.0);
    const double dl = b - a;
    w[j] += (b * m0 - m1) / dl;
    w[j + 1] += (m1 - a * m0) / dl;
  }
  return w;
}

// int_0^{t_n} g(tau)(t_n-tau)^{alpha-1} dtau for scalar samples g at the nodes.
inline double singular_integral(const std::vector<double>& nodes, int n, double alpha,
                                const std::vector<double>& g) {
  if (g.size() < static_cast<std::size_t>(n) + 1)
    throw std::invalid_argument("singular_integral: sample count mismatch");
  const std::vector<double> w = product_integration_weights(nodes, n, alpha);
  std::vector<double> terms(n + 1);
  for (int j = 0; j <= n; ++j) terms[j] = w[j] * g[j];
  return pairwise_sum(terms);
}

// Q(t, h, sigma) = t^h int_0^t (t-tau)^{alpha-1} tau^{-h} e^{-sigma(t-tau)} dtau.
//
// The integral is split at t/2. On [0, t/2] the tau^{-h} weight is integrated
// exactly against a linear interpolant of (t-tau)^{alpha-1} e^{-sigma(t-tau)},
// which is smooth there; on [t/2, t] the roles swap. Both halves use meshes
// graded quadratically toward their singular endpoint, giving O(M^-2) error
// with bounded constants for h in [0, 1), alpha in (0, 1].
inline double q_kernel(double t, double h, double sigma, double alpha,
                       int panels_per_half = 256) {
  if (!(t > 0.0)) throw std::domain_error("q_kernel: t must be positive");
  if (h >= 1.0) throw std::domain_error("q_kernel: requires h < 1 (integrable endpoint)");
  if (!(h >= 0.0)) throw std::domain_error("q_kernel: requires h >= 0");
  if (!(sigma >= 0.0)) throw std::domain_error("q_kernel: sigma must be nonnegative");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("q_kernel: alpha must lie in (0, 1]");
  if (panels_per_half < 4) throw std::invalid_argument("q_kernel: too few panels");

  const int M = panels_per_half;
  const double half = 0.5 * t;
  double acc = 0.0;

  {  // tau in [0, t/2]: weight tau^{-h} exact, smooth phi = (t-tau)^{alpha-1} e^{-sigma(t-tau)}
    std::vector<double> tau(M + 1), phi(M + 1);
    for (int i = 0; i <= M; ++i) {
      const double frac = double(i) / M;
      tau[i] = half * frac * frac;
      const double s = t - tau[i];
      phi[i] = std::pow(s, alpha - 1.0) * std::exp(-sigma * s);
    }
    std::vector<double> terms(M);
    for (int i = 0; i < M; ++i) {
      const double a = tau[i];
      const double b = tau[i + 1];
      const double n0 = (std::pow(b, 1.0 - h) - std::pow(a, 1.0 - h)) / (1.0 - h);
      const double n1 = (std::pow(b, 2.0 - h) - std::pow(a, 2.0 - h)) / (2.0 - h);
      const double dl = b - a;
      terms[i] = (phi[i] * (b * n0 - n1) + phi[i + 1] * (n1 - a * n0)) / dl;
    }
    acc += pairwise_sum(terms);
  }

  {  // tau in [t/2, t]: weight (t-tau)^{alpha-1} exact, smooth psi = tau^{-h} e^{-sigma(t-tau)}
    std::vector<double> tau(M + 1), psi(M + 1);
    for (int i = 0; i <= M; ++i) {
      const double frac = 1.0 - double(i) / M;
      tau[i] = t - half * frac * frac;
      psi[i] = std::pow(tau[i], -h) * std::exp(-sigma * (t - tau[i]));
    }
    tau[M] = t;
    std::vector<double> terms(M);
    for (int i = 0; i < M; ++i) {
      const double s1 = t - tau[i];  // s1 > s2 >= 0
      const double s2 = t - tau[i + 1];
      const double p1 = std::pow(s1, alpha);
      const double p2 = std::pow(s2, alpha);
      const double m0 = (p1 - p2) / alpha;
      const double m1 = t * m0 - (p1 * s1 - p2 * s2) / (alpha + 1.0);
      const double dl = tau[i + 1] - tau[i];
      terms[i] = (psi[i] * (tau[i + 1] * m0 - m1) + psi[i + 1] * (m1 - tau[i] * m0)) / dl;
    }
    acc += pairwise_sum(terms);
  }

  return std::pow(t, h) * acc;
}

}  // namespace tfpp
