#pragma once

// Reference computations for the verification layer: the positive-argument
// one-parameter series, the first-order-in-time solver built from exponential
// multipliers, and the conditional fractional Gronwall checker. This header
// is test/verify surface only; the production solve path never includes it.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tfpp/convolution.hpp"
#include "tfpp/errors.hpp"
#include "tfpp/picard.hpp"
#include "tfpp/propagators.hpp"
#include "tfpp/special_functions.hpp"

namespace tfpp {

// E_alpha(x) for x >= 0 by the plain series. Every term is positive, so
// there is no cancellation and working precision is enough for the moderate
// arguments the Gronwall bounds produce.
inline double ml_positive(double alpha, double x, double tol = 1e-14) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("ml_positive: alpha must lie in (0, 1]");
  if (!(x >= 0.0)) throw std::invalid_argument("ml_positive: x must be >= 0");
  double sum = 0.0;
  double xp = 1.0;  // x^k
  for (int k = 0; k < 600; ++k) {
    const double term = xp * rgamma(alpha * double(k) + 1.0);
    sum += term;
    if (k > 2 && term < tol * sum) return sum;
    xp *= x;
    if (xp > 1e290)
      throw AccuracyError("ml_positive: argument too large for plain accumulation", xp);
  }
  throw NonconvergenceError("ml_positive: series did not settle in 600 terms");
}

// First-order-in-time reference: identical Picard machinery driven by the
// exponential multipliers exp(-theta t/(1+theta)).
inline std::pair<Trajectory, SolveReport> classical_solve(const Problem& prob,
                                                          const TimeGrid& grid,
                                                          const WeightedNormSpec& nspec,
                                                          double tol = 1e-9, int max_iter = 50) {
  if (prob.basis == nullptr) throw std::invalid_argument("classical solve: basis is required");
  detail::require_attached(prob.u0);
  validate_norm_spec(nspec);
  if (prob.source) validate_source(*prob.source, prob.basis->domain.dim);

  ClassicalMultiplierProvider P(*prob.basis);
  Trajectory traj;
  traj.grid = grid;
  traj.u0 = prob.u0;
  traj.states.assign(grid.nodes.size(), prob.u0);
  const double cap = 1e9 * std::max(1.0, hilbert_norm(prob.u0, 1.0));
  detail::IterationOutcome out = detail::iterate_mild_fixed_point(
      P, prob.source, grid, traj.states, prob.u0, nspec, tol, max_iter, cap, 1);

  SolveReport report;
  report.converged = out.converged;
  report.iterations = out.iterations;
  report.contraction_ratios = out.ratios;
  report.final_residual = out.final_diff;
  report.overflow = out.overflow;
  report.nonconvergence = !out.converged && !out.overflow;
  report.sigma = nspec.sigma;
  report.note = out.note;
  for (const SpectralField& s : traj.states) report.norm_history.push_back(hilbert_norm(s, 1.0));
  return {std::move(traj), report};
}

struct GronwallReport {
  bool premise_all = true;          // w <= m + n * (singular convolution of w) at every node
  int first_premise_violation = -1;
  bool conditional_violation = false;  // premise true yet conclusion failed (never expected)
  double min_margin = std::numeric_limits<double>::infinity();
};

// Conditional check of the fractional Gronwall implication
//   w(t) <= m + n int_0^t (t-tau)^{alpha-1} w(tau) dtau for t in a prefix
//   implies w(t) <= m E_alpha(n Gamma(alpha) t^alpha) on that prefix.
// Premise and conclusion are discretizations (product-integration quadrature
// on the samples), so both carry a small slack proportional to the conclusion
// scale: the premise is accepted up to +1e-9*scale and a conclusion failure
// is only reported below -1e-8*scale. The conclusion is asserted on the
// maximal prefix where the premise holds, which is exactly the conditional
// shape of the inequality.
inline GronwallReport gronwall_verify(double m, double n, double alpha,
                                      const std::vector<double>& t_nodes,
                                      const std::vector<double>& w) {
  if (!(m > 0.0 && n > 0.0)) throw std::invalid_argument("gronwall: m, n must be positive");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("gronwall: alpha must lie in (0, 1)");
  if (t_nodes.size() != w.size() || t_nodes.size() < 2)
    throw std::invalid_argument("gronwall: need matching node/value arrays with >= 2 entries");
  if (t_nodes.front() != 0.0) throw std::invalid_argument("gronwall: nodes must start at 0");
  for (double v : w)
    if (!(v >= 0.0)) throw std::invalid_argument("gronwall: w must be nonnegative");

  const double T = t_nodes.back();
  const double scale = m * ml_positive(alpha, n * gamma(alpha) * std::pow(T, alpha));
  const double premise_slack = 1e-9 * scale;
  const double conclusion_slack = 1e-8 * scale;

  GronwallReport report;
  for (std::size_t j = 0; j < t_nodes.size(); ++j) {
    double rhs = m;
    if (j >= 1) {
      const std::vector<double> weights = product_integration_weights(t_nodes, int(j), alpha);
      double acc = 0.0;
      for (std::size_t i = 0; i <= j; ++i) acc += weights[i] * w[i];
      rhs += n * acc;
    }
    if (w[j] > rhs + premise_slack) {
      report.premise_all = false;
      report.first_premise_violation = int(j);
      break;
    }
    const double bound = m * ml_positive(alpha, n * gamma(alpha) * std::pow(t_nodes[j], alpha));
    const double margin = bound - w[j];
    report.min_margin = std::min(report.min_margin, margin);
    if (margin < -conclusion_slack) report.conditional_violation = true;
  }
  return report;
}

}  // namespace tfpp
