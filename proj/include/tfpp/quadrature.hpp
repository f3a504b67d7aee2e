#pragma once

// Gauss-Legendre rules and the deterministic reduction shared by every
// integration path in the library.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

namespace tfpp {

// Pairwise reduction: error grows O(log n) instead of O(n), and the bracketing
// depends on n alone, so sums are bit-stable across runs and thread counts.
inline double pairwise_sum(const double* data, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 16) {
    double s = data[0];
    for (std::size_t i = 1; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

struct QuadratureRule {
  std::vector<double> nodes;    // strictly ascending, interior to the interval
  std::vector<double> weights;  // positive

  int size() const { return static_cast<int>(nodes.size()); }

  double integrate(const std::vector<double>& samples) const {
    if (samples.size() != nodes.size())
      throw std::invalid_argument("QuadratureRule::integrate: sample count mismatch");
    std::vector<double> terms(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) terms[i] = weights[i] * samples[i];
    return pairwise_sum(terms);
  }
};

namespace detail {

// P_n(x) and P_n'(x) by the three-term recurrence; x strictly inside (-1, 1).
inline std::pair<double, double> legendre_with_derivative(int n, double x) {
  double prev = 1.0;
  double cur = x;
  for (int k = 2; k <= n; ++k) {
    const double next = ((2.0 * k - 1.0) * x * cur - (k - 1.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  const double deriv = n * (prev - x * cur) / (1.0 - x * x);
  return {cur, deriv};
}

}  // namespace detail

// n-point rule on (-1, 1). Newton from the Chebyshev estimate reaches full
// precision in a handful of steps for every n in use here.
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: point count must be positive");
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double value = 0.0;
    double deriv = 1.0;
    for (int step = 0; step < 32; ++step) {
      std::tie(value, deriv) = detail::legendre_with_derivative(n, x);
      const double dx = value / deriv;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    std::tie(value, deriv) = detail::legendre_with_derivative(n, x);
    const double w = 2.0 / ((1.0 - x * x) * deriv * deriv);
    rule.nodes[n - 1 - i] = x;  // the i-th root counted from +1
    rule.nodes[i] = -x;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

// Same rule mapped affinely onto (a, b).
inline QuadratureRule gauss_legendre(int n, double a, double b) {
  if (!(b > a)) throw std::invalid_argument("gauss_legendre: interval must satisfy a < b");
  QuadratureRule rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

}  // namespace tfpp
