#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tfpp/dd.hpp"
#include "tfpp/errors.hpp"

namespace tfpp {

/// sin(pi*x) with exact argument reduction (plain double precision).
inline double sinpi(double x) {
  double n = std::nearbyint(x);
  double r = std::sin(M_PI * (x - n));
  return std::fmod(std::abs(n), 2.0) == 1.0 ? -r : r;
}

namespace detail {

// Lanczos approximation, g = 7, 9 coefficients. Fixed published set; relative
// error below 1e-14 on the positive real axis, comfortably inside the 1e-13
// budget on (0, 171).
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_c = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline double lanczos_sum(double z) {  // z = x - 1, x >= 0.5
  double s = lanczos_c[0];
  for (std::size_t i = 1; i < lanczos_c.size(); ++i) s += lanczos_c[i] / (z + double(i));
  return s;
}

}  // namespace detail

namespace detail {
inline double gamma_dd_entry(double x);  // forward: double-double ladder, below
}

/// Gamma function on (0, 171.62). Throws std::domain_error off the domain and
/// std::overflow_error where the value exceeds double range. Evaluated through
/// the extended-precision ladder: a double Lanczos sum loses ~1e-13 near the
/// top of the range (pow/exp rounding amplified by the ~170 exponent), which
/// would eat the whole accuracy budget.
inline double gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma: requires x > 0");
  if (x > 171.624) throw std::overflow_error("gamma: overflow for x > 171.624");
  return detail::gamma_dd_entry(x);
}

/// log Gamma on (0, inf).
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
  double z = x - 1.0;
  double s = detail::lanczos_sum(z);
  double t = z + detail::lanczos_g + 0.5;
  return 0.91893853320467274178 + (z + 0.5) * std::log(t) - t + std::log(s);
}

/// Reciprocal gamma, entire: zero at the poles 0, -1, -2, ...
inline double rgamma(double x) {
  if (x > 0.5) return std::exp(-log_gamma(x));
  double s = sinpi(x);
  if (s == 0.0) return 0.0;
  double lg = log_gamma(1.0 - x);  // reflection: 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
  return s / M_PI * std::exp(lg);
}

/// Euler beta on p, q > 0, relative accuracy ~1e-14.
inline double beta(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) throw std::domain_error("beta: requires p, q > 0");
  if (p + q < 170.0) return gamma(p) * gamma(q) / gamma(p + q);
  return std::exp(log_gamma(p) + log_gamma(q) - log_gamma(p + q));
}

namespace detail {

// ---- double-double gamma (Stirling / Bernoulli) -------------------------
// Direct Stirling series for x >= 20 with Bernoulli terms through B_30;
// the remainder is enveloped by the first omitted term, below 7e-34 there.
// Smaller arguments shift up by an exact integer and divide the rising
// factorial back out. Every step is well conditioned, so the relative error
// stays near the double-double noise floor (~1e-29) across (0, 171] --
// unlike Spouge or Lanczos sums, whose large alternating coefficients would
// eat most of the extended precision. This floor is what the compensated
// Mittag-Leffler series below certifies against.

// B_{2m} / (2m (2m-1)) for m = 1..15; numerators and denominators are exact
inline const std::array<dd, 15>& stirling_coeffs() {
  static const std::array<dd, 15> coeffs = [] {
    constexpr double num[15] = {1.0,      -1.0,    1.0,      -1.0,         5.0,
                                -691.0,   7.0,     -3617.0,  43867.0,      -174611.0,
                                854513.0, -236364091.0, 8553103.0, -23749461029.0,
                                8615841276005.0};
    constexpr double den[15] = {6.0,   30.0,  42.0, 30.0,   66.0,
                                2730.0, 6.0,  510.0, 798.0, 330.0,
                                138.0, 2730.0, 6.0,  870.0, 14322.0};
    std::array<dd, 15> c{};
    for (int m = 1; m <= 15; ++m)
      c[m - 1] = dd(num[m - 1]) / dd(den[m - 1] * double(2 * m) * double(2 * m - 1));
    return c;
  }();
  return coeffs;
}

inline dd half_log_2pi_dd() {
  static const dd v = dd(0.5) * log(dd_2pi);
  return v;
}

inline dd lgamma_stirling(dd u) {  // requires u >= 20
  const auto& c = stirling_coeffs();
  dd t = dd(1.0) / (u * u);
  dd s = c[14];
  for (int m = 13; m >= 0; --m) s = s * t + c[m];
  return (u - dd(0.5)) * log(u) - u + half_log_2pi_dd() + s / u;
}

// Arguments are passed as double-double throughout: the series arguments
// alpha*k + zeta are not representable in double, and under the e^X
// cancellation of the Mittag-Leffler series a 1-ulp argument rounding would
// cost ~psi(x) * 1e-16 * e^X, i.e. everything.

inline dd lgamma_dd(dd x) {  // requires x > 0
  if (x.hi >= 20.0) return lgamma_stirling(x);
  int m = int(20.0 - x.hi) + 1;  // smallest integer with x + m >= 20
  dd prod = x;
  for (int i = 1; i < m; ++i) prod *= x + dd(double(i));
  return lgamma_stirling(x + dd(double(m))) - log(prod);
}

inline dd gamma_dd(dd x) { return exp(lgamma_dd(x)); }

inline double gamma_dd_entry(double x) { return double(gamma_dd(dd(x))); }

// entire reciprocal gamma in double-double; callers keep |x| modest (< 171)
inline dd rgamma_dd(dd x) {
  if (x.hi > 0.5) {
    if (x.hi >= 20.0) return exp(-lgamma_stirling(x));
    int m = int(20.0 - x.hi) + 1;
    dd r = exp(-lgamma_stirling(x + dd(double(m))));
    // multiply the rising factorial back in; every partial value stays
    // below Gamma(21)/Gamma(20), so nothing overflows
    for (int i = m - 1; i >= 0; --i) r *= x + dd(double(i));
    return r;
  }
  dd s = sinpi(x);
  if (s.hi == 0.0 && s.lo == 0.0) return dd(0.0);
  return s * exp(lgamma_dd(dd(1.0) - x)) / dd_pi;
}

}  // namespace detail

/// Evaluation parameters for the two-parameter Mittag-Leffler function
/// E_{alpha,zeta}. `zeta` may be any real for which the defining series
/// converges (negative values occur in derivative identities).
struct MLParams {
  double alpha;
  double zeta;
  double tol = 1e-12;  // absolute accuracy that must be certified
};

enum class MLMethod { automatic, series, asymptotic };

namespace detail {

// Reciprocal-gamma table 1/Gamma(alpha k + zeta), k = 0, 1, ... shared by all
// series evaluations at the same (alpha, zeta). Thread-local: no locking, and
// results stay bit-deterministic regardless of thread scheduling.
inline std::vector<dd>& rgamma_table(double alpha, double zeta, std::size_t upto) {
  thread_local std::map<std::pair<double, double>, std::vector<dd>> cache;
  auto& tab = cache[{alpha, zeta}];
  while (tab.size() <= upto) {
    std::size_t k = tab.size();
    // alpha*k + zeta held as double-double: two_prod makes the product exact,
    // so the gamma argument carries no double rounding
    dd arg = dd_detail::two_prod(alpha, double(k)) + dd(zeta);
    tab.push_back(rgamma_dd(arg));
  }
  return tab;
}

// Defining power series summed in double-double. Sound for cancellation scale
// X = |z|^(1/alpha) up to ~30 (the terms peak near exp(X); past that the
// certified error exceeds any useful tolerance and the asymptotic regime takes
// over).
inline double ml_series(const MLParams& p, double z) {
  constexpr std::size_t k_cap = 60000;
  double X = z == 0.0 ? 0.0 : std::pow(-z, 1.0 / p.alpha);
  std::size_t k_hump = std::size_t(X / p.alpha) + 6;

  dd sum = 0.0;
  dd zpow = 1.0;
  double sum_abs = 0.0;
  double certified = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < k_cap; ++k) {
    auto& tab = rgamma_table(p.alpha, p.zeta, k + 1);
    dd term = tab[k] * zpow;
    sum += term;
    sum_abs += std::abs(term.hi);
    zpow *= dd(z);
    if (k >= k_hump && std::abs(term.hi) < 0.01 * p.tol) {
      // ratio of successive reciprocal gammas decays monotonically past the
      // hump, so a measured ratio < 1 certifies a geometric tail bound
      double r = std::abs(z) * std::abs(double(tab[k + 1])) /
                 std::max(std::abs(double(tab[k])), 1e-300);
      if (r < 0.5) {
        double tail = std::abs(term.hi) * r / (1.0 - r);
        certified = tail + sum_abs * 3e-29;
        break;
      }
    }
  }
  if (certified > p.tol)
    throw AccuracyError("mittag_leffler: series certified only " + fmt_sci(certified),
                        certified);
  return double(sum);
}

// Asymptotic expansion for z -> -inf, truncated where its term envelope
// bottoms out; the certified error is twice the envelope there plus rounding.
inline double ml_asymptotic(const MLParams& p, double z) {
  const double lz = std::log(-z);
  double sum = 0.0;
  double sum_abs = 0.0;
  double prev_env = std::numeric_limits<double>::infinity();
  double omitted = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= 400; ++n) {
    double y = p.zeta - p.alpha * double(n);
    // env bounds |z^{-n} / Gamma(y)| with the sin factor of the reflection
    // dropped: log-convex in n, so its first increase is its global minimum.
    // The raw term magnitude itself dips to zero at the gamma poles and is
    // useless for locating the optimal truncation point.
    double env, term;
    double parity = n % 2 == 0 ? 1.0 : -1.0;  // z^{-n} = parity |z|^{-n}
    if (y > 0.5) {
      env = std::exp(-log_gamma(y) - double(n) * lz);
      term = -parity * env;
    } else {
      env = std::exp(log_gamma(1.0 - y) - double(n) * lz) / M_PI;
      term = -parity * sinpi(y) * env;
    }
    if (env > prev_env && n > 2) {  // past the envelope minimum
      omitted = env;                // bound on the first term left out
      break;
    }
    sum += term;
    sum_abs += std::abs(term);
    omitted = env;
    if (env < 1e-3 * p.tol) break;  // remainder already negligible
    prev_env = env;
  }
  double certified = 2.0 * omitted + sum_abs * 2e-16;
  if (certified > p.tol)
    throw AccuracyError(
        "mittag_leffler: asymptotic certified only " + fmt_sci(certified) + " at z = " + fmt_sci(z),
        certified);
  return sum;
}

}  // namespace detail

/// Two-parameter Mittag-Leffler function on the closed negative real axis.
///
/// The defining series (compensated, double-double) serves cancellation
/// scales X = |z|^(1/alpha) up to 30; beyond that the adaptively truncated
/// asymptotic expansion takes over with error ~exp(-X). The two regimes
/// overlap near the switch and agree there to ~1e-12. Throws AccuracyError
/// (with the certified bound attached) when the requested tolerance cannot be
/// certified, never silently degrading.
inline double mittag_leffler(const MLParams& p, double z, MLMethod method = MLMethod::automatic) {
  if (!(p.alpha > 0.0) || p.alpha > 1.0)
    throw std::domain_error("mittag_leffler: requires 0 < alpha <= 1");
  if (!(p.tol > 0.0)) throw std::domain_error("mittag_leffler: requires tol > 0");
  if (z > 0.0) throw std::domain_error("mittag_leffler: requires z <= 0");
  if (p.alpha == 1.0 && method == MLMethod::asymptotic)
    throw std::domain_error("mittag_leffler: no asymptotic regime at alpha = 1");
  if (z == 0.0) return double(detail::rgamma_dd(p.zeta));

  if (method == MLMethod::automatic) {
    if (p.alpha == 1.0) {
      if (-z <= 30.0) return detail::ml_series(p, z);
      if (p.zeta == 1.0) return std::exp(z);  // exact classical reduction
      throw AccuracyError("mittag_leffler: alpha = 1 outside series range", HUGE_VAL);
    }
    double X = std::pow(-z, 1.0 / p.alpha);
    method = X <= 30.0 ? MLMethod::series : MLMethod::asymptotic;
  }
  return method == MLMethod::series ? detail::ml_series(p, z) : detail::ml_asymptotic(p, z);
}

/// Grid estimate of the uniform bound M in |E_{alpha,zeta}(z)| <= M/(1+|z|)
/// on [z_min, 0]: the supremum of (1+|z|)|E| over a log-spaced grid that
/// always contains the endpoints.
struct BoundConstant {
  double value;
  double alpha;
  double zeta;
  double z_min;
  int grid_size;
};

inline BoundConstant ml_bound_estimate(const MLParams& p, double z_min, int grid_size) {
  if (z_min > 0.0) throw std::domain_error("ml_bound_estimate: requires z_min <= 0");
  if (grid_size < 2) throw std::domain_error("ml_bound_estimate: requires grid_size >= 2");
  double sup = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    double z;
    if (i == 0 || z_min == 0.0) {
      z = 0.0;
    } else {
      // magnitudes log-spaced over six decades up to |z_min|
      double frac = double(grid_size - 1 - i) / double(grid_size - 1);
      z = z_min * std::pow(10.0, -6.0 * frac);
    }
    double v = (1.0 + std::abs(z)) * std::abs(mittag_leffler(p, z));
    sup = std::max(sup, v);
  }
  return {sup, p.alpha, p.zeta, z_min, grid_size};
}

/// Moment of the M-Wright density: integral of r^mu against W_alpha equals
/// Gamma(1+mu) / Gamma(1+alpha*mu), for mu > -1.
inline double mwright_moment(double alpha, double mu) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::domain_error("mwright_moment: requires 0 < alpha <= 1");
  if (!(mu > -1.0)) throw std::domain_error("mwright_moment: requires mu > -1");
  return gamma(1.0 + mu) / gamma(1.0 + alpha * mu);
}

}  // namespace tfpp
