#pragma once

// Dirichlet sine eigenbases on an interval (0, L) or rectangle (0, L1) x (0, L2),
// the physical <-> spectral transforms, and the norm family used throughout:
// the Hilbert scale D^nu, Lebesgue L^p, and the Luxemburg (Orlicz) norm for
// Xi(z) = e^{z^2} - 1.
//
// Eigenpairs: on (0, L) the k-th mode is sqrt(2/L) sin(k pi x / L) with
// eigenvalue theta = (k pi / L)^2; rectangle modes are products of the axis
// modes with eigenvalues added. Modes are stored with theta ascending and
// index-lexicographic tie-breaks, so truncation is always by eigenvalue.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tfpp/errors.hpp"
#include "tfpp/quadrature.hpp"

namespace tfpp {

struct Domain {
  int dim = 1;
  std::array<double, 2> length{1.0, 0.0};
};

inline Domain interval(double L) {
  if (!(L > 0.0)) throw std::invalid_argument("interval: length must be positive");
  return Domain{1, {L, 0.0}};
}

inline Domain rectangle(double L1, double L2) {
  if (!(L1 > 0.0) || !(L2 > 0.0))
    throw std::invalid_argument("rectangle: side lengths must be positive");
  return Domain{2, {L1, L2}};
}

inline double measure(const Domain& d) {
  return d.dim == 1 ? d.length[0] : d.length[0] * d.length[1];
}

struct Mode {
  std::array<int, 2> index{0, 0};  // 1-based per axis; index[1] == 0 in 1-D
  double theta = 0.0;
};

namespace detail {
inline std::uint64_t next_basis_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}
}  // namespace detail

class SpectralBasis {
 public:
  Domain domain;
  std::vector<Mode> modes;
  std::array<QuadratureRule, 2> axis_rule;  // axis_rule[1] unused in 1-D
  // phi[axis][m-1][i]  = sqrt(2/L) sin(m pi x_i / L)
  // dphi[axis][m-1][i] = d/dx of the same
  std::array<std::vector<std::vector<double>>, 2> phi;
  std::array<std::vector<std::vector<double>>, 2> dphi;
  std::array<int, 2> max_index{0, 0};
  std::uint64_t id = 0;  // memoization key for the solution operators

  int mode_count() const { return static_cast<int>(modes.size()); }

  int axis_points(int axis) const { return axis_rule[axis].size(); }

  std::size_t sample_count() const {
    return domain.dim == 1 ? axis_rule[0].nodes.size()
                           : axis_rule[0].nodes.size() * axis_rule[1].nodes.size();
  }

  double quad_weight(std::size_t flat) const {
    if (domain.dim == 1) return axis_rule[0].weights[flat];
    const std::size_t ny = axis_rule[1].nodes.size();
    return axis_rule[0].weights[flat / ny] * axis_rule[1].weights[flat % ny];
  }
};

inline SpectralBasis build_basis(const Domain& domain, int K, int quad_order = 1) {
  if (domain.dim != 1 && domain.dim != 2)
    throw std::invalid_argument("build_basis: domain must be 1- or 2-dimensional");
  for (int a = 0; a < domain.dim; ++a)
    if (!(domain.length[a] > 0.0))
      throw std::invalid_argument("build_basis: domain lengths must be positive");
  if (K < 1) throw std::invalid_argument("build_basis: mode count must be positive");
  if (quad_order < 1) throw std::invalid_argument("build_basis: quadrature order must be positive");

  const double pi = 3.14159265358979323846;
  SpectralBasis basis;
  basis.domain = domain;
  basis.id = detail::next_basis_id();

  if (domain.dim == 1) {
    const double L = domain.length[0];
    basis.modes.resize(K);
    for (int m = 1; m <= K; ++m) {
      basis.modes[m - 1].index = {m, 0};
      basis.modes[m - 1].theta = (m * pi / L) * (m * pi / L);
    }
  } else {
    // Candidates (i, j) in [1, K]^2 always contain the K smallest eigenvalues
    // because theta is increasing in each index separately.
    std::vector<Mode> cand;
    cand.reserve(std::size_t(K) * K);
    for (int i = 1; i <= K; ++i)
      for (int j = 1; j <= K; ++j) {
        Mode m;
        m.index = {i, j};
        const double a = i * pi / domain.length[0];
        const double b = j * pi / domain.length[1];
        m.theta = a * a + b * b;
        cand.push_back(m);
      }
    std::sort(cand.begin(), cand.end(), [](const Mode& a, const Mode& b) {
      if (a.theta != b.theta) return a.theta < b.theta;
      if (a.index[0] != b.index[0]) return a.index[0] < b.index[0];
      return a.index[1] < b.index[1];
    });
    cand.resize(K);
    basis.modes = std::move(cand);
  }

  for (const Mode& m : basis.modes)
    for (int a = 0; a < domain.dim; ++a)
      basis.max_index[a] = std::max(basis.max_index[a], m.index[a]);

  // 4K points per axis keep every product of resolvable modes (and their
  // low-order nonlinear images) inside the exactness range of the rule.
  const int n_axis = std::max(quad_order, 4 * K);
  for (int a = 0; a < domain.dim; ++a) {
    const double L = domain.length[a];
    basis.axis_rule[a] = gauss_legendre(n_axis, 0.0, L);
    const double norm = std::sqrt(2.0 / L);
    basis.phi[a].assign(basis.max_index[a], std::vector<double>(n_axis));
    basis.dphi[a].assign(basis.max_index[a], std::vector<double>(n_axis));
    for (int m = 1; m <= basis.max_index[a]; ++m) {
      const double freq = m * pi / L;
      for (int i = 0; i < n_axis; ++i) {
        const double x = basis.axis_rule[a].nodes[i];
        basis.phi[a][m - 1][i] = norm * std::sin(freq * x);
        basis.dphi[a][m - 1][i] = norm * freq * std::cos(freq * x);
      }
    }
  }
  return basis;
}

struct SpectralField {
  const SpectralBasis* basis = nullptr;
  std::vector<double> coeffs;
  double nu = 0.0;  // regularity class the field is declared to live in
};

inline SpectralField zero_field(const SpectralBasis& basis, double nu = 0.0) {
  return SpectralField{&basis, std::vector<double>(basis.mode_count(), 0.0), nu};
}

namespace detail {
inline void require_same_basis(const SpectralField& a, const SpectralField& b) {
  if (a.basis == nullptr || b.basis == nullptr || a.basis->id != b.basis->id)
    throw std::invalid_argument("field arithmetic requires a shared basis");
  if (a.coeffs.size() != b.coeffs.size())
    throw std::invalid_argument("field arithmetic requires equal coefficient counts");
}
inline void require_attached(const SpectralField& f) {
  if (f.basis == nullptr) throw std::invalid_argument("field is not attached to a basis");
  if (f.coeffs.size() != std::size_t(f.basis->mode_count()))
    throw std::invalid_argument("field coefficient count does not match its basis");
}
}  // namespace detail

inline SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  detail::require_same_basis(a, b);
  SpectralField out = a;
  for (std::size_t k = 0; k < out.coeffs.size(); ++k) out.coeffs[k] += b.coeffs[k];
  return out;
}

inline SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  detail::require_same_basis(a, b);
  SpectralField out = a;
  for (std::size_t k = 0; k < out.coeffs.size(); ++k) out.coeffs[k] -= b.coeffs[k];
  return out;
}

inline SpectralField operator*(double s, const SpectralField& f) {
  SpectralField out = f;
  for (double& c : out.coeffs) c *= s;
  return out;
}

// Projection onto the stored modes: coeffs[k] = quadrature(samples * phi_k).
inline SpectralField to_spectral(const std::vector<double>& samples, const SpectralBasis& basis) {
  if (samples.size() != basis.sample_count())
    throw std::invalid_argument("to_spectral: sample count does not match the quadrature grid");
  SpectralField out = zero_field(basis);

  if (basis.domain.dim == 1) {
    const QuadratureRule& rule = basis.axis_rule[0];
    const int n = rule.size();
    std::vector<double> terms(n);
    for (int k = 0; k < basis.mode_count(); ++k) {
      const std::vector<double>& row = basis.phi[0][basis.modes[k].index[0] - 1];
      for (int i = 0; i < n; ++i) terms[i] = rule.weights[i] * row[i] * samples[i];
      out.coeffs[k] = pairwise_sum(terms);
    }
    return out;
  }

  const QuadratureRule& rx = basis.axis_rule[0];
  const QuadratureRule& ry = basis.axis_rule[1];
  const int nx = rx.size();
  const int ny = ry.size();
  // stage[m-1][iy] = sum_ix wx sinx_m samples(ix, iy); then contract over iy.
  std::vector<std::vector<double>> stage(basis.max_index[0], std::vector<double>(ny));
  std::vector<double> terms(std::max(nx, ny));
  for (int m = 0; m < basis.max_index[0]; ++m) {
    const std::vector<double>& row = basis.phi[0][m];
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix)
        terms[ix] = rx.weights[ix] * row[ix] * samples[std::size_t(ix) * ny + iy];
      stage[m][iy] = pairwise_sum(terms.data(), nx);
    }
  }
  for (int k = 0; k < basis.mode_count(); ++k) {
    const std::vector<double>& srow = stage[basis.modes[k].index[0] - 1];
    const std::vector<double>& row = basis.phi[1][basis.modes[k].index[1] - 1];
    for (int iy = 0; iy < ny; ++iy) terms[iy] = ry.weights[iy] * row[iy] * srow[iy];
    out.coeffs[k] = pairwise_sum(terms.data(), ny);
  }
  return out;
}

namespace detail {

// Shared synthesis: values on the quadrature grid of the field itself
// (deriv_axis == -1) or of its derivative along one axis.
inline std::vector<double> synthesize(const SpectralField& f, int deriv_axis) {
  require_attached(f);
  const SpectralBasis& basis = *f.basis;

  if (basis.domain.dim == 1) {
    const int n = basis.axis_points(0);
    std::vector<double> out(n, 0.0);
    const auto& table = (deriv_axis == 0) ? basis.dphi[0] : basis.phi[0];
    for (int k = 0; k < basis.mode_count(); ++k) {
      const double c = f.coeffs[k];
      if (c == 0.0) continue;
      const std::vector<double>& row = table[basis.modes[k].index[0] - 1];
      for (int i = 0; i < n; ++i) out[i] += c * row[i];
    }
    return out;
  }

  const int nx = basis.axis_points(0);
  const int ny = basis.axis_points(1);
  const auto& xtable = (deriv_axis == 0) ? basis.dphi[0] : basis.phi[0];
  const auto& ytable = (deriv_axis == 1) ? basis.dphi[1] : basis.phi[1];
  // stage[i-1][iy] = sum over modes with first index i of c * ytable_j(iy)
  std::vector<std::vector<double>> stage(basis.max_index[0], std::vector<double>(ny, 0.0));
  for (int k = 0; k < basis.mode_count(); ++k) {
    const double c = f.coeffs[k];
    if (c == 0.0) continue;
    const std::vector<double>& yrow = ytable[basis.modes[k].index[1] - 1];
    std::vector<double>& srow = stage[basis.modes[k].index[0] - 1];
    for (int iy = 0; iy < ny; ++iy) srow[iy] += c * yrow[iy];
  }
  std::vector<double> out(std::size_t(nx) * ny, 0.0);
  for (int m = 0; m < basis.max_index[0]; ++m) {
    const std::vector<double>& xrow = xtable[m];
    const std::vector<double>& srow = stage[m];
    for (int ix = 0; ix < nx; ++ix) {
      const double sx = xrow[ix];
      if (sx == 0.0) continue;
      double* dst = out.data() + std::size_t(ix) * ny;
      for (int iy = 0; iy < ny; ++iy) dst[iy] += sx * srow[iy];
    }
  }
  return out;
}

}  // namespace detail

inline std::vector<double> to_physical(const SpectralField& f) {
  return detail::synthesize(f, -1);
}

// Values of d f / d x_axis on the quadrature grid, from the analytic mode
// derivatives (sine -> cosine), not finite differences.
inline std::vector<double> gradient_component(const SpectralField& f, int axis) {
  detail::require_attached(f);
  if (axis < 0 || axis >= f.basis->domain.dim)
    throw std::invalid_argument("gradient_component: axis out of range");
  return detail::synthesize(f, axis);
}

// Hilbert-scale norm (sum theta^nu c^2)^{1/2}; any real nu is admissible on a
// truncated expansion.
inline double hilbert_norm(const SpectralField& f, double nu) {
  detail::require_attached(f);
  std::vector<double> terms(f.coeffs.size());
  for (std::size_t k = 0; k < f.coeffs.size(); ++k)
    terms[k] = std::pow(f.basis->modes[k].theta, nu) * f.coeffs[k] * f.coeffs[k];
  return std::sqrt(pairwise_sum(terms));
}

inline double integrate_physical(const SpectralBasis& basis, const std::vector<double>& samples) {
  if (samples.size() != basis.sample_count())
    throw std::invalid_argument("integrate_physical: sample count mismatch");
  std::vector<double> terms(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) terms[i] = basis.quad_weight(i) * samples[i];
  return pairwise_sum(terms);
}

inline double lebesgue_norm_samples(const SpectralBasis& basis, const std::vector<double>& samples,
                                    double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lebesgue_norm: requires p >= 1");
  std::vector<double> powd(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) powd[i] = std::pow(std::fabs(samples[i]), p);
  return std::pow(integrate_physical(basis, powd), 1.0 / p);
}

inline double lebesgue_norm(const SpectralField& f, double p) {
  detail::require_attached(f);
  return lebesgue_norm_samples(*f.basis, to_physical(f), p);
}

struct OrliczNorm {
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

namespace detail {

// int_Omega Xi(|w| / kappa) - 1 with Xi(z) = e^{z^2} - 1; +inf when the
// exponent overflows, which keeps the bracketing loop monotone.
inline double orlicz_excess(const SpectralBasis& basis, const std::vector<double>& samples,
                            double kappa) {
  double acc = 0.0;
  std::vector<double> terms(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double z = samples[i] / kappa;
    const double e = z * z;
    if (e > 700.0) return std::numeric_limits<double>::infinity();
    terms[i] = basis.quad_weight(i) * std::expm1(e);
  }
  acc = pairwise_sum(terms);
  return acc - 1.0;
}

}  // namespace detail

// Luxemburg norm inf{kappa > 0 : int Xi(|w|/kappa) <= 1} by monotone bisection.
// The excess is strictly decreasing in kappa, so the bracket, once found, pins
// the norm; the residual reported is |int Xi(|w|/kappa) - 1| at the returned value.
inline OrliczNorm orlicz_norm_samples(const SpectralBasis& basis,
                                      const std::vector<double>& samples) {
  if (samples.size() != basis.sample_count())
    throw std::invalid_argument("orlicz_norm: sample count mismatch");
  double amax = 0.0;
  for (double v : samples) amax = std::max(amax, std::fabs(v));
  if (amax == 0.0) return OrliczNorm{0.0, 0, 0.0};
  if (!std::isfinite(amax)) throw NonconvergenceError("orlicz_norm: samples are not finite");

  OrliczNorm result;
  double lo = amax / 10.0;
  double hi = 10.0 * amax * std::max(1.0, measure(basis.domain));
  int iter = 0;
  while (detail::orlicz_excess(basis, samples, lo) < 0.0) {
    lo *= 0.5;
    if (++iter > 200) throw NonconvergenceError("orlicz_norm: no lower bracket");
  }
  while (detail::orlicz_excess(basis, samples, hi) > 0.0) {
    hi *= 2.0;
    if (++iter > 200) throw NonconvergenceError("orlicz_norm: no upper bracket");
  }
  while (hi - lo > 1e-14 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (detail::orlicz_excess(basis, samples, mid) > 0.0)
      lo = mid;
    else
      hi = mid;
    if (++iter > 200) break;
  }
  result.value = 0.5 * (lo + hi);
  result.iterations = iter;
  result.residual = std::fabs(detail::orlicz_excess(basis, samples, result.value));
  if (!(result.residual <= 1e-10))
    throw NonconvergenceError("orlicz_norm: residual above 1e-10 after bisection");
  return result;
}

inline OrliczNorm orlicz_norm(const SpectralField& f) {
  detail::require_attached(f);
  return orlicz_norm_samples(*f.basis, to_physical(f));
}

}  // namespace tfpp
