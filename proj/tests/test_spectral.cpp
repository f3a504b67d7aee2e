#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "tfpp/errors.hpp"
#include "tfpp/special_functions.hpp"
#include "tfpp/spectral.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1p-53; }
double sym(std::mt19937_64& rng) { return 2.0 * uniform01(rng) - 1.0; }

tfpp::SpectralField random_field(const tfpp::SpectralBasis& basis, std::mt19937_64& rng,
                                 double scale = 1.0, double decay = 1.0) {
  tfpp::SpectralField f = tfpp::zero_field(basis);
  for (int k = 0; k < basis.mode_count(); ++k)
    f.coeffs[k] = scale * sym(rng) * std::pow(basis.modes[k].theta, -decay);
  return f;
}

}  // namespace

TEST_CASE("eigenvalue layout on interval and rectangle") {
  tfpp::SpectralBasis b1 = tfpp::build_basis(tfpp::interval(kPi), 3);
  REQUIRE(b1.mode_count() == 3);
  CHECK(b1.modes[0].theta == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(b1.modes[1].theta == Catch::Approx(4.0).epsilon(1e-14));
  CHECK(b1.modes[2].theta == Catch::Approx(9.0).epsilon(1e-14));
  CHECK(b1.axis_points(0) >= 12);  // at least 4K points per axis

  tfpp::SpectralBasis b2 = tfpp::build_basis(tfpp::rectangle(kPi, kPi), 4);
  REQUIRE(b2.mode_count() == 4);
  const double want_theta[4] = {2.0, 5.0, 5.0, 8.0};
  const int want_index[4][2] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  for (int k = 0; k < 4; ++k) {
    CHECK(b2.modes[k].theta == Catch::Approx(want_theta[k]).epsilon(1e-14));
    CHECK(b2.modes[k].index[0] == want_index[k][0]);
    CHECK(b2.modes[k].index[1] == want_index[k][1]);
  }

  // unit interval: principal eigenvalue pi^2
  tfpp::SpectralBasis b3 = tfpp::build_basis(tfpp::interval(1.0), 2);
  CHECK(b3.modes[0].theta == Catch::Approx(kPi * kPi).epsilon(1e-14));

  CHECK_THROWS_AS(tfpp::interval(0.0), std::invalid_argument);
  CHECK_THROWS_AS(tfpp::rectangle(1.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(tfpp::build_basis(tfpp::interval(1.0), 0), std::invalid_argument);
}

TEST_CASE("modes are orthonormal under the stored quadrature") {
  for (int dim : {1, 2}) {
    tfpp::SpectralBasis basis = dim == 1 ? tfpp::build_basis(tfpp::interval(2.0), 12)
                                         : tfpp::build_basis(tfpp::rectangle(kPi, 1.5), 8);
    const int K = basis.mode_count();
    std::vector<std::vector<double>> values(K);
    for (int k = 0; k < K; ++k) {
      tfpp::SpectralField e = tfpp::zero_field(basis);
      e.coeffs[k] = 1.0;
      values[k] = tfpp::to_physical(e);
    }
    for (int k = 0; k < K; ++k)
      for (int l = k; l < K; ++l) {
        std::vector<double> prod(values[k].size());
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = values[k][i] * values[l][i];
        const double g = tfpp::integrate_physical(basis, prod);
        CHECK(std::fabs(g - (k == l ? 1.0 : 0.0)) < 1e-10);
      }
  }
}

TEST_CASE("projection recovers expansion coefficients") {
  tfpp::SpectralBasis basis = tfpp::build_basis(tfpp::interval(kPi), 5);

  tfpp::SpectralField e2 = tfpp::zero_field(basis);
  e2.coeffs[1] = 1.0;
  tfpp::SpectralField back = tfpp::to_spectral(tfpp::to_physical(e2), basis);
  for (int k = 0; k < 5; ++k)
    CHECK(std::fabs(back.coeffs[k] - (k == 1 ? 1.0 : 0.0)) < 1e-10);

  tfpp::SpectralField combo = tfpp::zero_field(basis);
  combo.coeffs[0] = 3.0;
  combo.coeffs[2] = -2.0;
  back = tfpp::to_spectral(tfpp::to_physical(combo), basis);
  const double want[5] = {3.0, 0.0, -2.0, 0.0, 0.0};
  for (int k = 0; k < 5; ++k) CHECK(std::fabs(back.coeffs[k] - want[k]) < 1e-10);

  std::vector<double> bad(basis.sample_count() + 1, 0.0);
  CHECK_THROWS_AS(tfpp::to_spectral(bad, basis), std::invalid_argument);
}

TEST_CASE("round trip and Parseval on random fields") {
  std::mt19937_64 rng(41u);
  for (int dim : {1, 2}) {
    tfpp::SpectralBasis basis = dim == 1 ? tfpp::build_basis(tfpp::interval(1.3), 16)
                                         : tfpp::build_basis(tfpp::rectangle(2.0, 0.8), 16);
    for (int trial = 0; trial < 4; ++trial) {
      tfpp::SpectralField f = random_field(basis, rng, 1.0, 0.25);
      std::vector<double> phys = tfpp::to_physical(f);
      tfpp::SpectralField back = tfpp::to_spectral(phys, basis);
      for (int k = 0; k < basis.mode_count(); ++k)
        CHECK(std::fabs(back.coeffs[k] - f.coeffs[k]) < 1e-10);

      // Parseval: L^2 norm by quadrature equals the coefficient norm
      const double l2 = tfpp::lebesgue_norm(f, 2.0);
      CHECK(std::fabs(l2 - tfpp::hilbert_norm(f, 0.0)) < 1e-9);
    }
  }
}

TEST_CASE("Hilbert scale norms") {
  tfpp::SpectralBasis basis = tfpp::build_basis(tfpp::interval(kPi), 4);

  tfpp::SpectralField phi1 = tfpp::zero_field(basis);
  phi1.coeffs[0] = 1.0;
  CHECK(tfpp::hilbert_norm(phi1, 1.0) == Catch::Approx(1.0).epsilon(1e-13));

  tfpp::SpectralField two = tfpp::zero_field(basis);
  two.coeffs[0] = 1.0;
  two.coeffs[1] = 1.0;
  CHECK(tfpp::hilbert_norm(two, 2.0) == Catch::Approx(std::sqrt(17.0)).epsilon(1e-13));

  // nu-monotonicity holds whenever theta_1 >= 1
  std::mt19937_64 rng(7u);
  for (int trial = 0; trial < 20; ++trial) {
    tfpp::SpectralField f = random_field(basis, rng);
    double prev = tfpp::hilbert_norm(f, -1.0);
    for (double nu : {-0.5, 0.0, 0.5, 1.0, 2.0}) {
      const double cur = tfpp::hilbert_norm(f, nu);
      CHECK(cur >= prev * (1.0 - 1e-12));
      prev = cur;
    }
  }
}

TEST_CASE("Lebesgue norms by quadrature") {
  tfpp::SpectralBasis basis = tfpp::build_basis(tfpp::interval(kPi), 4);
  tfpp::SpectralField phi1 = tfpp::zero_field(basis);
  phi1.coeffs[0] = 1.0;
  CHECK(tfpp::lebesgue_norm(phi1, 4.0) ==
        Catch::Approx(std::pow(3.0 / (2.0 * kPi), 0.25)).epsilon(1e-12));
  CHECK(tfpp::lebesgue_norm(phi1, 2.0) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(tfpp::lebesgue_norm(phi1, 0.5), std::invalid_argument);
}

TEST_CASE("derivative synthesis uses the analytic cosine tables") {
  tfpp::SpectralBasis basis = tfpp::build_basis(tfpp::rectangle(kPi, kPi), 4);
  tfpp::SpectralField phi11 = tfpp::zero_field(basis);
  phi11.coeffs[0] = 1.0;

  std::vector<double> ddx = tfpp::gradient_component(phi11, 0);
  const int ny = basis.axis_points(1);
  for (int ix = 0; ix < basis.axis_points(0); ix += 17)
    for (int iy = 0; iy < ny; iy += 23) {
      const double x = basis.axis_rule[0].nodes[ix];
      const double y = basis.axis_rule[1].nodes[iy];
      CHECK(std::fabs(ddx[std::size_t(ix) * ny + iy] - (2.0 / kPi) * std::cos(x) * std::sin(y)) <
            1e-12);
    }

  // |d/dx phi_(1,1)|_{L^2} = 1 because i = 1 on (0, pi)
  std::vector<double> sq(ddx.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = ddx[i] * ddx[i];
  CHECK(std::fabs(tfpp::integrate_physical(basis, sq) - 1.0) < 1e-10);

  CHECK_THROWS_AS(tfpp::gradient_component(phi11, 2), std::invalid_argument);
}

TEST_CASE("Luxemburg norm: closed form, homogeneity, degenerate input") {
  tfpp::SpectralBasis unit = tfpp::build_basis(tfpp::rectangle(1.0, 1.0), 4);

  // constant c on a unit-measure domain: kappa solves e^{(c/kappa)^2} - 1 = 1
  std::vector<double> samples(unit.sample_count(), -0.7);
  tfpp::OrliczNorm n = tfpp::orlicz_norm_samples(unit, samples);
  CHECK(n.value == Catch::Approx(0.7 / std::sqrt(std::log(2.0))).epsilon(1e-10));
  CHECK(n.residual <= 1e-10);

  tfpp::SpectralField zero = tfpp::zero_field(unit);
  tfpp::OrliczNorm z = tfpp::orlicz_norm(zero);
  CHECK(z.value == 0.0);

  std::mt19937_64 rng(99u);
  tfpp::SpectralField f = random_field(unit, rng, 6.0, 0.5);
  const double base = tfpp::orlicz_norm(f).value;
  const double doubled = tfpp::orlicz_norm(2.0 * f).value;
  CHECK(doubled == Catch::Approx(2.0 * base).epsilon(1e-9));
}

TEST_CASE("Lebesgue norms are controlled by the Luxemburg norm") {
  // |w|_{L^p} <= Gamma(p/2 + 1)^{1/p} |w|_{Xi} for p >= 2
  tfpp::SpectralBasis basis = tfpp::build_basis(tfpp::rectangle(1.0, 1.0), 12);
  std::mt19937_64 rng(2024u);
  for (int trial = 0; trial < 60; ++trial) {
    tfpp::SpectralField f = random_field(basis, rng, 25.0 * uniform01(rng) + 0.1, 0.6);
    const double orl = tfpp::orlicz_norm(f).value;
    std::vector<double> phys = tfpp::to_physical(f);
    for (double p : {2.0, 4.0, 6.0}) {
      const double lp = tfpp::lebesgue_norm_samples(basis, phys, p);
      const double bound = std::pow(tfpp::gamma(p / 2.0 + 1.0), 1.0 / p) * orl;
      CHECK(lp <= bound * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("empirical embedding constant is stable under mode doubling") {
  // sup |f|_{L^2} / |f|_{D^1} over unit modes and random draws; the supremum
  // sits at the principal mode, so doubling K must not move it by 10%.
  auto embedding_constant = [](int K) {
    tfpp::SpectralBasis basis = tfpp::build_basis(tfpp::rectangle(kPi, kPi), K);
    std::mt19937_64 rng(5150u);
    double sup = 0.0;
    for (int k = 0; k < basis.mode_count(); ++k) {
      tfpp::SpectralField e = tfpp::zero_field(basis);
      e.coeffs[k] = 1.0;
      sup = std::max(sup, tfpp::lebesgue_norm(e, 2.0) / tfpp::hilbert_norm(e, 1.0));
    }
    for (int trial = 0; trial < 40; ++trial) {
      tfpp::SpectralField f = random_field(basis, rng);
      sup = std::max(sup, tfpp::lebesgue_norm(f, 2.0) / tfpp::hilbert_norm(f, 1.0));
    }
    return sup;
  };
  const double c16 = embedding_constant(16);
  const double c32 = embedding_constant(32);
  CHECK(std::fabs(c32 / c16 - 1.0) < 0.10);
  // and the measured value agrees with the exact theta_1^{-1/2}
  CHECK(c16 == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
}
