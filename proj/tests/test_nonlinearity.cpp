#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "tfpp/errors.hpp"
#include "tfpp/nonlinearity.hpp"
#include "tfpp/spectral.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1p-53; }

tfpp::SpectralField random_field(const tfpp::SpectralBasis& basis, std::mt19937_64& rng,
                                 double scale = 1.0) {
  tfpp::SpectralField f = tfpp::zero_field(basis);
  for (int k = 0; k < basis.mode_count(); ++k)
    f.coeffs[k] = scale * (2.0 * uniform01(rng) - 1.0) / (1.0 + basis.modes[k].theta);
  return f;
}

tfpp::SpectralField scaled_to_orlicz(const tfpp::SpectralBasis& basis, std::mt19937_64& rng,
                                     double target) {
  tfpp::SpectralField f = random_field(basis, rng);
  const double m = tfpp::orlicz_norm(f).value;
  REQUIRE(m > 0.0);
  return (target / m) * f;
}

}  // namespace

TEST_CASE("zero input maps to exactly zero output for every source") {
  tfpp::SpectralBasis plane = tfpp::build_basis(tfpp::rectangle(kPi, kPi), 8);
  tfpp::SpectralBasis line = tfpp::build_basis(tfpp::interval(kPi), 8);

  const std::vector<tfpp::NonlinearitySpec> planar = {
      {tfpp::SourceKind::advection, {1.0, -2.0}, 3.0, 0.5},
      {tfpp::SourceKind::bbm_burgers, {1.0, 0.0}, 3.0, 0.5},
      {tfpp::SourceKind::polynomial, {0.0, 0.0}, 3.0, 0.5},
      {tfpp::SourceKind::exponential, {0.0, 0.0}, 3.0, 0.5},
  };
  for (const tfpp::NonlinearitySpec& spec : planar) {
    tfpp::SpectralField img = tfpp::eval_H(spec, tfpp::zero_field(plane));
    for (double c : img.coeffs) CHECK(c == 0.0);
    CHECK(img.nu == spec.output_nu());
  }

  const std::vector<tfpp::NonlinearitySpec> linear = {
      {tfpp::SourceKind::advection, {1.5, 0.0}, 3.0, 0.5},
      {tfpp::SourceKind::polynomial, {0.0, 0.0}, 3.0, 0.1},
  };
  for (const tfpp::NonlinearitySpec& spec : linear) {
    tfpp::SpectralField img = tfpp::eval_H(spec, tfpp::zero_field(line));
    for (double c : img.coeffs) CHECK(c == 0.0);
  }
}

TEST_CASE("regularity bookkeeping per source kind") {
  tfpp::NonlinearitySpec spec;
  spec.kind = tfpp::SourceKind::advection;
  CHECK(spec.input_nu() == 1.0);
  CHECK(spec.output_nu() == 0.0);
  spec.kind = tfpp::SourceKind::bbm_burgers;
  CHECK(spec.input_nu() == 1.0);
  CHECK(spec.output_nu() == -1.0);
  spec.kind = tfpp::SourceKind::polynomial;
  spec.nu = 0.4;
  CHECK(spec.input_nu() == 0.4);
  CHECK(spec.output_nu() == 0.4 - 1.0);
  spec.kind = tfpp::SourceKind::exponential;
  CHECK(spec.input_nu() == 1.0);
  CHECK(spec.output_nu() == 0.0);
}

TEST_CASE("directional derivative of the first planar mode") {
  tfpp::SpectralBasis basis = tfpp::build_basis(tfpp::rectangle(kPi, kPi), 4);
  REQUIRE(basis.modes[0].index[0] == 1);
  REQUIRE(basis.modes[0].index[1] == 1);
  tfpp::SpectralField u = tfpp::zero_field(basis);
  u.coeffs[0] = 1.0;

  tfpp::NonlinearitySpec spec{tfpp::SourceKind::advection, {1.0, 0.0}, 3.0, 0.5};
  const std::vector<double> img = tfpp::eval_H_physical(spec, u);

  // analytic image: (2/pi) cos(x) sin(y) on the tensor quadrature grid
  const auto& rx = basis.axis_rule[0];
  const auto& ry = basis.axis_rule[1];
  for (int ix = 0; ix < rx.size(); ++ix)
    for (int iy = 0; iy < ry.size(); ++iy) {
      const double want = (2.0 / kPi) * std::cos(rx.nodes[ix]) * std::sin(ry.nodes[iy]);
      CHECK(std::fabs(img[std::size_t(ix) * ry.size() + iy] - want) < 1e-12);
    }

  // its L2 norm equals 1: the x-frequency of the first mode is 1
  CHECK(tfpp::lebesgue_norm_samples(basis, img, 2.0) == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("cubic image of the first interval mode") {
  tfpp::SpectralBasis basis = tfpp::build_basis(tfpp::interval(kPi), 4);
  tfpp::SpectralField u = tfpp::zero_field(basis);
  u.coeffs[0] = 1.0;

  // quadrature oracle for the quartic moment behind the projection value
  std::vector<double> quartic(basis.sample_count());
  for (int i = 0; i < basis.axis_points(0); ++i)
    quartic[i] = std::pow(std::sin(basis.axis_rule[0].nodes[i]), 4.0);
  CHECK(tfpp::integrate_physical(basis, quartic) == Catch::Approx(3.0 * kPi / 8.0).epsilon(1e-13));

  tfpp::NonlinearitySpec spec{tfpp::SourceKind::polynomial, {0.0, 0.0}, 3.0, 0.1};
  tfpp::SpectralField img = tfpp::eval_H(spec, u);
  // (2/pi)^2 * (3*pi/8) = 3/(2*pi)
  CHECK(img.coeffs[0] == Catch::Approx(3.0 / (2.0 * kPi)).epsilon(1e-12));
}

TEST_CASE("power-law images are p-homogeneous") {
  tfpp::SpectralBasis basis = tfpp::build_basis(tfpp::rectangle(kPi, 1.5), 10);
  std::mt19937_64 rng(11u);
  for (double p : {3.0, 2.5}) {
    tfpp::NonlinearitySpec spec{tfpp::SourceKind::polynomial, {0.0, 0.0}, p, 0.25};
    tfpp::SpectralField u = random_field(basis, rng);
    tfpp::SpectralField lhs = tfpp::eval_H(spec, 2.0 * u);
    tfpp::SpectralField rhs = std::pow(2.0, p) * tfpp::eval_H(spec, u);
    const double scale = tfpp::hilbert_norm(rhs, 0.0);
    for (int k = 0; k < basis.mode_count(); ++k)
      CHECK(std::fabs(lhs.coeffs[k] - rhs.coeffs[k]) < 1e-12 * scale);
  }
}

TEST_CASE("transport is globally Lipschitz with constant |eta|") {
  tfpp::SpectralBasis basis = tfpp::build_basis(tfpp::rectangle(kPi, kPi), 12);
  tfpp::NonlinearitySpec spec{tfpp::SourceKind::advection, {0.8, -0.6}, 3.0, 0.5};
  const double eta = tfpp::eta_magnitude(spec);
  CHECK(eta == Catch::Approx(1.0).epsilon(1e-15));

  std::mt19937_64 rng(23u);
  double sup = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    tfpp::SpectralField u = random_field(basis, rng, 1.0 + trial % 3);
    tfpp::SpectralField v = random_field(basis, rng);
    const double ratio = tfpp::lipschitz_ratio(spec, u, v);
    CHECK(ratio <= eta + 1e-8);
    sup = std::max(sup, ratio);
  }
  CHECK(sup > 0.1);  // the bound is active, not vacuous

  tfpp::SpectralBasis other = tfpp::build_basis(tfpp::rectangle(kPi, kPi), 12);
  CHECK_THROWS_AS(
      tfpp::lipschitz_ratio(spec, random_field(basis, rng), random_field(other, rng)),
      std::invalid_argument);
}

TEST_CASE("quadratic flux lands in the dual space with the embedding budget") {
  tfpp::SpectralBasis basis = tfpp::build_basis(tfpp::rectangle(kPi, kPi), 16);
  std::mt19937_64 rng(31u);

  // empirical L4 embedding constant over unit modes and random draws
  double c_omega = 0.0;
  for (int k = 0; k < basis.mode_count(); ++k) {
    tfpp::SpectralField e = tfpp::zero_field(basis);
    e.coeffs[k] = 1.0;
    c_omega = std::max(c_omega, tfpp::lebesgue_norm(e, 4.0) / tfpp::hilbert_norm(e, 1.0));
  }
  for (int trial = 0; trial < 40; ++trial) {
    tfpp::SpectralField f = random_field(basis, rng);
    c_omega = std::max(c_omega, tfpp::lebesgue_norm(f, 4.0) / tfpp::hilbert_norm(f, 1.0));
  }
  CHECK(c_omega < 2.0);

  tfpp::NonlinearitySpec quad{tfpp::SourceKind::bbm_burgers, {0.0, 0.0}, 3.0, 0.5};
  const double budget = std::pow(2.0, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    tfpp::SpectralField u = random_field(basis, rng, 1.0 + trial % 4);
    const double lhs = tfpp::hilbert_norm(tfpp::eval_H(quad, u), -1.0);
    const double h1 = tfpp::hilbert_norm(u, 1.0);
    const double l4 = tfpp::lebesgue_norm(u, 4.0);
    // sharp intermediate link: dual norm <= sqrt(d) * ||u||_{L4}^2
    CHECK(lhs <= std::sqrt(2.0) * l4 * l4 * (1.0 + 1e-9));
    CHECK(lhs <= budget * c_omega * h1 * h1 * (1.0 + 1e-9));
  }

  // full source with transport: local Lipschitz ratios stay bounded
  tfpp::NonlinearitySpec spec{tfpp::SourceKind::bbm_burgers, {1.0, 1.0}, 3.0, 0.5};
  double sup = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    tfpp::SpectralField u = random_field(basis, rng, 2.0);
    tfpp::SpectralField v = random_field(basis, rng);
    const double ratio = tfpp::lipschitz_ratio(spec, u, v);
    CHECK(std::isfinite(ratio));
    sup = std::max(sup, ratio);
  }
  CHECK(sup > 0.0);
  CHECK(sup < 1e3);
}

TEST_CASE("exponential source: amplitude cap and moment bound") {
  tfpp::SpectralBasis basis = tfpp::build_basis(tfpp::rectangle(kPi, kPi), 8);
  tfpp::NonlinearitySpec spec{tfpp::SourceKind::exponential, {0.0, 0.0}, 3.0, 0.5};

  tfpp::SpectralField hot = tfpp::zero_field(basis);
  hot.coeffs[0] = 50.0;  // peak amplitude 50*(2/pi) > 25
  CHECK_THROWS_AS(tfpp::eval_H(spec, hot), tfpp::OverflowSignal);
  hot.coeffs[0] = 35.0;  // peak 22.3, still inside the cap
  CHECK_NOTHROW(tfpp::eval_H(spec, hot));

  // moment bound below the Orlicz threshold 6^{-1/2}
  std::mt19937_64 rng(41u);
  for (double target : {0.2, 0.35}) {
    for (int trial = 0; trial < 15; ++trial) {
      tfpp::SpectralField u = scaled_to_orlicz(basis, rng, target);
      const double m = tfpp::orlicz_norm(u).value;
      REQUIRE(m < std::sqrt(1.0 / 6.0));
      std::vector<double> g = tfpp::to_physical(u);
      for (double& v : g) v = std::expm1(v * v);
      const double lhs = std::pow(tfpp::lebesgue_norm_samples(basis, g, 6.0), 6.0);
      CHECK(lhs <= 6.0 * m * m * (1.0 + 1e-6));
    }
  }

  // contraction ratios are finite in the small-norm regime
  CHECK(tfpp::exponential_growth_factor(0.0) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-15));
  double sup = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    tfpp::SpectralField u = scaled_to_orlicz(basis, rng, 0.3);
    tfpp::SpectralField v = scaled_to_orlicz(basis, rng, 0.15);
    const double ratio = tfpp::lipschitz_ratio(spec, u, v);
    CHECK(std::isfinite(ratio));
    sup = std::max(sup, ratio);
  }
  CHECK(sup > 0.0);
  CHECK(sup < 1e4);
}

TEST_CASE("hypothesis validation rejects out-of-range configurations") {
  using tfpp::SourceKind;
  tfpp::NonlinearitySpec spec;

  spec.kind = SourceKind::polynomial;
  spec.p = 2.0;
  CHECK_THROWS_WITH(tfpp::validate_source(spec, 2),
                    Catch::Matchers::ContainsSubstring("p > 2"));
  spec.p = 2.2;  // window empty on the line
  CHECK_THROWS_WITH(tfpp::validate_source(spec, 1),
                    Catch::Matchers::ContainsSubstring("window is empty"));
  spec.p = 3.0;
  spec.nu = 0.1;  // inside (0, 1/6)
  CHECK_NOTHROW(tfpp::validate_source(spec, 1));
  spec.nu = 0.2;  // above the 1/6 ceiling
  CHECK_THROWS_AS(tfpp::validate_source(spec, 1), std::invalid_argument);
  spec.nu = 0.5;  // inside (0, 2/3) in the plane
  CHECK_NOTHROW(tfpp::validate_source(spec, 2));
  CHECK(tfpp::polynomial_nu_ceiling(3.0, 2) == Catch::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(tfpp::polynomial_nu_ceiling(3.0, 1) == Catch::Approx(1.0 / 6.0).epsilon(1e-15));

  // time-fractional gates for the global theorems
  CHECK_NOTHROW(tfpp::validate_source(spec, 2, 0.6));
  CHECK_THROWS_WITH(tfpp::validate_source(spec, 2, 0.7),
                    Catch::Matchers::ContainsSubstring("p/(p-1)"));

  spec.kind = SourceKind::exponential;
  CHECK_NOTHROW(tfpp::validate_source(spec, 2, 0.5));
  CHECK_THROWS_WITH(tfpp::validate_source(spec, 2, 2.0 / 3.0),
                    Catch::Matchers::ContainsSubstring("(0, 2/3)"));
  CHECK_THROWS_WITH(tfpp::validate_source(spec, 1),
                    Catch::Matchers::ContainsSubstring("two-dimensional"));

  spec.kind = SourceKind::bbm_burgers;
  CHECK_THROWS_WITH(tfpp::validate_source(spec, 1),
                    Catch::Matchers::ContainsSubstring("two-dimensional"));

  spec.kind = SourceKind::advection;
  spec.eta = {1.0, 0.5};
  CHECK_THROWS_WITH(tfpp::validate_source(spec, 1),
                    Catch::Matchers::ContainsSubstring("outside the domain"));
  CHECK_NOTHROW(tfpp::validate_source(spec, 2));
}

TEST_CASE("identical inputs make the ratio undefined") {
  tfpp::SpectralBasis basis = tfpp::build_basis(tfpp::interval(kPi), 6);
  tfpp::NonlinearitySpec spec{tfpp::SourceKind::advection, {1.0, 0.0}, 3.0, 0.5};
  std::mt19937_64 rng(5u);
  tfpp::SpectralField u = random_field(basis, rng);
  CHECK_THROWS_AS(tfpp::lipschitz_ratio(spec, u, u), std::invalid_argument);
}
