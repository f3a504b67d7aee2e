#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "tfpp/convolution.hpp"
#include "tfpp/quadrature.hpp"
#include "tfpp/special_functions.hpp"
#include "tfpp/time_grid.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

double rel_gap(double a, double b) {
  return std::fabs(a - b) / std::max(1e-300, std::fabs(b));
}

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials of degree 2n-1") {
  for (int n : {1, 2, 3, 5, 8, 13}) {
    tfpp::QuadratureRule rule = tfpp::gauss_legendre(n, 0.0, 1.0);
    REQUIRE(rule.size() == n);

    double wsum = tfpp::pairwise_sum(rule.weights);
    CHECK(rel_gap(wsum, 1.0) < 1e-14);

    for (int i = 0; i < n; ++i) {
      CHECK(rule.nodes[i] > 0.0);
      CHECK(rule.nodes[i] < 1.0);
      if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
      CHECK(rule.weights[i] > 0.0);
    }

    // highest degree the rule must reproduce: int_0^1 x^{2n-1} dx
    const int d = 2 * n - 1;
    std::vector<double> samples(n);
    for (int i = 0; i < n; ++i) samples[i] = std::pow(rule.nodes[i], d);
    CHECK(rel_gap(rule.integrate(samples), 1.0 / (d + 1)) < 1e-13);
  }
}

TEST_CASE("Gauss-Legendre handles oscillatory integrands on (0, pi)") {
  tfpp::QuadratureRule rule = tfpp::gauss_legendre(48, 0.0, kPi);
  std::vector<double> sq(rule.size());
  for (int i = 0; i < rule.size(); ++i) sq[i] = std::sin(7.0 * rule.nodes[i]) * std::sin(7.0 * rule.nodes[i]);
  CHECK(rel_gap(rule.integrate(sq), kPi / 2.0) < 1e-13);

  // orthogonality of distinct sine modes
  std::vector<double> cross(rule.size());
  for (int i = 0; i < rule.size(); ++i) cross[i] = std::sin(9.0 * rule.nodes[i]) * std::sin(4.0 * rule.nodes[i]);
  CHECK(std::fabs(rule.integrate(cross)) < 1e-13);

  CHECK_THROWS_AS(tfpp::gauss_legendre(0), std::invalid_argument);
  CHECK_THROWS_AS(tfpp::gauss_legendre(4, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("pairwise_sum matches extended-precision accumulation") {
  std::mt19937_64 rng(20260819u);
  std::vector<double> data(100000);
  long double exact = 0.0L;
  for (double& x : data) {
    x = (double(rng() >> 11) * 0x1p-53 - 0.5) * 1e6;
    exact += static_cast<long double>(x);
  }
  const double got = tfpp::pairwise_sum(data);
  CHECK(std::fabs(got - double(exact)) <= std::fabs(double(exact)) * 1e-12 + 1e-6);
  // determinism: same bracketing every call
  CHECK(got == tfpp::pairwise_sum(data));
}

TEST_CASE("graded time meshes") {
  tfpp::TimeGrid uniform = tfpp::build_time_grid(1.0, 4, 1.0);
  REQUIRE(uniform.nodes.size() == 5);
  const double expect_uniform[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (int j = 0; j <= 4; ++j) CHECK(uniform.nodes[j] == Catch::Approx(expect_uniform[j]).margin(1e-15));

  tfpp::TimeGrid graded = tfpp::build_time_grid(1.0, 4, 2.0);
  const double expect_graded[5] = {0.0, 1.0 / 16, 0.25, 9.0 / 16, 1.0};
  for (int j = 0; j <= 4; ++j) CHECK(graded.nodes[j] == Catch::Approx(expect_graded[j]).margin(1e-15));

  // right endpoint is exact even for awkward horizons and gradings
  tfpp::TimeGrid odd = tfpp::build_time_grid(2.7, 37, 1.8);
  CHECK(odd.nodes.front() == 0.0);
  CHECK(odd.nodes.back() == 2.7);
  for (std::size_t j = 1; j < odd.nodes.size(); ++j) CHECK(odd.nodes[j] > odd.nodes[j - 1]);

  CHECK_THROWS_AS(tfpp::build_time_grid(0.0, 8, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(tfpp::build_time_grid(1.0, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(tfpp::build_time_grid(1.0, 8, 0.5), std::invalid_argument);

  CHECK_THROWS_AS(tfpp::make_time_grid_from_nodes({0.0, 0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(tfpp::make_time_grid_from_nodes({0.1, 0.5, 0.9}), std::invalid_argument);
}

TEST_CASE("product integration reproduces the calibration identities") {
  for (double alpha : {0.3, 0.5, 0.8, 1.0}) {
    for (double r : {1.0, 2.0}) {
      tfpp::TimeGrid grid = tfpp::build_time_grid(1.7, 64, r);
      std::vector<double> ones(grid.nodes.size(), 1.0);
      std::vector<double> ramp = grid.nodes;

      for (int n : {1, 7, 32, 64}) {
        const double t = grid.nodes[n];
        // g == 1: the panel moments telescope to t^alpha / alpha
        const double got0 = tfpp::singular_integral(grid.nodes, n, alpha, ones);
        CHECK(rel_gap(got0, std::pow(t, alpha) / alpha) < 1e-12);

        // g == tau: exact for linear data, equals t^{alpha+1} B(alpha, 2)
        const double got1 = tfpp::singular_integral(grid.nodes, n, alpha, ramp);
        const double want1 = std::pow(t, alpha + 1.0) * tfpp::beta(alpha, 2.0);
        CHECK(rel_gap(got1, want1) < 1e-12);
      }
    }
  }
}

TEST_CASE("product integration is exact for general linear data") {
  tfpp::TimeGrid grid = tfpp::build_time_grid(1.0, 48, 2.0);
  const double alpha = 0.4;
  std::vector<double> g(grid.nodes.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = 3.0 - 2.0 * grid.nodes[j];
  const int n = 48;
  const double t = grid.nodes[n];
  const double want = 3.0 * std::pow(t, alpha) / alpha -
                      2.0 * std::pow(t, alpha + 1.0) * tfpp::beta(alpha, 2.0);
  CHECK(rel_gap(tfpp::singular_integral(grid.nodes, n, alpha, g), want) < 1e-12);

  // weights are nonnegative: the interpolation functional is positive
  std::vector<double> w = tfpp::product_integration_weights(grid.nodes, n, alpha);
  for (double wj : w) CHECK(wj >= 0.0);

  CHECK_THROWS_AS(tfpp::product_integration_weights(grid.nodes, 0, alpha), std::invalid_argument);
  CHECK_THROWS_AS(tfpp::product_integration_weights(grid.nodes, 5, 1.5), std::invalid_argument);
}

TEST_CASE("Q functional reduces to the Beta integral at sigma = 0") {
  // Q(t, h, 0) = t^alpha B(alpha, 1 - h) via tau = t s
  struct Case { double h, alpha; };
  for (Case c : {Case{0.0, 0.5}, Case{0.25, 0.5}, Case{0.5, 0.5}, Case{0.5, 0.3}, Case{0.7, 0.8}}) {
    for (double t : {0.3, 1.0, 3.0}) {
      const double got = tfpp::q_kernel(t, c.h, 0.0, c.alpha, 1024);
      const double want = std::pow(t, c.alpha) * tfpp::beta(c.alpha, 1.0 - c.h);
      CHECK(rel_gap(got, want) < 5e-5);
    }
  }
  // h = 0 also collapses to the plain kernel integral t^alpha / alpha
  CHECK(rel_gap(tfpp::q_kernel(2.0, 0.0, 0.0, 0.6, 1024), std::pow(2.0, 0.6) / 0.6) < 5e-5);
}

TEST_CASE("Q functional decreases in sigma and vanishes in the limit") {
  const double alpha = 0.5;
  const double h = alpha;
  std::vector<double> tgrid;
  for (int i = 0; i < 40; ++i) tgrid.push_back(1e-3 * std::pow(1e5, i / 39.0));

  double prev = 0.0;
  double first = 0.0;
  for (int k = 0; k <= 6; ++k) {
    const double sigma = std::pow(2.0, 2 * k);  // 1, 4, 16, ...
    double sup = 0.0;
    for (double t : tgrid) sup = std::max(sup, tfpp::q_kernel(t, h, sigma, alpha));
    if (k == 0) {
      first = sup;
    } else {
      CHECK(sup < prev);  // doubling sigma strictly decreases the supremum
    }
    prev = sup;
  }
  // sup_t Q scales like sigma^{-alpha}; by sigma = 4096 the drop is ~64x
  CHECK(prev < 0.05 * first);

  CHECK_THROWS_AS(tfpp::q_kernel(0.0, 0.5, 1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(tfpp::q_kernel(1.0, 1.0, 1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(tfpp::q_kernel(1.0, -0.1, 1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(tfpp::q_kernel(1.0, 0.5, -1.0, 0.5), std::domain_error);
}

TEST_CASE("Q functional is mesh-converged at the default resolution") {
  for (double sigma : {0.0, 1.0, 64.0}) {
    for (double t : {0.05, 1.0, 20.0}) {
      const double coarse = tfpp::q_kernel(t, 0.5, sigma, 0.5, 256);
      const double fine = tfpp::q_kernel(t, 0.5, sigma, 0.5, 1024);
      CHECK(rel_gap(coarse, fine) < 2e-3);
    }
  }
}
