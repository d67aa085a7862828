// Grid, metric tables, quadrature, and the reflection machinery. Oracles are
// closed-form: cap area 2*pi*(1-cos(theta)), the model profile
// 1 - cos(theta)*cos(rho), and hand-integrable smooth test functions.
#include <cmath>
#include <numbers>

#include "capillary/domain.hpp"
#include "capillary/errors.hpp"
#include "doctest.h"

using namespace capillary;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("domain") {

TEST_CASE("construction rejects out-of-range parameters") {
  CHECK_THROWS_AS(make_domain(0.0, 2, 33, 64), Error);
  CHECK_THROWS_AS(make_domain(-0.3, 2, 33, 64), Error);
  CHECK_THROWS_AS(make_domain(kPi / 2.0, 2, 33, 64), Error);
  CHECK_THROWS_AS(make_domain(2.0, 2, 33, 64), Error);
  CHECK_THROWS_AS(make_domain(1.0, 3, 33, 64), Error);
  CHECK_THROWS_AS(make_domain(1.0, 2, 7, 64), Error);
  CHECK_THROWS_AS(make_domain(1.0, 2, 33, 6), Error);
  CHECK_THROWS_AS(make_domain(1.0, 2, 33, 63), Error); // odd azimuth count
}

TEST_CASE("grid rows are pinned to the exact endpoints") {
  const double theta = 0.9;
  auto d = make_domain(theta, 2, 33, 64);
  CHECK(d->grid.rho.front() == 0.0);
  CHECK(d->grid.rho.back() == theta);
  CHECK(d->grid.h_rho == doctest::Approx(theta / 32.0).epsilon(1e-15));
  CHECK(d->grid.h_phi == doctest::Approx(2.0 * kPi / 64.0).epsilon(1e-15));
  CHECK(d->n_rho() == 33);
  CHECK(d->n_phi() == 64);
  CHECK(d->node_count() == 33 * 64);
}

TEST_CASE("index arithmetic wraps the azimuth") {
  auto d = make_domain(1.0, 2, 33, 64);
  CHECK(d->wrap(-1) == 63);
  CHECK(d->wrap(64) == 0);
  CHECK(d->wrap(65) == 1);
  CHECK(d->opposite(0) == 32);
  CHECK(d->opposite(40) == 8);
  CHECK(d->index(2, 3) == 2 * 64 + 3);
}

TEST_CASE("second-harmonic tables are tiled bitwise across the reflection") {
  auto d = make_domain(1.1, 2, 17, 32);
  for (int j = 0; j < d->n_phi(); ++j) {
    const int o = d->opposite(j);
    CHECK(d->metric.cos_2phi[o] == d->metric.cos_2phi[j]);
    CHECK(d->metric.sin_2phi[o] == d->metric.sin_2phi[j]);
    CHECK(d->metric.cos_2phi[j] ==
          doctest::Approx(std::cos(2.0 * d->grid.phi[j])).epsilon(1e-14));
    CHECK(d->metric.sin_2phi[j] ==
          doctest::Approx(std::sin(2.0 * d->grid.phi[j])).scale(1.0).epsilon(1e-14));
  }
}

TEST_CASE("quadrature integrates constants to the exact cap area") {
  for (double theta : {kPi / 6.0, kPi / 4.0, kPi / 3.0, 1.4}) {
    auto d = make_domain(theta, 2, 33, 64);
    const double exact = 2.0 * kPi * (1.0 - std::cos(theta));
    CHECK(domain_area(*d) == doctest::Approx(exact).epsilon(1e-13));
    ScalarField one(d, 1.0);
    CHECK(integrate(one) == doctest::Approx(exact).epsilon(1e-13));
    CHECK(mean(one) == doctest::Approx(1.0).epsilon(1e-14));
  }
  // theta = pi/3 gives area exactly pi.
  auto d = make_domain(kPi / 3.0, 2, 33, 64);
  CHECK(domain_area(*d) == doctest::Approx(kPi).epsilon(1e-13));
}

TEST_CASE("quadrature of a smooth radial function converges at second order") {
  // integral of cos(rho) over the cap = pi * sin^2(theta).
  const double theta = kPi / 3.0;
  const double exact = kPi * std::sin(theta) * std::sin(theta);
  double err[2];
  int n = 0;
  for (int nr : {33, 65}) {
    auto d = make_domain(theta, 2, nr, 2 * (nr - 1));
    auto f = sample(d, [](double rho, double) { return std::cos(rho); });
    err[n++] = std::abs(integrate(f) - exact);
  }
  CHECK(err[0] < 2e-3);
  CHECK(err[0] / err[1] > 3.4);
}

TEST_CASE("model profile matches its closed form") {
  const double theta = kPi / 3.0;
  auto d = make_domain(theta, 2, 33, 64);
  ScalarField ell = model_support(d);
  const double ct = std::cos(theta);
  for (int i = 0; i < d->n_rho(); ++i)
    for (int j = 0; j < d->n_phi(); ++j)
      CHECK(ell.at(i, j) ==
            doctest::Approx(1.0 - ct * std::cos(d->grid.rho[i])).epsilon(1e-15));
  CHECK(ell.pole() == doctest::Approx(1.0 - ct).epsilon(1e-15));
  const double st = std::sin(theta);
  CHECK(ell.at(32, 11) == doctest::Approx(st * st).epsilon(1e-14));
  CHECK(ell.min() == ell.pole());
  CHECK(ell.max() == doctest::Approx(st * st).epsilon(1e-14));
  // Radial derivative oracle: cos(theta) sin(rho).
  for (double rho : {0.0, 0.3, theta})
    CHECK(model_support_radial_derivative(*d, rho) ==
          doctest::Approx(ct * std::sin(rho)).scale(1.0).epsilon(1e-15));
}

TEST_CASE("sampling broadcasts a single pole value") {
  auto d = make_domain(1.0, 2, 17, 32);
  auto f = sample(d, [](double rho, double phi) { return std::sin(rho) * std::cos(phi); });
  for (int j = 0; j < d->n_phi(); ++j) CHECK(f.at(0, j) == f.pole());
  CHECK(f.pole() == 0.0);
  CHECK(f.at(3, 5) == std::sin(d->grid.rho[3]) * std::cos(d->grid.phi[5]));
}

TEST_CASE("reflection is the half-turn column permutation and an involution") {
  auto d = make_domain(1.0, 2, 17, 32);
  auto f = sample(d, [](double rho, double phi) {
    return std::exp(std::sin(rho) * std::cos(phi)) + 0.3 * std::sin(phi);
  });
  ScalarField r = reflect(f);
  for (int i = 0; i < d->n_rho(); ++i)
    for (int j = 0; j < d->n_phi(); ++j)
      CHECK(r.at(i, j) == f.at(i, d->opposite(j)));
  ScalarField rr = reflect(r);
  for (int k = 0; k < f.size(); ++k) CHECK(rr.values()[k] == f.values()[k]);
}

TEST_CASE("symmetrized fields are exactly even") {
  auto d = make_domain(1.0, 2, 17, 32);
  auto f = sample(d, [](double rho, double phi) {
    return 1.0 + std::sin(rho) * (std::cos(phi) + 0.25 * std::sin(phi));
  });
  CHECK(evenness_defect(f) > 0.0);
  ScalarField g = symmetrize(f);
  CHECK(evenness_defect(g) == 0.0);
  // Idempotent, and a no-op on fields that are already even.
  ScalarField gg = symmetrize(g);
  for (int k = 0; k < g.size(); ++k) CHECK(gg.values()[k] == g.values()[k]);
  CHECK(evenness_defect(model_support(d)) == 0.0);
}

TEST_CASE("integration is invariant under reflection") {
  auto d = make_domain(0.8, 2, 17, 32);
  auto f = sample(d, [](double rho, double phi) {
    return std::cos(rho) + 0.4 * std::sin(rho) * std::sin(phi);
  });
  CHECK(integrate(reflect(f)) == doctest::Approx(integrate(f)).epsilon(1e-15));
  // The odd part integrates to zero by cancellation of paired nodes.
  auto odd = sample(d, [](double rho, double phi) { return std::sin(rho) * std::cos(phi); });
  CHECK(integrate(odd) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("field accessors and pole row stay consistent") {
  auto d = make_domain(1.0, 2, 17, 32);
  ScalarField f(d, 3.5);
  CHECK(f.size() == 17 * 32);
  CHECK(f.min() == 3.5);
  CHECK(f.max() == 3.5);
  f.at(4, 7) = -9.0;
  CHECK(f.min() == -9.0);
  CHECK(f.max_abs() == 9.0);
  f.set_pole(1.25);
  for (int j = 0; j < d->n_phi(); ++j) CHECK(f.at(0, j) == 1.25);
}

} // TEST_SUITE
