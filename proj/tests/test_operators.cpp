// Differential operators against closed-form oracles. The reference values
// below are derived by hand from the orthonormal-frame formulas on the round
// sphere before any code is consulted:
//   grad f      = (f_rho, f_phi / sin rho)
//   Hess f (11) = f_rho_rho
//   Hess f (12) = (f_rho_phi - cot(rho) f_phi) / sin rho
//   Hess f (22) = f_phi_phi / sin^2(rho) + cot(rho) f_rho
// For w = sin^2(rho) cos(2 phi) these evaluate to
//   Hess(11) = 2 cos(2 rho) cos(2 phi)
//   Hess(12) = -2 cos(rho) sin(2 phi)
//   Hess(22) = (2 cos^2(rho) - 4) cos(2 phi)
// and at the pole, in the frame rotated by phi_j, to (2, -2, -2) cos/sin
// multiples of 2 phi_j. The model profile l = 1 - cos(theta) cos(rho) has
// grad l = cos(theta) sin(rho) e_rho and Hess l + l g = g.
#include <cmath>
#include <numbers>

#include "capillary/domain.hpp"
#include "capillary/operators.hpp"
#include "doctest.h"

using namespace capillary;

namespace {
constexpr double kPi = std::numbers::pi;

ScalarField quadrupole(DomainPtr d) {
  return sample(d, [](double rho, double phi) {
    const double s = std::sin(rho);
    return s * s * std::cos(2.0 * phi);
  });
}

// Smooth on the sphere (a polynomial in the ambient coordinates restricted
// to it) and neither even nor axisymmetric.
ScalarField generic_smooth(DomainPtr d) {
  return sample(d, [](double rho, double phi) {
    const double x = std::sin(rho) * std::cos(phi);
    const double y = std::sin(rho) * std::sin(phi);
    const double z = std::cos(rho);
    return std::exp(0.4 * x) + 0.3 * y + 0.2 * x * y * z;
  });
}
} // namespace

TEST_SUITE("operators") {

TEST_CASE("gradient of the model profile is radial with the exact law") {
  const double theta = kPi / 3.0;
  double err[2];
  int lvl = 0;
  for (int nr : {33, 65}) {
    auto d = make_domain(theta, 2, nr, 2 * (nr - 1));
    GradientField g = gradient(model_support(d));
    double e = 0.0;
    for (int i = 0; i < d->n_rho(); ++i)
      for (int j = 0; j < d->n_phi(); ++j) {
        const int k = d->index(i, j);
        CHECK(g.angular[k] == 0.0); // axisymmetric: azimuthal differences vanish bitwise
        e = std::max(e, std::abs(g.radial[k] -
                                 std::cos(theta) * d->metric.sin_rho[i]));
      }
    err[lvl++] = e;
  }
  CHECK(err[0] < 1e-3);
  CHECK(err[0] / err[1] > 3.4); // second order
  // Nodal spot value: rho = pi/6 sits on row 16 of the 33-row grid.
  auto d = make_domain(theta, 2, 33, 64);
  GradientField g = gradient(model_support(d));
  CHECK(g.radial[d->index(16, 5)] == doctest::Approx(0.25).epsilon(1e-4));
}

TEST_CASE("gradient at the pole vanishes bitwise for even fields") {
  auto d = make_domain(1.0, 2, 17, 32);
  ScalarField f = symmetrize(sample(d, [](double rho, double phi) {
    return std::cos(rho) + std::sin(rho) * std::sin(rho) * std::cos(2.0 * phi) +
           0.2 * std::sin(rho) * std::cos(phi);
  }));
  REQUIRE(evenness_defect(f) == 0.0);
  GradientField g = gradient(f);
  for (int j = 0; j < d->n_phi(); ++j) {
    CHECK(g.radial[d->index(0, j)] == 0.0);
    CHECK(g.angular[d->index(0, j)] == 0.0);
  }
}

TEST_CASE("gradient at the pole recovers the direction of a linear field") {
  // f = sin(rho) cos(phi) is the ambient coordinate x; its pole gradient is
  // the unit vector along phi = 0, so the radial frame component is cos(phi_j).
  auto d = make_domain(1.2, 2, 33, 64);
  auto f = sample(d, [](double rho, double phi) { return std::sin(rho) * std::cos(phi); });
  GradientField g = gradient(f);
  for (int j = 0; j < d->n_phi(); ++j)
    CHECK(g.radial[d->index(0, j)] ==
          doctest::Approx(d->metric.cos_phi[j]).scale(1.0).epsilon(1e-3));
}

TEST_CASE("covariant second derivatives match the quadrupole closed form") {
  const double theta = 1.1;
  double err[3];
  int lvl = 0;
  for (int nr : {33, 65, 129}) {
    auto d = make_domain(theta, 2, nr, 2 * (nr - 1));
    SymTensorField h = hessian(quadrupole(d));
    double e = 0.0;
    for (int i = 1; i < d->n_rho(); ++i)
      for (int j = 0; j < d->n_phi(); ++j) {
        const int k = d->index(i, j);
        const double rho = d->grid.rho[i];
        const double c2p = d->metric.cos_2phi[j], s2p = d->metric.sin_2phi[j];
        e = std::max(e, std::abs(h.rr[k] - 2.0 * std::cos(2.0 * rho) * c2p));
        e = std::max(e, std::abs(h.rt[k] + 2.0 * std::cos(rho) * s2p));
        const double cr = std::cos(rho);
        e = std::max(e, std::abs(h.tt[k] - (2.0 * cr * cr - 4.0) * c2p));
      }
    err[lvl++] = e;
  }
  CHECK(err[2] < 5e-3);
  CHECK(err[0] / err[1] > 3.0);
  CHECK(err[1] / err[2] > 3.0);
}

TEST_CASE("pole row of the quadrupole resolves in the rotated frame") {
  auto d = make_domain(1.1, 2, 65, 128);
  SymTensorField h = hessian(quadrupole(d));
  for (int j = 0; j < d->n_phi(); ++j) {
    const int k = d->index(0, j);
    CHECK(h.rr[k] == doctest::Approx(2.0 * d->metric.cos_2phi[j]).scale(1.0).epsilon(2e-3));
    CHECK(h.rt[k] == doctest::Approx(-2.0 * d->metric.sin_2phi[j]).scale(1.0).epsilon(2e-3));
    CHECK(h.tt[k] == doctest::Approx(-2.0 * d->metric.cos_2phi[j]).scale(1.0).epsilon(2e-3));
  }
}

TEST_CASE("model profile solves the tensor equation with the round metric") {
  auto d = make_domain(kPi / 3.0, 2, 33, 64);
  SymTensorField tau = spherical_hessian(model_support(d));
  double e_diag = 0.0;
  double e_pole_rt = 0.0;
  for (int i = 0; i < d->n_rho(); ++i)
    for (int j = 0; j < d->n_phi(); ++j) {
      const int k = d->index(i, j);
      e_diag = std::max(e_diag, std::abs(tau.rr[k] - 1.0));
      e_diag = std::max(e_diag, std::abs(tau.tt[k] - 1.0));
      // Away from the pole the mixed term is a phi difference of
      // ring-constant data, hence exactly zero; the pole row projects onto
      // the 2 phi harmonics through a quadrature sum and keeps roundoff.
      if (i > 0)
        CHECK(tau.rt[k] == 0.0);
      else
        e_pole_rt = std::max(e_pole_rt, std::abs(tau.rt[k]));
    }
  CHECK(e_diag < 2e-3);
  CHECK(e_pole_rt < 1e-15);
}

TEST_CASE("tensor eigenvalues agree with the 2x2 closed form") {
  auto d = make_domain(1.0, 2, 17, 32);
  SymTensorField t = spherical_hessian(model_support(d));
  t.rr[d->index(3, 4)] = 2.0;
  t.rt[d->index(3, 4)] = 1.0;
  t.tt[d->index(3, 4)] = 3.0;
  double eig[2];
  tensor_eigenvalues(t, 3, 4, eig);
  const double root = std::sqrt(1.25);
  CHECK(eig[0] == doctest::Approx(2.5 - root).epsilon(1e-14));
  CHECK(eig[1] == doctest::Approx(2.5 + root).epsilon(1e-14));
  CHECK(eig[0] <= eig[1]);
}

TEST_CASE("conormal derivative of the model profile matches the boundary law") {
  // l'(theta) = cos(theta) sin(theta): one half at theta = pi/4.
  double err[2];
  int lvl = 0;
  for (int nr : {33, 65}) {
    auto d = make_domain(kPi / 4.0, 2, nr, 2 * (nr - 1));
    BoundaryTrace tr = conormal_derivative(model_support(d));
    REQUIRE(static_cast<int>(tr.value.size()) == d->n_phi());
    REQUIRE(static_cast<int>(tr.conormal.size()) == d->n_phi());
    double e = 0.0;
    for (int j = 0; j < d->n_phi(); ++j) {
      CHECK(tr.value[j] == model_support(d).at(d->n_rho() - 1, j));
      e = std::max(e, std::abs(tr.conormal[j] - 0.5));
    }
    err[lvl++] = e;
  }
  CHECK(err[0] < 1e-3);
  CHECK(err[0] / err[1] > 3.4);
}

TEST_CASE("the model profile satisfies the contact-angle condition") {
  for (double theta : {kPi / 6.0, kPi / 4.0, kPi / 3.0}) {
    double err[2];
    int lvl = 0;
    for (int nr : {33, 65}) {
      auto d = make_domain(theta, 2, nr, 64);
      err[lvl++] = robin_residual(model_support(d)).max_abs_conormal();
    }
    CHECK(err[0] < 1e-3);
    CHECK(err[0] / err[1] > 3.3);
  }
}

TEST_CASE("commutation defect of a smooth second-derivative tensor decays") {
  // Hess f + f g is a Codazzi tensor for any smooth f; the discrete defect
  // must shrink at first order or better under refinement at fixed distance
  // from the pole. The polar frame loses accuracy like 1/rho^2 toward the
  // coordinate singularity, so the defect is measured on a fixed annulus.
  const double theta = 1.0;
  double err[3];
  int lvl = 0;
  for (int nr : {33, 65, 129}) {
    auto d = make_domain(theta, 2, nr, 2 * (nr - 1));
    ScalarField c = codazzi_defect(generic_smooth(d));
    double ann = 0.0;
    for (int i = 0; i < d->n_rho(); ++i) {
      if (d->grid.rho[i] < 0.25) continue;
      for (int j = 0; j < d->n_phi(); ++j)
        ann = std::max(ann, std::abs(c.at(i, j)));
    }
    err[lvl++] = ann;
  }
  CHECK(err[0] / err[1] > 2.8);
  CHECK(err[1] / err[2] > 2.0);
  CHECK(err[2] < 5e-3);
}

} // TEST_SUITE
