#include "capillary/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "capillary/errors.hpp"

namespace capillary {

ScalarField::ScalarField(DomainPtr domain, double fill)
    : domain_(std::move(domain)), values_(domain_->node_count(), fill) {}

void ScalarField::set_pole(double v) {
  std::fill(values_.begin(), values_.begin() + domain_->n_phi(), v);
}

double ScalarField::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double ScalarField::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

DomainPtr make_domain(double theta, int n, int n_rho, int n_phi) {
  if (!(theta > 0.0) || !(theta < std::numbers::pi / 2))
    throw Error("theta must lie in (0, pi/2)");
  if (n != 2)
    throw Error("only n = 2 is supported");
  if (n_rho < 8)
    throw Error("n_rho must be at least 8");
  if (n_phi < 8)
    throw Error("n_phi must be at least 8");
  if (n_phi % 2 != 0)
    throw Error("n_phi must be even (reflection must be a node permutation)");

  auto dom = std::make_shared<CapDomain>();
  dom->theta = theta;
  dom->n = n;

  PolarGrid& g = dom->grid;
  g.n_rho = n_rho;
  g.n_phi = n_phi;
  g.h_rho = theta / (n_rho - 1);
  g.h_phi = 2.0 * std::numbers::pi / n_phi;
  g.rho.resize(n_rho);
  for (int i = 0; i < n_rho; ++i) g.rho[i] = i * g.h_rho;
  g.rho.back() = theta; // pin the boundary row to theta exactly
  g.phi.resize(n_phi);
  for (int j = 0; j < n_phi; ++j) g.phi[j] = j * g.h_phi;

  MetricData& m = dom->metric;
  m.sin_rho.resize(n_rho);
  m.cos_rho.resize(n_rho);
  m.cot_rho.assign(n_rho, 0.0);
  for (int i = 0; i < n_rho; ++i) {
    m.sin_rho[i] = std::sin(g.rho[i]);
    m.cos_rho[i] = std::cos(g.rho[i]);
    if (i > 0) m.cot_rho[i] = m.cos_rho[i] / m.sin_rho[i];
  }
  m.sin_phi.resize(n_phi);
  m.cos_phi.resize(n_phi);
  m.sin_2phi.resize(n_phi);
  m.cos_2phi.resize(n_phi);
  for (int j = 0; j < n_phi; ++j) {
    m.sin_phi[j] = std::sin(g.phi[j]);
    m.cos_phi[j] = std::cos(g.phi[j]);
  }
  // Second-harmonic tables are tiled with period n_phi / 2: the harmonics
  // have exact period pi, and tiling makes antipodal columns carry bitwise
  // equal values, so reflection symmetry survives in floating point.
  for (int j = 0; j < n_phi / 2; ++j) {
    m.sin_2phi[j] = std::sin(2.0 * g.phi[j]);
    m.cos_2phi[j] = std::cos(2.0 * g.phi[j]);
    m.sin_2phi[j + n_phi / 2] = m.sin_2phi[j];
    m.cos_2phi[j + n_phi / 2] = m.cos_2phi[j];
  }

  // Cell-exact weights: each row owns the radial interval within h_rho/2 of
  // it (clipped to [0, theta]) and the weight is the integral of sin(rho)
  // over that interval. Summing weights over all nodes telescopes to the
  // closed-form cap area, so constants integrate exactly.
  const double half = 0.5 * g.h_rho;
  m.ring_weight.assign(n_rho, 0.0);
  m.pole_weight = 2.0 * std::numbers::pi * (1.0 - std::cos(half));
  for (int i = 1; i < n_rho; ++i) {
    double lo = g.rho[i] - half;
    double hi = (i == n_rho - 1) ? theta : g.rho[i] + half;
    m.ring_weight[i] = g.h_phi * (std::cos(lo) - std::cos(hi));
  }
  return dom;
}

ScalarField model_support(DomainPtr domain) {
  ScalarField f(domain);
  const CapDomain& d = *domain;
  const double ct = std::cos(d.theta);
  for (int i = 0; i < d.n_rho(); ++i) {
    double v = 1.0 - ct * d.metric.cos_rho[i];
    for (int j = 0; j < d.n_phi(); ++j) f.at(i, j) = v;
  }
  return f;
}

double model_support_radial_derivative(const CapDomain& domain, double rho) {
  return std::cos(domain.theta) * std::sin(rho);
}

ScalarField sample(DomainPtr domain, const std::function<double(double, double)>& f) {
  ScalarField out(domain);
  const CapDomain& d = *domain;
  const double pole = f(0.0, 0.0);
  for (int j = 0; j < d.n_phi(); ++j) out.at(0, j) = pole;
  for (int i = 1; i < d.n_rho(); ++i)
    for (int j = 0; j < d.n_phi(); ++j)
      out.at(i, j) = f(d.grid.rho[i], d.grid.phi[j]);
  return out;
}

ScalarField reflect(const ScalarField& f) {
  const CapDomain& d = f.domain();
  ScalarField out(f.domain_ptr());
  for (int i = 0; i < d.n_rho(); ++i)
    for (int j = 0; j < d.n_phi(); ++j)
      out.at(i, j) = f.at(i, d.opposite(j));
  return out;
}

ScalarField symmetrize(const ScalarField& f) {
  const CapDomain& d = f.domain();
  ScalarField out(f.domain_ptr());
  // Both members of an antipodal pair receive the identical rounded value.
  for (int i = 0; i < d.n_rho(); ++i)
    for (int j = 0; j < d.n_phi() / 2; ++j) {
      int jo = d.opposite(j);
      double v = 0.5 * (f.at(i, j) + f.at(i, jo));
      out.at(i, j) = v;
      out.at(i, jo) = v;
    }
  return out;
}

double integrate(const ScalarField& f) {
  const CapDomain& d = f.domain();
  const int half = d.n_phi() / 2;
  double total = d.metric.pole_weight * f.pole();
  for (int i = 1; i < d.n_rho(); ++i) {
    // Antipodal pair sums first: reflection permutes within pairs, so the
    // ring sum (and the integral) is invariant bitwise.
    double ring = 0.0;
    for (int j = 0; j < half; ++j) ring += f.at(i, j) + f.at(i, j + half);
    total += d.metric.ring_weight[i] * ring;
  }
  return total;
}

double domain_area(const CapDomain& domain) {
  return 2.0 * std::numbers::pi * (1.0 - std::cos(domain.theta));
}

double mean(const ScalarField& f) { return integrate(f) / domain_area(f.domain()); }

double evenness_defect(const ScalarField& f) {
  const CapDomain& d = f.domain();
  double m = 0.0;
  for (int i = 0; i < d.n_rho(); ++i)
    for (int j = 0; j < d.n_phi(); ++j)
      m = std::max(m, std::abs(f.at(i, j) - f.at(i, d.opposite(j))));
  return m;
}

} // namespace capillary
