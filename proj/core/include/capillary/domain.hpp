#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace capillary {

/// Geodesic polar grid on the closed cap [0, theta] x S^1.
///
/// Row i = 0 is the pole (a single logical node stored as one constant row),
/// row i = n_rho - 1 sits exactly on the boundary circle rho = theta.
/// The azimuthal direction is periodic with even n_phi so that the antipodal
/// map phi -> phi + pi is an exact column permutation.
struct PolarGrid {
  int n_rho = 0;
  int n_phi = 0;
  double h_rho = 0.0; // theta / (n_rho - 1)
  double h_phi = 0.0; // 2 pi / n_phi
  std::vector<double> rho; // rho[0] = 0, rho[n_rho-1] = theta exactly
  std::vector<double> phi; // phi[j] = j * h_phi
};

/// Precomputed round-metric data (g = d rho^2 + sin^2(rho) d phi^2) and
/// quadrature weights for the area element sin(rho) d rho d phi.
struct MetricData {
  std::vector<double> sin_rho;
  std::vector<double> cos_rho;
  std::vector<double> cot_rho;    // unset (0) at the pole row
  std::vector<double> sin_phi;
  std::vector<double> cos_phi;
  std::vector<double> sin_2phi;
  std::vector<double> cos_2phi;
  // Per-node quadrature weight of a ring node (rows 1..n_rho-1); the weight
  // integrates sin(rho) exactly over the radial cell of the row, times h_phi.
  std::vector<double> ring_weight;
  double pole_weight = 0.0; // area of the polar cap cell of radius h_rho/2
};

/// Spherical cap domain of opening angle theta in (0, pi/2) for n = 2,
/// with its grid and cached metric tables. Immutable after construction;
/// fields reference it through a shared pointer.
struct CapDomain {
  double theta = 0.0;
  int n = 2;
  PolarGrid grid;
  MetricData metric;

  int n_rho() const { return grid.n_rho; }
  int n_phi() const { return grid.n_phi; }
  int node_count() const { return grid.n_rho * grid.n_phi; }
  int index(int i, int j) const { return i * grid.n_phi + j; }
  int wrap(int j) const {
    int n = grid.n_phi;
    return (j % n + n) % n;
  }
  /// Column of the reflected node: the antipodal azimuth.
  int opposite(int j) const { return (j + grid.n_phi / 2) % grid.n_phi; }
};

using DomainPtr = std::shared_ptr<const CapDomain>;

/// One real value per grid node, row-major (rho-major). The pole row is
/// constant: every column of row 0 carries the same shared value.
class ScalarField {
public:
  ScalarField() = default;
  ScalarField(DomainPtr domain, double fill = 0.0);

  const CapDomain& domain() const { return *domain_; }
  DomainPtr domain_ptr() const { return domain_; }

  double& at(int i, int j) { return values_[domain_->index(i, j)]; }
  double at(int i, int j) const { return values_[domain_->index(i, j)]; }
  double pole() const { return values_[0]; }
  /// Overwrites the whole pole row with one value.
  void set_pole(double v);

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }

  double min() const;
  double max() const;
  double max_abs() const;

private:
  DomainPtr domain_;
  std::vector<double> values_;
};

/// Builds a validated domain. Requirements: theta in (0, pi/2) strictly,
/// n == 2, n_rho >= 8, n_phi >= 8 and even.
DomainPtr make_domain(double theta, int n, int n_rho, int n_phi);

/// Support function of the model cap, 1 - cos(theta) cos(rho), sampled on
/// the grid. Solves the problem class exactly at the continuum level and
/// anchors seeds, tests and continuation.
ScalarField model_support(DomainPtr domain);

/// Closed-form radial derivative of the model support, cos(theta) sin(rho).
double model_support_radial_derivative(const CapDomain& domain, double rho);

/// Samples f(rho, phi) on the grid. The pole value is taken from
/// f(0, 0) and replicated across the pole row.
ScalarField sample(DomainPtr domain, const std::function<double(double, double)>& f);

/// Node permutation induced by the reflection (x1, x2) -> (-x1, -x2):
/// column j maps to column j + n_phi/2. An exact involution.
ScalarField reflect(const ScalarField& f);

/// Projection onto the even subspace: average of f and reflect(f).
/// After this, f == reflect(f) holds bitwise.
ScalarField symmetrize(const ScalarField& f);

/// Quadrature of f against the area element sin(rho) d rho d phi.
/// Radial cells carry the exact measure of their cell (the pole node owns the
/// polar cap of radius h_rho/2), azimuthal sums pair antipodal columns first
/// so that integrate(f) == integrate(reflect(f)) bitwise.
double integrate(const ScalarField& f);

/// Total cap area = integrate(1); closed form 2 pi (1 - cos theta).
double domain_area(const CapDomain& domain);

/// integrate(f) / area.
double mean(const ScalarField& f);

/// max_ij |f - reflect(f)|; zero for even fields.
double evenness_defect(const ScalarField& f);

} // namespace capillary
