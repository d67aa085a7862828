#pragma once

#include "capillary/domain.hpp"

namespace capillary {

/// Gradient in the orthonormal frame {d/d rho, (1/sin rho) d/d phi}.
/// At the pole the frame rotates with the column: component (0, j) is the
/// directional derivative along the meridian phi_j (and its orthogonal).
struct GradientField {
  DomainPtr domain;
  std::vector<double> radial;
  std::vector<double> angular;

  double norm_sq(int i, int j) const {
    int k = domain->index(i, j);
    return radial[k] * radial[k] + angular[k] * angular[k];
  }
};

/// Symmetric 2-tensor in the orthonormal frame; symmetry is exact by storage
/// (three components per node). The pole row uses the per-column rotated
/// frame, consistent with GradientField.
struct SymTensorField {
  DomainPtr domain;
  std::vector<double> rr;
  std::vector<double> rt;
  std::vector<double> tt;
};

/// Values and outward conormal derivatives along the boundary circle,
/// one entry per boundary column.
struct BoundaryTrace {
  std::vector<double> value;
  std::vector<double> conormal;

  double max_abs_conormal() const;
};

/// Covariant gradient. Second-order: centered stencils inside, one-sided
/// 3-point at the boundary row, Fourier-projected meridian differences at
/// the pole (antipodal columns continue each meridian through rho = 0).
GradientField gradient(const ScalarField& f);

/// Covariant Hessian. Same stencil policy; the pole entries project the
/// meridian second differences onto the constant + cos/sin(2 phi) harmonics,
/// which determine the full tensor at the pole, then rotate per column.
SymTensorField hessian(const ScalarField& f);

/// Hessian plus f times the metric: the second-order operator whose
/// eigenvalues are the principal curvature radii of the surface with
/// support function f. Applied to the model support it returns the
/// identity tensor up to discretization error.
SymTensorField spherical_hessian(const ScalarField& f);

/// Frame eigenvalues (ascending) of a symmetric tensor node.
void tensor_eigenvalues(const SymTensorField& t, int i, int j, double out[2]);

/// Boundary values and one-sided conormal derivative of f at rho = theta.
BoundaryTrace conormal_derivative(const ScalarField& f);

/// Defect of the capillary boundary condition: trace.value holds s at the
/// boundary, trace.conormal holds (d/d rho) s - cot(theta) s per column.
BoundaryTrace robin_residual(const ScalarField& s);

/// Node-wise defect of the symmetry of the covariant derivative of
/// spherical_hessian(f) in its first two slots. Vanishes at the continuum
/// level on the round sphere for every smooth f; the discrete value decays
/// with the grid at fixed distance from the pole. The polar frame carries
/// cot(rho) connection terms, so accuracy degrades like 1/rho^2 toward the
/// pole: assess convergence on a fixed annulus, not in the global sup norm.
/// Defined on rows 1..n_rho-2, zero elsewhere.
ScalarField codazzi_defect(const ScalarField& f);

} // namespace capillary
