#pragma once

#include <functional>
#include <vector>

#include "capillary/curvature.hpp"
#include "capillary/solver.hpp"

namespace capillary {

/// Axisymmetric reduction: for rotation-invariant data the tensor is
/// diagonal with eigenvalues s'' + s along the meridian and
/// cot(rho) s' + s in the azimuthal direction (limit s'' + s at the pole),
/// so the equation collapses to a two-point boundary value problem in rho.
/// Solved on its own fine 1-D grid, independently of the 2-D pipeline,
/// to serve as a cross-validation oracle.
struct RadialProfile {
  double theta = 0.0;
  int n = 2;
  int k = 1;
  double p = 1.5;
  std::vector<double> rho;
  std::vector<double> s;
  std::vector<double> lambda_rad; // s'' + s
  std::vector<double> lambda_tan; // cot(rho) s' + s
  bool eigen_mode = false;
  double mu = 0.0;
};

RadialProfile solve_radial(double theta, int n, int k, double p,
                           const std::function<double(double)>& phi_profile,
                           double tol = 1e-10, int nodes = 4096,
                           CurvatureKind kind = CurvatureKind::SigmaK);

/// Max relative sup deviation between a 2-D solution and the interpolated
/// 1-D profile. Requires matching angles; the caller guarantees matching
/// (n, k, p, phi).
double compare_to_2d(const RadialProfile& profile, const SolutionBundle& bundle);

} // namespace capillary
