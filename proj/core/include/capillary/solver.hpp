#pragma once

#include <utility>
#include <vector>

#include "capillary/curvature.hpp"
#include "capillary/domain.hpp"
#include "capillary/operators.hpp"

namespace capillary {

/// Discrete boundary-value problem on the cap: F(tau[s]) = s^(p-1) phi at
/// interior nodes, conormal derivative of s equal to cot(theta) s on the rim.
/// phi must be positive and exactly even (reflection-invariant node values).
struct ProblemSpec {
  DomainPtr domain;
  CurvatureSpec curvature;
  double p = 1.5;
  ScalarField phi;
  // Exponents outside (1, k+1] run, but the convexity and estimate
  // machinery is only guaranteed inside; callers may surface a warning.
  // The top endpoint is the scale-invariant case served by the eigen mode.
  bool p_outside_guaranteed_range = false;
};

ProblemSpec make_problem(DomainPtr domain, const CurvatureSpec& curvature, double p,
                         ScalarField phi);

/// Weight matched to the scaled model support: with phi = this field,
/// s = scale * l solves the continuum problem exactly. Used as the
/// continuation start and as the "model" weight built-in.
ScalarField matched_weight(const CurvatureSpec& F, DomainPtr domain, double p,
                           double scale = 1.0);

struct SolveConfig {
  // Residual sup-norm target. On fine grids the rounding floor of the
  // discrete residual (see SolutionBundle::residual_floor) can sit above
  // this value; a line search stalling at or below the floor counts as
  // converged and the achieved residual is reported as is.
  double newton_tol = 1e-10;
  int max_newton_iters = 40;    // per continuation stage
  double damping_factor = 0.5;  // backtracking ratio
  double min_step = 1.0 / 1024.0;
  int continuation_steps = 10;  // weight blend stages from matched to target
  double convexity_floor = 1e-8; // smallest allowed eigenvalue of tau
};

struct LinearSolveReport {
  double relative_residual = 0.0;
  bool shifted = false; // diagonal regularization applied after a near-singular factorization
};

struct SolutionBundle {
  ScalarField s;
  std::vector<double> residual_history; // sup norms, all stages concatenated
  double interior_residual_max = 0.0;
  double robin_residual_max = 0.0;
  AdmissibilityReport admissibility;
  int iterations = 0;
  // At the balance exponent p = k + 1 the k-homogeneous equation is
  // invariant under scaling of s, so the plain problem is degenerate: the
  // solver switches to the balanced form F(tau[s]) = (1 + mu) s^(p-1) phi
  // with the quadrature mean of s pinned to the seed's mean. mu is the
  // reported balance offset (grid-scale small when phi admits a solution).
  bool eigen_mode = false;
  double mu = 0.0;
  // Estimated rounding floor of the discrete residual on this grid: the
  // azimuthal second derivative next to the pole amplifies the last bit
  // of s by 1 / (h_phi sin rho_1)^2.
  double residual_floor = 0.0;
};

/// Seed r * l with the scale r solving the mean form of the equation,
/// identity_value(F) * r^k = mean((r l)^(p-1) phi), by scalar bisection.
/// At the balance exponent the scale cancels and r = 1 is returned.
ScalarField initial_guess(const ProblemSpec& spec);

struct ResidualPair {
  ScalarField interior; // F(tau) - s^(p-1) phi on pole + interior rings, 0 on the rim row
  BoundaryTrace robin;
};

ResidualPair residual(const ProblemSpec& spec, const ScalarField& s);

/// One undamped Newton correction for the plain formulation; the linear
/// system is the exact derivative of the discrete residual. Near the
/// balance exponent the plain linearization is singular at solutions and
/// this reports SingularLinearization; solve() handles that regime.
std::pair<ScalarField, LinearSolveReport> newton_step(const ProblemSpec& spec,
                                                      const ScalarField& s,
                                                      const SolveConfig& config);

/// Damped Newton with weight continuation from the matched model weight to
/// the target phi. Evenness is enforced by reflection averaging after every
/// accepted step; the convexity floor is enforced by step shortening.
SolutionBundle solve(const ProblemSpec& spec, const SolveConfig& config = {});

} // namespace capillary
