#pragma once

#include <string>
#include <vector>

#include "capillary/solver.hpp"
#include "capillary/surface.hpp"

namespace capillary {

/// Exponent pair for the weighted gradient quantity: gamma in the open
/// admissible interval (0, 2(p-1)/k), beta fixed to 2 - gamma.
struct EstimateSpec {
  double gamma = 0.5;
  double beta = 1.5;
};

EstimateSpec make_estimate(double gamma, double p, int k);

/// Effective spacing used for discretization slack: the larger of the
/// radial step and the azimuthal arc length at the rim.
double grid_slack(const CapDomain& domain);

/// Psi = l^beta |grad u|^2 / u^gamma with u = s / l. Identically zero
/// (bitwise) on the scaled model family where u is constant.
ScalarField psi_field(const ScalarField& s, const EstimateSpec& est);

/// Empirical constant of the gradient bound: the max over nodes of
/// |grad s|^2 / s^gamma divided by (max s)^(2-gamma). Scale invariant.
double gradient_estimate_ratio(const ScalarField& s, const EstimateSpec& est);

enum class BoundaryIdentityStatus { Ok, AllNodesDegenerate };

/// The outward derivative of log Psi on the rim equals -gamma cot(theta)
/// for any field satisfying the capillary boundary condition; the check
/// differences the log over the last two rings (first order on purpose,
/// so the residual scales linearly with h). Because the boundary
/// condition forces the radial derivative of u to zero on the rim, Psi
/// agrees there with its tangential realization l^beta u_t^2 / u^gamma
/// (u_t the azimuthal frame component of grad u), and so does the outward
/// derivative; the difference quotient is taken on the tangential form,
/// which avoids an O(h) pollution term carrying a 1 / u_t^2 amplification.
/// A rim node enters when |u_t| clears the degeneracy floor
/// max(1e-8, h * sup|grad u|) both on the rim and one ring in;
/// axisymmetric fields have u_t = 0 bitwise and report
/// AllNodesDegenerate. The robust maximum further restricts to nodes
/// carrying at least 10% of the rim's largest |u_t|, since the log is
/// singular near the azimuthal zeros that even fields always have.
struct BoundaryIdentityReport {
  BoundaryIdentityStatus status = BoundaryIdentityStatus::AllNodesDegenerate;
  double target = 0.0;            // -gamma cot(theta)
  double max_residual_robust = 0.0;
  double max_residual_all = 0.0;  // over every admissible node
  int robust_nodes = 0;
  int admissible_nodes = 0;
};

BoundaryIdentityReport boundary_identity(const ScalarField& s, const EstimateSpec& est);

/// Extrinsic size data of the reconstructed surface and its base body.
/// h_formula is the support function of the base slice predicted from the
/// rim values of s; h_mesh measures the same support function directly
/// from the projected boundary loop.
struct GeometricQuantities {
  double R = 0.0;     // max s
  double H = 0.0;     // max vertex height
  double r_in = 0.0;  // min boundary-loop planar radius
  double r_out = 0.0; // max boundary-loop planar radius
  std::vector<double> h_formula;
  std::vector<double> h_mesh;
  double h_agreement = 0.0; // max relative gap between the two
};

GeometricQuantities geometric_quantities(const ScalarField& s,
                                         const EmbeddedSurface& surface);

struct ChainCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0; // asserted: lhs <= rhs up to slack
  bool ok = false;
};

struct ChainReport {
  std::vector<ChainCheck> checks;
  bool all_ok = false;
  double slack = 0.0;        // relative slack applied, 10 * grid_slack
  double empirical_c = 0.0;  // r_out / r_in
};

/// Parameter-free inequality chain on a solved instance, plus the base-body
/// transfer bound with the supplied empirical gradient constant.
ChainReport inequality_chain(const ScalarField& s, const GeometricQuantities& geom,
                             const EstimateSpec& est, double empirical_c0);

enum class StationarityStatus { InteriorMax, MaxOnBoundary, Degenerate };

/// First-order condition at the discrete argmax of Psi: the gradient of
/// log Psi expanded as 2 u_m u_mi / |grad u|^2 + beta l_i / l - gamma u_i / u,
/// evaluated componentwise. O(h) at an interior grid maximum.
struct StationarityReport {
  StationarityStatus status = StationarityStatus::Degenerate;
  int i = 0, j = 0;
  double max_psi = 0.0;
  double residual = 0.0;
};

StationarityReport interior_stationarity(const ScalarField& s, const EstimateSpec& est);

/// One-stop verification record for a solved instance.
struct EstimateReport {
  EstimateSpec est;
  double max_psi = 0.0;
  double gradient_ratio = 0.0;
  BoundaryIdentityReport boundary;
  GeometricQuantities geometric;
  ChainReport chain;
  StationarityReport stationarity;
};

EstimateReport verify_estimates(const ScalarField& s, const EmbeddedSurface& surface,
                                const EstimateSpec& est);

} // namespace capillary
