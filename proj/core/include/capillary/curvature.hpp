#pragma once

#include <vector>

#include "capillary/operators.hpp"

namespace capillary {

enum class CurvatureKind { SigmaK, QuotientSigma };

/// Choice of the curvature function F acting on the eigenvalues of the
/// second-order tensor: the k-th elementary symmetric polynomial, or the
/// quotient e_n / e_{n-k}. Both are k-homogeneous and elliptic on their
/// cones. With n = 2 the admitted order is k = 1, so SigmaK is the trace
/// and QuotientSigma is det / trace.
struct CurvatureSpec {
  CurvatureKind kind = CurvatureKind::SigmaK;
  int n = 2;
  int k = 1;
};

/// Validates 1 <= k < n and n = 2.
CurvatureSpec make_curvature(CurvatureKind kind, int n, int k);

/// Elementary symmetric polynomial e_k of an arbitrary eigenvalue list.
/// Exposed for raw-list checks; the field pipeline is n = 2 only.
double elementary_symmetric(int k, const std::vector<double>& lambda);

/// F on the symmetric 2x2 matrix [[a, b], [b, c]].
/// Throws NonAdmissible when the matrix leaves the open cone of F
/// (trace > 0 for SigmaK, positive definite for QuotientSigma).
double curvature_value(const CurvatureSpec& F, double a, double b, double c);

/// dF/dtau at [[a, b], [b, c]] as {F11, F12, F22}, off-diagonal entries
/// counted separately so that F11*a + 2*F12*b + F22*c = k * F (the Euler
/// relation of a k-homogeneous function). Positive definite on the cone.
void curvature_derivative(const CurvatureSpec& F, double a, double b, double c,
                          double out[3]);

/// F evaluated on the identity matrix.
double identity_value(const CurvatureSpec& F);

/// Open-cone membership of one matrix.
bool admissible(const CurvatureSpec& F, double a, double b, double c);

/// Node-wise convexity audit of a tensor field. The eigenvalues of the
/// support-function tensor are the principal curvature radii, so strict
/// convexity of the reconstructed surface means all of them are positive.
struct AdmissibilityReport {
  double min_eigenvalue = 0.0;
  bool strictly_convex = false; // min_eigenvalue > 0
  bool cone_ok = false;         // every node inside the cone of F
  int worst_i = 0;              // node attaining min_eigenvalue
  int worst_j = 0;
};

AdmissibilityReport admissibility(const CurvatureSpec& F, const SymTensorField& tau);

} // namespace capillary
