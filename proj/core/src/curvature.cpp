#include "capillary/curvature.hpp"

#include <cmath>
#include <stdexcept>

#include "capillary/errors.hpp"

namespace capillary {

CurvatureSpec make_curvature(CurvatureKind kind, int n, int k) {
  if (n != 2) throw ParameterMismatchError("only n = 2 is supported");
  if (k < 1 || k >= n) throw ParameterMismatchError("k must satisfy 1 <= k < n");
  return CurvatureSpec{kind, n, k};
}

double elementary_symmetric(int k, const std::vector<double>& lambda) {
  const int n = static_cast<int>(lambda.size());
  if (k < 0 || k > n) throw std::invalid_argument("order outside 0..size");
  std::vector<double> e(k + 1, 0.0);
  e[0] = 1.0;
  for (int m = 0; m < n; ++m)
    for (int j = std::min(k, m + 1); j >= 1; --j) e[j] += lambda[m] * e[j - 1];
  return e[k];
}

bool admissible(const CurvatureSpec& F, double a, double b, double c) {
  if (F.kind == CurvatureKind::SigmaK) return a + c > 0.0;
  return a > 0.0 && a * c - b * b > 0.0; // positive definite
}

double curvature_value(const CurvatureSpec& F, double a, double b, double c) {
  if (!admissible(F, a, b, c)) throw NonAdmissibleError("tensor outside the admissible cone");
  if (F.kind == CurvatureKind::SigmaK) return a + c;
  return (a * c - b * b) / (a + c);
}

void curvature_derivative(const CurvatureSpec& F, double a, double b, double c,
                          double out[3]) {
  if (!admissible(F, a, b, c)) throw NonAdmissibleError("tensor outside the admissible cone");
  if (F.kind == CurvatureKind::SigmaK) {
    out[0] = 1.0;
    out[1] = 0.0;
    out[2] = 1.0;
    return;
  }
  const double s1 = a + c;
  const double s2 = a * c - b * b;
  out[0] = (s1 * c - s2) / (s1 * s1);
  out[1] = -b / s1;
  out[2] = (s1 * a - s2) / (s1 * s1);
}

double identity_value(const CurvatureSpec& F) {
  return F.kind == CurvatureKind::SigmaK ? 2.0 : 0.5;
}

AdmissibilityReport admissibility(const CurvatureSpec& F, const SymTensorField& tau) {
  const CapDomain& d = *tau.domain;
  AdmissibilityReport rep;
  rep.cone_ok = true;
  bool first = true;
  double eig[2];
  for (int i = 0; i < d.n_rho(); ++i)
    for (int j = 0; j < d.n_phi(); ++j) {
      tensor_eigenvalues(tau, i, j, eig);
      if (first || eig[0] < rep.min_eigenvalue) {
        rep.min_eigenvalue = eig[0];
        rep.worst_i = i;
        rep.worst_j = j;
        first = false;
      }
      const int k = d.index(i, j);
      if (!admissible(F, tau.rr[k], tau.rt[k], tau.tt[k])) rep.cone_ok = false;
    }
  rep.strictly_convex = rep.min_eigenvalue > 0.0;
  return rep;
}

} // namespace capillary
