#include "capillary/surface.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "capillary/errors.hpp"

namespace capillary {

EmbeddedSurface inverse_gauss_map(const ScalarField& s) {
  const CapDomain& d = s.domain();
  const SymTensorField tau = spherical_hessian(s);
  const AdmissibilityReport rep =
      admissibility(CurvatureSpec{CurvatureKind::SigmaK, 2, 1}, tau);
  if (!rep.strictly_convex)
    throw NonAdmissibleError("surface reconstruction needs a positive definite tensor");

  const int nr = d.n_rho(), np = d.n_phi();
  EmbeddedSurface surf;
  surf.domain = s.domain_ptr();
  surf.vertices.resize(1 + (nr - 1) * np);
  surf.normals.resize(surf.vertices.size());

  const GradientField g = gradient(s);
  // Pole: the rotating-frame components recombine to one ambient vector;
  // evaluate through column 0 where the frame is axis-aligned.
  surf.vertices[0] = {g.radial[d.index(0, 0)], g.angular[d.index(0, 0)], s.pole()};
  surf.normals[0] = {0.0, 0.0, 1.0};
  for (int i = 1; i < nr; ++i) {
    const double sr = d.metric.sin_rho[i], cr = d.metric.cos_rho[i];
    for (int j = 0; j < np; ++j) {
      const double cp = d.metric.cos_phi[j], sp = d.metric.sin_phi[j];
      const std::array<double, 3> nu = {sr * cp, sr * sp, cr};
      const std::array<double, 3> e_rho = {cr * cp, cr * sp, -sr};
      const std::array<double, 3> e_phi = {-sp, cp, 0.0};
      const int k = d.index(i, j);
      const int id = surf.vertex_id(i, j);
      for (int c = 0; c < 3; ++c)
        surf.vertices[id][c] =
            g.radial[k] * e_rho[c] + g.angular[k] * e_phi[c] + s.at(i, j) * nu[c];
      surf.normals[id] = nu;
    }
  }

  for (int j = 0; j < np; ++j)
    surf.triangles.push_back({0, surf.vertex_id(1, j), surf.vertex_id(1, d.wrap(j + 1))});
  for (int i = 1; i + 1 < nr; ++i)
    for (int j = 0; j < np; ++j)
      surf.quads.push_back({surf.vertex_id(i, j), surf.vertex_id(i + 1, j),
                            surf.vertex_id(i + 1, d.wrap(j + 1)),
                            surf.vertex_id(i, d.wrap(j + 1))});
  surf.boundary_loop.resize(np);
  for (int j = 0; j < np; ++j) surf.boundary_loop[j] = surf.vertex_id(nr - 1, j);
  return surf;
}

double surface_curvature_check(const EmbeddedSurface& surface, const ProblemSpec& spec,
                               const ScalarField& s) {
  const CapDomain& d = *surface.domain;
  const int nr = d.n_rho(), np = d.n_phi();
  if (nr < 8) throw ParameterMismatchError("grid too coarse for the two-ring fit");

  double worst = 0.0;
  Eigen::MatrixXd Amat(25, 6);
  Eigen::VectorXd rhs(25);
  for (int i = 3; i <= nr - 4; ++i) {
    for (int j = 0; j < np; ++j) {
      const auto& P = surface.vertices[surface.vertex_id(i, j)];
      const auto& nu = surface.normals[surface.vertex_id(i, j)];
      const double cp = d.metric.cos_phi[j], sp = d.metric.sin_phi[j];
      const double cr = d.metric.cos_rho[i], sr = d.metric.sin_rho[i];
      const std::array<double, 3> t1 = {cr * cp, cr * sp, -sr};
      const std::array<double, 3> t2 = {-sp, cp, 0.0};

      int row = 0;
      for (int di = -2; di <= 2; ++di)
        for (int dj = -2; dj <= 2; ++dj) {
          const auto& Q = surface.vertices[surface.vertex_id(i + di, d.wrap(j + dj))];
          const double qx = Q[0] - P[0], qy = Q[1] - P[1], qz = Q[2] - P[2];
          const double x = qx * t1[0] + qy * t1[1] + qz * t1[2];
          const double y = qx * t2[0] + qy * t2[1] + qz * t2[2];
          const double w = -(qx * nu[0] + qy * nu[1] + qz * nu[2]);
          Amat(row, 0) = 1.0;
          Amat(row, 1) = x;
          Amat(row, 2) = y;
          Amat(row, 3) = 0.5 * x * x;
          Amat(row, 4) = x * y;
          Amat(row, 5) = 0.5 * y * y;
          rhs(row) = w;
          ++row;
        }
      Eigen::VectorXd c = Amat.colPivHouseholderQr().solve(rhs);
      const double D = c(1), E = c(2);
      const double denom = std::sqrt(1.0 + D * D + E * E);
      Eigen::Matrix2d II;
      II << c(3) / denom, c(4) / denom, c(4) / denom, c(5) / denom;
      Eigen::Matrix2d I;
      I << 1.0 + D * D, D * E, D * E, 1.0 + E * E;
      const Eigen::Matrix2d S = I.inverse() * II;
      // S may be slightly non-symmetric from the fit; its eigenvalues are
      // real for any product of a positive matrix with a symmetric one.
      const double tr = S.trace(), det = S.determinant();
      const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
      const double k1 = 0.5 * tr - disc, k2 = 0.5 * tr + disc;

      const double rhs_val =
          std::pow(s.at(i, j), spec.p - 1.0) * spec.phi.at(i, j);
      double defect;
      if (spec.curvature.kind == CurvatureKind::QuotientSigma) {
        // Curvature-side polynomial of the principal curvatures is the
        // reciprocal of the radii-side quotient.
        const double Sk = k1 + k2; // k = 1
        defect = std::abs(Sk * rhs_val - 1.0);
      } else {
        if (!(k1 > 0.0) || !(k2 > 0.0))
          throw NonAdmissibleError("fitted curvatures not positive");
        const double sigma = 1.0 / k1 + 1.0 / k2; // sigma_1 of the radii
        defect = std::abs(sigma / rhs_val - 1.0);
      }
      worst = std::max(worst, defect);
    }
  }
  return worst;
}

void export_mesh(const EmbeddedSurface& surface, const std::string& path) {
  if (path.empty()) throw Error("mesh path is empty");
  std::ofstream out(path);
  if (!out) throw Error("cannot open mesh file: " + path);

  char buf[128];
  for (const auto& v : surface.vertices) {
    std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", v[0], v[1], v[2]);
    out << buf;
  }
  for (const auto& t : surface.triangles)
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  for (const auto& q : surface.quads)
    out << "f " << q[0] + 1 << ' ' << q[1] + 1 << ' ' << q[2] + 1 << ' ' << q[3] + 1
        << '\n';

  out << "# boundary loop\n";
  out << "#";
  for (int id : surface.boundary_loop) out << ' ' << id + 1;
  out << "\n";
  if (!out) throw Error("write failed: " + path);
}

} // namespace capillary
