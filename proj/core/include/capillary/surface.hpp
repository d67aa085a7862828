#pragma once

#include <array>
#include <string>
#include <vector>

#include "capillary/solver.hpp"

namespace capillary {

/// Embedded surface recovered from a support function on the cap. One
/// vertex per logical grid node (the pole is shared), unit normals given
/// by the chart point itself, pole fan triangles plus ring quads.
struct EmbeddedSurface {
  DomainPtr domain;
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<double, 3>> normals;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 4>> quads;
  std::vector<int> boundary_loop; // vertex ids ordered by azimuth

  int vertex_id(int i, int j) const {
    return i == 0 ? 0 : 1 + (i - 1) * domain->n_phi() + j;
  }
  int vertex_count() const { return static_cast<int>(vertices.size()); }
};

/// Vertex position from the support function: X = grad s + s * nu with nu
/// the unit chart point. Boundary vertices then satisfy
/// <nu, e3> = cos(theta) exactly, and their height vanishes at the
/// continuum level whenever s satisfies the capillary boundary condition.
/// Throws NonAdmissible when the support tensor is not positive definite
/// (the map is only invertible for strictly convex data).
EmbeddedSurface inverse_gauss_map(const ScalarField& s);

/// Max relative defect of the curvature equation evaluated extrinsically:
/// principal curvatures are estimated per vertex by a local quadric fit
/// over the two-ring neighborhood, at least three rings away from both the
/// pole and the rim, and compared against the prescribed right-hand side.
double surface_curvature_check(const EmbeddedSurface& surface, const ProblemSpec& spec,
                               const ScalarField& s);

/// Text mesh export: "v x y z" then "f ..." lines (1-based), 9 significant
/// digits, boundary loop appended as a comment block.
void export_mesh(const EmbeddedSurface& surface, const std::string& path);

} // namespace capillary
