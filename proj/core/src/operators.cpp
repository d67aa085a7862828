#include "capillary/operators.hpp"

#include <cmath>

#include "capillary/errors.hpp"

namespace capillary {

namespace {

// Radial first derivative at every row: centered inside, 3-point one-sided
// at the boundary row. The pole row is left to the caller.
void radial_derivative(const ScalarField& f, std::vector<double>& out) {
  const CapDomain& d = f.domain();
  const int nr = d.n_rho(), np = d.n_phi();
  const double h = d.grid.h_rho;
  for (int i = 1; i + 1 < nr; ++i)
    for (int j = 0; j < np; ++j)
      out[d.index(i, j)] = (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * h);
  for (int j = 0; j < np; ++j)
    out[d.index(nr - 1, j)] =
        (3.0 * f.at(nr - 1, j) - 4.0 * f.at(nr - 2, j) + f.at(nr - 3, j)) / (2.0 * h);
}

void angular_derivative(const std::vector<double>& v, const CapDomain& d,
                        std::vector<double>& out) {
  const int nr = d.n_rho(), np = d.n_phi();
  const double h = d.grid.h_phi;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < np; ++j)
      out[d.index(i, j)] =
          (v[d.index(i, d.wrap(j + 1))] - v[d.index(i, d.wrap(j - 1))]) / (2.0 * h);
}

// Fourier projections of per-column meridian data onto the harmonics that
// survive at the pole: the mean and the 2 phi pair for second derivatives,
// the 1 phi pair for first derivatives.
struct PoleVector {
  double x = 0.0, y = 0.0;
};
struct PoleTensor {
  double m0 = 0.0, c2 = 0.0, s2 = 0.0; // H = [[m0+c2, s2], [s2, m0-c2]]
};

PoleVector project_vector(const CapDomain& d, const std::vector<double>& per_column) {
  PoleVector v;
  const int np = d.n_phi();
  for (int j = 0; j < np; ++j) {
    v.x += per_column[j] * d.metric.cos_phi[j];
    v.y += per_column[j] * d.metric.sin_phi[j];
  }
  v.x *= 2.0 / np;
  v.y *= 2.0 / np;
  return v;
}

PoleTensor project_tensor(const CapDomain& d, const std::vector<double>& per_column) {
  PoleTensor t;
  const int np = d.n_phi();
  for (int j = 0; j < np; ++j) {
    t.m0 += per_column[j];
    t.c2 += per_column[j] * d.metric.cos_2phi[j];
    t.s2 += per_column[j] * d.metric.sin_2phi[j];
  }
  t.m0 /= np;
  t.c2 *= 2.0 / np;
  t.s2 *= 2.0 / np;
  return t;
}

} // namespace

double BoundaryTrace::max_abs_conormal() const {
  double m = 0.0;
  for (double v : conormal) m = std::max(m, std::abs(v));
  return m;
}

GradientField gradient(const ScalarField& f) {
  const CapDomain& d = f.domain();
  const int nr = d.n_rho(), np = d.n_phi();
  GradientField g;
  g.domain = f.domain_ptr();
  g.radial.assign(d.node_count(), 0.0);
  g.angular.assign(d.node_count(), 0.0);

  radial_derivative(f, g.radial);
  std::vector<double> fphi(d.node_count(), 0.0);
  angular_derivative(f.values(), d, fphi);
  for (int i = 1; i < nr; ++i) {
    const double inv_sin = 1.0 / d.metric.sin_rho[i];
    for (int j = 0; j < np; ++j) g.angular[d.index(i, j)] = fphi[d.index(i, j)] * inv_sin;
  }

  // Pole: centered difference along each meridian, continued through the
  // pole by the antipodal column, then projected to the tangent vector.
  std::vector<double> d1(np);
  for (int j = 0; j < np; ++j)
    d1[j] = (f.at(1, j) - f.at(1, d.opposite(j))) / (2.0 * d.grid.h_rho);
  PoleVector v = project_vector(d, d1);
  for (int j = 0; j < np; ++j) {
    const double c = d.metric.cos_phi[j], s = d.metric.sin_phi[j];
    g.radial[d.index(0, j)] = v.x * c + v.y * s;
    g.angular[d.index(0, j)] = -v.x * s + v.y * c;
  }
  return g;
}

SymTensorField hessian(const ScalarField& f) {
  const CapDomain& d = f.domain();
  const int nr = d.n_rho(), np = d.n_phi();
  const double hr = d.grid.h_rho, hp = d.grid.h_phi;
  SymTensorField t;
  t.domain = f.domain_ptr();
  t.rr.assign(d.node_count(), 0.0);
  t.rt.assign(d.node_count(), 0.0);
  t.tt.assign(d.node_count(), 0.0);

  std::vector<double> fr(d.node_count(), 0.0);
  radial_derivative(f, fr);
  std::vector<double> fphi(d.node_count(), 0.0), frphi(d.node_count(), 0.0);
  angular_derivative(f.values(), d, fphi);
  angular_derivative(fr, d, frphi);

  for (int i = 1; i < nr; ++i) {
    const double sin_r = d.metric.sin_rho[i];
    const double cot_r = d.metric.cot_rho[i];
    for (int j = 0; j < np; ++j) {
      const int k = d.index(i, j);
      double frr;
      if (i + 1 < nr) {
        frr = (f.at(i + 1, j) - 2.0 * f.at(i, j) + f.at(i - 1, j)) / (hr * hr);
      } else {
        frr = (2.0 * f.at(i, j) - 5.0 * f.at(i - 1, j) + 4.0 * f.at(i - 2, j) -
               f.at(i - 3, j)) /
              (hr * hr);
      }
      const double fpp =
          (f.at(i, d.wrap(j + 1)) - 2.0 * f.at(i, j) + f.at(i, d.wrap(j - 1))) / (hp * hp);
      t.rr[k] = frr;
      t.rt[k] = (frphi[k] - cot_r * fphi[k]) / sin_r;
      t.tt[k] = fpp / (sin_r * sin_r) + cot_r * fr[k];
    }
  }

  // Pole: meridian second differences determine the tensor through its
  // mean and 2 phi harmonics; store rotated per-column components.
  std::vector<double> d2(np);
  for (int j = 0; j < np; ++j)
    d2[j] = (f.at(1, j) - 2.0 * f.pole() + f.at(1, d.opposite(j))) / (hr * hr);
  PoleTensor H = project_tensor(d, d2);
  const double a = H.m0 + H.c2, b = H.s2, cc = H.m0 - H.c2;
  for (int j = 0; j < np; ++j) {
    const double c = d.metric.cos_phi[j], s = d.metric.sin_phi[j];
    const int k = d.index(0, j);
    t.rr[k] = a * c * c + 2.0 * b * c * s + cc * s * s;
    t.rt[k] = -H.c2 * d.metric.sin_2phi[j] + H.s2 * d.metric.cos_2phi[j];
    t.tt[k] = a * s * s - 2.0 * b * c * s + cc * c * c;
  }
  return t;
}

SymTensorField spherical_hessian(const ScalarField& f) {
  SymTensorField t = hessian(f);
  const int n = f.size();
  for (int k = 0; k < n; ++k) {
    t.rr[k] += f.values()[k];
    t.tt[k] += f.values()[k];
  }
  return t;
}

void tensor_eigenvalues(const SymTensorField& t, int i, int j, double out[2]) {
  const int k = t.domain->index(i, j);
  const double m = 0.5 * (t.rr[k] + t.tt[k]);
  const double d = 0.5 * (t.rr[k] - t.tt[k]);
  const double r = std::sqrt(d * d + t.rt[k] * t.rt[k]);
  out[0] = m - r;
  out[1] = m + r;
}

BoundaryTrace conormal_derivative(const ScalarField& f) {
  const CapDomain& d = f.domain();
  const int nr = d.n_rho(), np = d.n_phi();
  const double h = d.grid.h_rho;
  BoundaryTrace tr;
  tr.value.resize(np);
  tr.conormal.resize(np);
  for (int j = 0; j < np; ++j) {
    tr.value[j] = f.at(nr - 1, j);
    tr.conormal[j] =
        (3.0 * f.at(nr - 1, j) - 4.0 * f.at(nr - 2, j) + f.at(nr - 3, j)) / (2.0 * h);
  }
  return tr;
}

BoundaryTrace robin_residual(const ScalarField& s) {
  const CapDomain& d = s.domain();
  BoundaryTrace tr = conormal_derivative(s);
  const double cot_theta = std::cos(d.theta) / std::sin(d.theta);
  for (int j = 0; j < d.n_phi(); ++j) tr.conormal[j] -= cot_theta * tr.value[j];
  return tr;
}

ScalarField codazzi_defect(const ScalarField& f) {
  const CapDomain& d = f.domain();
  const int nr = d.n_rho(), np = d.n_phi();
  const double hr = d.grid.h_rho, hp = d.grid.h_phi;
  SymTensorField t = spherical_hessian(f);
  ScalarField out(f.domain_ptr(), 0.0);

  auto dphi = [&](const std::vector<double>& v, int i, int j) {
    return (v[d.index(i, d.wrap(j + 1))] - v[d.index(i, d.wrap(j - 1))]) / (2.0 * hp);
  };
  auto drho = [&](const std::vector<double>& v, int i, int j) {
    return (v[d.index(i + 1, j)] - v[d.index(i - 1, j)]) / (2.0 * hr);
  };

  for (int i = 1; i + 1 < nr; ++i) {
    const double inv_sin = 1.0 / d.metric.sin_rho[i];
    const double cot_r = d.metric.cot_rho[i];
    for (int j = 0; j < np; ++j) {
      const int k = d.index(i, j);
      // Covariant frame derivative of the tensor: the azimuthal direction
      // carries connection terms from the rotating frame, the radial one
      // is parallel.
      const double d1_rt = drho(t.rt, i, j);
      const double d1_tt = drho(t.tt, i, j);
      const double d2_rr = dphi(t.rr, i, j) * inv_sin - 2.0 * cot_r * t.rt[k];
      const double d2_rt = dphi(t.rt, i, j) * inv_sin + cot_r * (t.rr[k] - t.tt[k]);
      const double e1 = d1_rt - d2_rr; // slots (1,2,1) vs (2,1,1)
      const double e2 = d1_tt - d2_rt; // slots (1,2,2) vs (2,1,2)
      out.values()[k] = std::max(std::abs(e1), std::abs(e2));
    }
  }
  // Keep row 0 a shared node.
  out.set_pole(0.0);
  return out;
}

} // namespace capillary
