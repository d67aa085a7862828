#include "capillary/radial.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "capillary/errors.hpp"

namespace capillary {

namespace {

constexpr double kBalanceEps = 1e-12;

// Smallest residual the second-difference rows can represent: the 1/h^2
// stencil coefficients amplify last-bit noise of s, so a line search that
// stalls at or below this level has converged to working precision.
double residual_floor_1d(double h, double s_scale) {
  return 16.0 * std::numeric_limits<double>::epsilon() * s_scale / (h * h);
}

struct Mesh1D {
  double theta = 0.0;
  int m = 0;
  double h = 0.0;
  std::vector<double> rho, sin_rho, cot_rho, phi, weight; // weight: cell-exact sin integral
  double area = 0.0;                                      // 1 - cos(theta)
};

Mesh1D build_mesh(double theta, const std::function<double(double)>& phi_profile,
                  int nodes) {
  Mesh1D g;
  g.theta = theta;
  g.m = nodes;
  g.h = theta / (nodes - 1);
  g.rho.resize(nodes);
  g.sin_rho.resize(nodes);
  g.cot_rho.resize(nodes);
  g.phi.resize(nodes);
  g.weight.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    g.rho[i] = i * g.h;
    if (i == nodes - 1) g.rho[i] = theta;
    g.sin_rho[i] = std::sin(g.rho[i]);
    g.cot_rho[i] = i == 0 ? 0.0 : std::cos(g.rho[i]) / g.sin_rho[i];
    g.phi[i] = phi_profile(g.rho[i]);
    const double lo = std::max(0.0, g.rho[i] - 0.5 * g.h);
    const double hi = std::min(theta, g.rho[i] + 0.5 * g.h);
    g.weight[i] = std::cos(lo) - std::cos(hi);
  }
  g.area = 1.0 - std::cos(theta);
  return g;
}

double mesh_mean(const Mesh1D& g, const std::vector<double>& s) {
  double acc = 0.0;
  for (int i = 0; i < g.m; ++i) acc += g.weight[i] * s[i];
  return acc / g.area;
}

// Diagonal tensor eigenvalues of the profile at every node.
void eigenvalue_fields(const Mesh1D& g, const std::vector<double>& s,
                       std::vector<double>& lrad, std::vector<double>& ltan) {
  const int m = g.m;
  const double h = g.h;
  lrad.assign(m, 0.0);
  ltan.assign(m, 0.0);
  lrad[0] = 2.0 * (s[1] - s[0]) / (h * h) + s[0]; // ghost s(-h) = s(h)
  ltan[0] = lrad[0];
  for (int i = 1; i + 1 < m; ++i) {
    lrad[i] = (s[i + 1] - 2.0 * s[i] + s[i - 1]) / (h * h) + s[i];
    ltan[i] = g.cot_rho[i] * (s[i + 1] - s[i - 1]) / (2.0 * h) + s[i];
  }
  const int b = m - 1;
  lrad[b] = (2.0 * s[b] - 5.0 * s[b - 1] + 4.0 * s[b - 2] - s[b - 3]) / (h * h) + s[b];
  const double ds =
      (11.0 * s[b] - 18.0 * s[b - 1] + 9.0 * s[b - 2] - 2.0 * s[b - 3]) / (6.0 * h);
  ltan[b] = g.cot_rho[b] * ds + s[b];
}

double f_value(CurvatureKind kind, double lr, double lt) {
  if (kind == CurvatureKind::SigmaK) return lr + lt;
  return lr * lt / (lr + lt);
}

// dF/d(lr), dF/d(lt) on the diagonal tensor.
void f_derivative(CurvatureKind kind, double lr, double lt, double out[2]) {
  if (kind == CurvatureKind::SigmaK) {
    out[0] = 1.0;
    out[1] = 1.0;
    return;
  }
  const double s1 = lr + lt;
  out[0] = lt * lt / (s1 * s1);
  out[1] = lr * lr / (s1 * s1);
}

} // namespace

RadialProfile solve_radial(double theta, int n, int k, double p,
                           const std::function<double(double)>& phi_profile,
                           double tol, int nodes, CurvatureKind kind) {
  if (n != 2) throw ParameterMismatchError("only n = 2 is supported");
  if (k != 1) throw ParameterMismatchError("k must satisfy 1 <= k < n");
  if (!(theta > 0.0 && theta < std::numbers::pi / 2.0))
    throw ParameterMismatchError("theta must lie in (0, pi/2)");
  if (nodes < 2048) throw ParameterMismatchError("oracle grid must have at least 2048 nodes");

  const Mesh1D g = build_mesh(theta, phi_profile, nodes);
  const int m = g.m;
  const double h = g.h;
  const double cos_t = std::cos(theta), sin_t = std::sin(theta);
  const double cot_theta = cos_t / sin_t;
  const CurvatureSpec F = make_curvature(kind, n, k);
  const double A = identity_value(F);
  const bool balanced = std::abs(p - (k + 1.0)) < kBalanceEps;

  for (int i = 0; i < m; ++i)
    if (!(g.phi[i] > 0.0))
      throw ParameterMismatchError("phi profile must be positive on [0, theta]");

  // Model profile and seed scale from the mean form of the equation.
  std::vector<double> ell(m);
  for (int i = 0; i < m; ++i) ell[i] = 1.0 - cos_t * std::cos(g.rho[i]);
  double r = 1.0;
  if (!balanced) {
    std::vector<double> weighted(m);
    for (int i = 0; i < m; ++i) weighted[i] = std::pow(ell[i], p - 1.0) * g.phi[i];
    const double B = mesh_mean(g, weighted);
    auto gfun = [&](double t) {
      return A * std::exp(k * t) - B * std::exp((p - 1.0) * t);
    };
    double lo = -1.0, hi = 1.0;
    for (int it = 0; it < 60 && gfun(lo) * gfun(hi) > 0.0; ++it) {
      lo *= 2.0;
      hi *= 2.0;
    }
    if (gfun(lo) * gfun(hi) <= 0.0) {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gfun(lo) * gfun(mid) <= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      r = std::exp(0.5 * (lo + hi));
    }
  }

  std::vector<double> s(m);
  for (int i = 0; i < m; ++i) s[i] = r * ell[i];
  double mu = 0.0;
  const double mean_target = mesh_mean(g, s);

  // Continuation in the weight from the matched model profile.
  std::vector<double> phi0(m);
  const double front = A * std::pow(r, k + 1.0 - p);
  for (int i = 0; i < m; ++i) phi0[i] = front * std::pow(ell[i], 1.0 - p);
  double start_gap = 0.0;
  for (int i = 0; i < m; ++i)
    start_gap = std::max(start_gap, std::abs(phi0[i] - g.phi[i]) /
                                        std::max(1.0, std::abs(g.phi[i])));
  const int T = start_gap < 1e-13 ? 1 : 10;

  const int M = balanced ? m + 1 : m;
  std::vector<double> phi_t(m), lrad, ltan;

  auto residual_of = [&](const std::vector<double>& sv, double muv,
                         Eigen::VectorXd& res) {
    eigenvalue_fields(g, sv, lrad, ltan);
    const double load = 1.0 + muv;
    for (int i = 0; i + 1 < m; ++i)
      res[i] = f_value(kind, lrad[i], ltan[i]) -
               load * std::pow(sv[i], p - 1.0) * phi_t[i];
    const int b = m - 1;
    res[b] = (11.0 * sv[b] - 18.0 * sv[b - 1] + 9.0 * sv[b - 2] - 2.0 * sv[b - 3]) /
                 (6.0 * h) -
             cot_theta * sv[b];
    if (balanced) res[m] = mesh_mean(g, sv) - mean_target;
  };

  auto guards_ok = [&](const std::vector<double>& sv) {
    for (int i = 0; i < m; ++i)
      if (!(sv[i] > 0.0)) return false;
    eigenvalue_fields(g, sv, lrad, ltan);
    for (int i = 0; i < m; ++i)
      if (lrad[i] < 1e-8 || ltan[i] < 1e-8) return false;
    return true;
  };

  for (int stage = 1; stage <= T; ++stage) {
    const double t = static_cast<double>(stage) / T;
    for (int i = 0; i < m; ++i) phi_t[i] = (1.0 - t) * phi0[i] + t * g.phi[i];

    Eigen::VectorXd res(M);
    residual_of(s, mu, res);
    bool stalled = false;
    for (int iter = 0; !stalled; ++iter) {
      const double rn = res.lpNorm<Eigen::Infinity>();
      if (rn <= tol) break;
      if (iter >= 60)
        throw NoConvergenceError("oracle newton iterations exhausted at residual " +
                                 std::to_string(rn));

      eigenvalue_fields(g, s, lrad, ltan);
      std::vector<Eigen::Triplet<double>> trips;
      trips.reserve(static_cast<size_t>(m) * 5 + 4);
      const double load = 1.0 + mu;
      double Fd[2];
      {
        f_derivative(kind, lrad[0], ltan[0], Fd);
        const double sum = Fd[0] + Fd[1];
        trips.emplace_back(0, 0,
                           sum * (1.0 - 2.0 / (h * h)) -
                               load * (p - 1.0) * std::pow(s[0], p - 2.0) * phi_t[0]);
        trips.emplace_back(0, 1, sum * 2.0 / (h * h));
      }
      for (int i = 1; i + 1 < m; ++i) {
        f_derivative(kind, lrad[i], ltan[i], Fd);
        const double c = g.cot_rho[i];
        trips.emplace_back(i, i,
                           Fd[0] * (1.0 - 2.0 / (h * h)) + Fd[1] -
                               load * (p - 1.0) * std::pow(s[i], p - 2.0) * phi_t[i]);
        trips.emplace_back(i, i + 1, Fd[0] / (h * h) + Fd[1] * c / (2.0 * h));
        trips.emplace_back(i, i - 1, Fd[0] / (h * h) - Fd[1] * c / (2.0 * h));
      }
      {
        const int b = m - 1;
        trips.emplace_back(b, b, 11.0 / (6.0 * h) - cot_theta);
        trips.emplace_back(b, b - 1, -3.0 / h);
        trips.emplace_back(b, b - 2, 3.0 / (2.0 * h));
        trips.emplace_back(b, b - 3, -1.0 / (3.0 * h));
      }
      if (balanced) {
        for (int i = 0; i + 1 < m; ++i)
          trips.emplace_back(i, m, -std::pow(s[i], p - 1.0) * phi_t[i]);
        for (int i = 0; i < m; ++i) trips.emplace_back(m, i, g.weight[i] / g.area);
      }

      Eigen::SparseMatrix<double> Amat(M, M);
      Amat.setFromTriplets(trips.begin(), trips.end());
      Amat.makeCompressed();
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
      lu.compute(Amat);
      if (lu.info() != Eigen::Success)
        throw SingularLinearizationError("oracle linearization could not be factorized");
      Eigen::VectorXd delta = lu.solve(-res);

      const double merit = res.squaredNorm();
      double alpha = 1.0;
      std::vector<double> s_trial(m);
      Eigen::VectorXd res_trial(M);
      bool guard_blocked = false;
      for (;;) {
        for (int i = 0; i < m; ++i) s_trial[i] = s[i] + alpha * delta[i];
        const double mu_trial = balanced ? mu + alpha * delta[m] : mu;
        guard_blocked = !guards_ok(s_trial);
        if (!guard_blocked) {
          residual_of(s_trial, mu_trial, res_trial);
          if (res_trial.squaredNorm() <= (1.0 - 1e-4 * alpha) * merit) {
            s.swap(s_trial);
            mu = mu_trial;
            res.swap(res_trial);
            break;
          }
        }
        alpha *= 0.5;
        if (alpha < 1.0 / 1024.0) {
          if (guard_blocked)
            throw ConvexityLostError("oracle step shortening hit the convexity floor");
          const double scale = *std::max_element(s.begin(), s.end());
          if (rn <= residual_floor_1d(h, scale)) {
            stalled = true; // at working precision; accept the iterate
            break;
          }
          throw NoConvergenceError("oracle backtracking found no residual decrease");
        }
      }
    }
  }

  RadialProfile out;
  out.theta = theta;
  out.n = n;
  out.k = k;
  out.p = p;
  out.rho = g.rho;
  out.s = s;
  eigenvalue_fields(g, s, out.lambda_rad, out.lambda_tan);
  out.eigen_mode = balanced;
  out.mu = mu;
  return out;
}

double compare_to_2d(const RadialProfile& profile, const SolutionBundle& bundle) {
  const CapDomain& d = bundle.s.domain();
  if (std::abs(profile.theta - d.theta) > 1e-12)
    throw ParameterMismatchError("parameter mismatch: oracle and solution use different theta");

  auto interp = [&](double rho) {
    const double h = profile.rho[1] - profile.rho[0];
    const int m = static_cast<int>(profile.rho.size());
    int i = std::min(m - 2, std::max(0, static_cast<int>(rho / h)));
    const double t = (rho - profile.rho[i]) / (profile.rho[i + 1] - profile.rho[i]);
    return (1.0 - t) * profile.s[i] + t * profile.s[i + 1];
  };

  double dev = 0.0, scale = 0.0;
  for (int i = 0; i < d.n_rho(); ++i) {
    const double ref = interp(d.grid.rho[i]);
    for (int j = 0; j < d.n_phi(); ++j) {
      dev = std::max(dev, std::abs(bundle.s.at(i, j) - ref));
      scale = std::max(scale, std::abs(bundle.s.at(i, j)));
    }
  }
  return scale > 0.0 ? dev / scale : dev;
}

} // namespace capillary
