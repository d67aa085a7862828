#include "capillary/solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "capillary/errors.hpp"

namespace capillary {

namespace {

constexpr double kBalanceEps = 1e-12;

// Rounding floor of the discrete residual. The azimuthal second derivative
// on the first ring divides by (h_phi sin rho_1)^2, which amplifies the
// last-bit noise of s far above machine epsilon on fine grids; a line
// search that stalls at or below this level has converged to working
// precision, it has not failed.
double residual_floor(const CapDomain& d, double s_scale) {
  const double a = d.grid.h_phi * d.metric.sin_rho[1];
  return 16.0 * std::numeric_limits<double>::epsilon() * s_scale / (a * a);
}

bool balance_exponent(const ProblemSpec& spec) {
  return std::abs(spec.p - (spec.curvature.k + 1.0)) < kBalanceEps;
}

// Unknown layout: x[0] = pole, x[1 + (i-1)*np + j] = s(i, j) for i >= 1.
struct Layout {
  int nr, np, N;
  explicit Layout(const CapDomain& d)
      : nr(d.n_rho()), np(d.n_phi()), N(1 + (d.n_rho() - 1) * d.n_phi()) {}
  int col(int i, int j) const { return i == 0 ? 0 : 1 + (i - 1) * np + j; }
};

Eigen::VectorXd pack(const Layout& L, const ScalarField& f) {
  Eigen::VectorXd x(L.N);
  x[0] = f.pole();
  for (int i = 1; i < L.nr; ++i)
    for (int j = 0; j < L.np; ++j) x[L.col(i, j)] = f.at(i, j);
  return x;
}

ScalarField unpack(const Layout& L, DomainPtr domain, const Eigen::VectorXd& x) {
  ScalarField f(domain, 0.0);
  f.set_pole(x[0]);
  for (int i = 1; i < L.nr; ++i)
    for (int j = 0; j < L.np; ++j) f.values()[domain->index(i, j)] = x[L.col(i, j)];
  return f;
}

// Residual of the (possibly balanced) system. r must have size >= L.N;
// rows: pole equation, ring equations, Robin rows on the rim.
void residual_vector(const ProblemSpec& spec, const ScalarField& s, double mu,
                     const Layout& L, Eigen::VectorXd& r) {
  const CapDomain& d = *spec.domain;
  const double p = spec.p;
  const SymTensorField tau = spherical_hessian(s);
  const double load = 1.0 + mu;

  auto F_at = [&](int i, int j) {
    const int k = d.index(i, j);
    return curvature_value(spec.curvature, tau.rr[k], tau.rt[k], tau.tt[k]);
  };

  r[0] = F_at(0, 0) - load * std::pow(s.pole(), p - 1.0) * spec.phi.at(0, 0);
  for (int i = 1; i + 1 < L.nr; ++i)
    for (int j = 0; j < L.np; ++j)
      r[L.col(i, j)] =
          F_at(i, j) - load * std::pow(s.at(i, j), p - 1.0) * spec.phi.at(i, j);

  const double hr = d.grid.h_rho;
  const double cot_theta = std::cos(d.theta) / std::sin(d.theta);
  const int b = L.nr - 1;
  for (int j = 0; j < L.np; ++j)
    r[L.col(b, j)] =
        (3.0 * s.at(b, j) - 4.0 * s.at(b - 1, j) + s.at(b - 2, j)) / (2.0 * hr) -
        cot_theta * s.at(b, j);
}

// Exact derivative of residual_vector with respect to the packed unknowns.
void jacobian_triplets(const ProblemSpec& spec, const ScalarField& s, double mu,
                       const Layout& L, std::vector<Eigen::Triplet<double>>& trips) {
  const CapDomain& d = *spec.domain;
  const double p = spec.p;
  const double hr = d.grid.h_rho, hp = d.grid.h_phi;
  const SymTensorField tau = spherical_hessian(s);
  const double load = 1.0 + mu;

  auto Fd_at = [&](int i, int j, double out[3]) {
    const int k = d.index(i, j);
    curvature_derivative(spec.curvature, tau.rr[k], tau.rt[k], tau.tt[k], out);
  };
  auto reaction = [&](int i, int j) {
    return load * (p - 1.0) * std::pow(s.at(i, j), p - 2.0) * spec.phi.at(i, j);
  };

  double Fd[3];

  // Pole row. The tensor there is assembled from antipodal meridian second
  // differences projected on the surviving harmonics; column 0 of the
  // stored field carries the unrotated components.
  Fd_at(0, 0, Fd);
  trips.emplace_back(0, 0, (Fd[0] + Fd[2]) * (1.0 - 2.0 / (hr * hr)) - reaction(0, 0));
  for (int j = 0; j < L.np; ++j) {
    const double cj = (Fd[0] * (1.0 + 2.0 * d.metric.cos_2phi[j]) +
                       Fd[2] * (1.0 - 2.0 * d.metric.cos_2phi[j]) +
                       4.0 * Fd[1] * d.metric.sin_2phi[j]) /
                      L.np;
    trips.emplace_back(0, L.col(1, j), 2.0 * cj / (hr * hr));
  }

  // Ring rows.
  for (int i = 1; i + 1 < L.nr; ++i) {
    const double sin_r = d.metric.sin_rho[i];
    const double cot_r = d.metric.cot_rho[i];
    for (int j = 0; j < L.np; ++j) {
      Fd_at(i, j, Fd);
      const int row = L.col(i, j);
      const int jp = d.wrap(j + 1), jm = d.wrap(j - 1);
      const double cross = Fd[1] / (2.0 * hr * hp * sin_r);

      trips.emplace_back(row, L.col(i, j),
                         Fd[0] * (1.0 - 2.0 / (hr * hr)) +
                             Fd[2] * (1.0 - 2.0 / (hp * hp * sin_r * sin_r)) -
                             reaction(i, j));
      trips.emplace_back(row, L.col(i + 1, j),
                         Fd[0] / (hr * hr) + Fd[2] * cot_r / (2.0 * hr));
      trips.emplace_back(row, L.col(i - 1, j),
                         Fd[0] / (hr * hr) - Fd[2] * cot_r / (2.0 * hr));
      trips.emplace_back(row, L.col(i, jp),
                         Fd[2] / (hp * hp * sin_r * sin_r) -
                             Fd[1] * cot_r / (hp * sin_r));
      trips.emplace_back(row, L.col(i, jm),
                         Fd[2] / (hp * hp * sin_r * sin_r) +
                             Fd[1] * cot_r / (hp * sin_r));
      trips.emplace_back(row, L.col(i + 1, jp), cross);
      trips.emplace_back(row, L.col(i - 1, jp), -cross);
      trips.emplace_back(row, L.col(i + 1, jm), -cross);
      trips.emplace_back(row, L.col(i - 1, jm), cross);
    }
  }

  // Robin rows (linear).
  const double cot_theta = std::cos(d.theta) / std::sin(d.theta);
  const int b = L.nr - 1;
  for (int j = 0; j < L.np; ++j) {
    const int row = L.col(b, j);
    trips.emplace_back(row, L.col(b, j), 3.0 / (2.0 * hr) - cot_theta);
    trips.emplace_back(row, L.col(b - 1, j), -2.0 / hr);
    trips.emplace_back(row, L.col(b - 2, j), 1.0 / (2.0 * hr));
  }
}

struct LinearSolution {
  Eigen::VectorXd delta;
  LinearSolveReport report;
};

LinearSolution solve_sparse(int M, std::vector<Eigen::Triplet<double>> trips,
                            const Eigen::VectorXd& rhs) {
  Eigen::SparseMatrix<double> A(M, M);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();

  LinearSolution out;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  bool shifted = false;
  if (lu.info() != Eigen::Success) {
    for (int i = 0; i < M; ++i) trips.emplace_back(i, i, 1e-10);
    A.setZero();
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();
    lu.compute(A);
    shifted = true;
    if (lu.info() != Eigen::Success)
      throw SingularLinearizationError("linearized system could not be factorized");
  }
  out.delta = lu.solve(rhs);
  // One pass of iterative refinement with the existing factorization; it
  // removes the condition-number amplification of plain back substitution.
  out.delta += lu.solve(rhs - A * out.delta);
  // Residual gate against the scale of the products actually formed, so a
  // near-zero right-hand side near convergence does not inflate the ratio.
  double row_sum_max = 0.0;
  for (int c = 0; c < A.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it)
      row_sum_max = std::max(row_sum_max, std::abs(it.value()));
  const double scale =
      std::max({rhs.lpNorm<Eigen::Infinity>(),
                row_sum_max * out.delta.lpNorm<Eigen::Infinity>(), 1e-300});
  out.report.relative_residual =
      (A * out.delta - rhs).lpNorm<Eigen::Infinity>() / scale;
  out.report.shifted = shifted;
  if (!(out.report.relative_residual < 1e-10))
    throw SingularLinearizationError(
        "linear solve residual " + std::to_string(out.report.relative_residual) +
        " exceeds 1e-10 (near-singular linearization)");
  return out;
}

double min_tau_eigenvalue(const ScalarField& s) {
  const SymTensorField tau = spherical_hessian(s);
  const CapDomain& d = *tau.domain;
  double m = 0.0;
  bool first = true;
  double eig[2];
  for (int i = 0; i < d.n_rho(); ++i)
    for (int j = 0; j < d.n_phi(); ++j) {
      tensor_eigenvalues(tau, i, j, eig);
      if (first || eig[0] < m) m = eig[0];
      first = false;
    }
  return m;
}

struct StageResult {
  int iterations = 0;
};

// Damped Newton on one fixed weight. In balanced mode the unknown vector is
// extended by mu and the system by the mean-normalization row.
StageResult newton_stage(const ProblemSpec& spec, const SolveConfig& cfg,
                         const Layout& L, bool balanced, double mean_target,
                         ScalarField& s, double& mu,
                         std::vector<double>& history) {
  const CapDomain& d = *spec.domain;
  const int M = balanced ? L.N + 1 : L.N;
  const double area = domain_area(d);

  auto full_residual = [&](const ScalarField& f, double m) {
    Eigen::VectorXd r(M);
    residual_vector(spec, f, balanced ? m : 0.0, L, r);
    if (balanced) r[L.N] = mean(f) - mean_target;
    return r;
  };

  StageResult out;
  Eigen::VectorXd r = full_residual(s, mu);
  bool stalled = false;
  for (int iter = 0; !stalled; ++iter) {
    const double rn = r.lpNorm<Eigen::Infinity>();
    history.push_back(rn);
    if (rn <= cfg.newton_tol) break;
    if (iter >= cfg.max_newton_iters)
      throw NoConvergenceError("newton iterations exhausted at residual " +
                               std::to_string(rn));

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(L.N) * 10 + 2 * L.np + 2);
    jacobian_triplets(spec, s, balanced ? mu : 0.0, L, trips);
    if (balanced) {
      // d(residual)/d(mu) on equation rows; the rim rows do not see mu.
      const double p = spec.p;
      trips.emplace_back(0, L.N, -std::pow(s.pole(), p - 1.0) * spec.phi.at(0, 0));
      for (int i = 1; i + 1 < L.nr; ++i)
        for (int j = 0; j < L.np; ++j)
          trips.emplace_back(L.col(i, j), L.N,
                             -std::pow(s.at(i, j), p - 1.0) * spec.phi.at(i, j));
      // Mean-normalization row: exact quadrature weights.
      trips.emplace_back(L.N, 0, d.metric.pole_weight / area);
      for (int i = 1; i < L.nr; ++i)
        for (int j = 0; j < L.np; ++j)
          trips.emplace_back(L.N, L.col(i, j), d.metric.ring_weight[i] / area);
    }

    LinearSolution lin = solve_sparse(M, std::move(trips), -r);

    const double merit = r.squaredNorm();
    Eigen::VectorXd x = pack(L, s);
    double alpha = 1.0;
    bool guard_blocked = false;
    for (;;) {
      Eigen::VectorXd x_trial = x + alpha * lin.delta.head(L.N);
      ScalarField s_trial = symmetrize(unpack(L, spec.domain, x_trial));
      const double mu_trial = balanced ? mu + alpha * lin.delta[L.N] : mu;

      guard_blocked = false;
      if (s_trial.min() <= 0.0 || min_tau_eigenvalue(s_trial) < cfg.convexity_floor) {
        guard_blocked = true;
      } else {
        Eigen::VectorXd r_trial = full_residual(s_trial, mu_trial);
        if (r_trial.squaredNorm() <= (1.0 - 1e-4 * alpha) * merit) {
          s = std::move(s_trial);
          mu = mu_trial;
          r = std::move(r_trial);
          break;
        }
      }
      alpha *= cfg.damping_factor;
      if (alpha < cfg.min_step) {
        if (guard_blocked)
          throw ConvexityLostError(
              "step shortening exhausted against the convexity floor");
        if (rn <= residual_floor(d, s.max_abs())) {
          stalled = true; // at working precision; accept the iterate
          break;
        }
        throw NoConvergenceError("backtracking found no residual decrease");
      }
    }
    if (!stalled) ++out.iterations;
  }
  return out;
}

double relative_sup_difference(const ScalarField& a, const ScalarField& b) {
  double num = 0.0, den = 0.0;
  for (int k = 0; k < a.size(); ++k) {
    num = std::max(num, std::abs(a.values()[k] - b.values()[k]));
    den = std::max(den, std::abs(a.values()[k]));
  }
  return den > 0.0 ? num / den : num;
}

} // namespace

ProblemSpec make_problem(DomainPtr domain, const CurvatureSpec& curvature, double p,
                         ScalarField phi) {
  if (!domain) throw ParameterMismatchError("domain must not be null");
  if (phi.domain_ptr().get() != domain.get())
    throw ParameterMismatchError("phi must live on the problem domain");
  if (!std::isfinite(p)) throw ParameterMismatchError("p must be finite");
  if (!(phi.min() > 0.0)) throw ParameterMismatchError("phi must be positive everywhere");
  if (evenness_defect(phi) != 0.0)
    throw ParameterMismatchError("phi must be exactly even under reflection");
  ProblemSpec spec;
  spec.domain = std::move(domain);
  spec.curvature = curvature;
  spec.p = p;
  spec.phi = std::move(phi);
  spec.p_outside_guaranteed_range = !(1.0 < p && p <= curvature.k + 1.0);
  return spec;
}

ScalarField matched_weight(const CurvatureSpec& F, DomainPtr domain, double p,
                           double scale) {
  const ScalarField ell = model_support(domain);
  ScalarField phi(domain, 0.0);
  const double front = identity_value(F) * std::pow(scale, F.k + 1.0 - p);
  for (int k = 0; k < phi.size(); ++k)
    phi.values()[k] = front * std::pow(ell.values()[k], 1.0 - p);
  return phi;
}

ScalarField initial_guess(const ProblemSpec& spec) {
  const ScalarField ell = model_support(spec.domain);
  const double A = identity_value(spec.curvature);
  ScalarField weighted(spec.domain, 0.0);
  for (int k = 0; k < ell.size(); ++k)
    weighted.values()[k] =
        std::pow(ell.values()[k], spec.p - 1.0) * spec.phi.values()[k];
  const double B = mean(weighted);

  double r = 1.0;
  if (std::abs(spec.curvature.k - (spec.p - 1.0)) >= kBalanceEps) {
    // Bisection on t = log r for A e^(k t) - B e^((p-1) t) = 0.
    auto g = [&](double t) {
      return A * std::exp(spec.curvature.k * t) - B * std::exp((spec.p - 1.0) * t);
    };
    double lo = -1.0, hi = 1.0;
    for (int it = 0; it < 60 && g(lo) * g(hi) > 0.0; ++it) {
      lo *= 2.0;
      hi *= 2.0;
    }
    if (g(lo) * g(hi) <= 0.0) {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(lo) * g(mid) <= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      r = std::exp(0.5 * (lo + hi));
    }
  }

  ScalarField s(spec.domain, 0.0);
  for (int k = 0; k < s.size(); ++k) s.values()[k] = r * ell.values()[k];
  return s;
}

ResidualPair residual(const ProblemSpec& spec, const ScalarField& s) {
  if (!(s.min() > 0.0)) throw NonAdmissibleError("support function must be positive");
  const Layout L(*spec.domain);
  Eigen::VectorXd r(L.N);
  residual_vector(spec, s, 0.0, L, r);

  ResidualPair out{ScalarField(spec.domain, 0.0), robin_residual(s)};
  out.interior.set_pole(r[0]);
  for (int i = 1; i + 1 < L.nr; ++i)
    for (int j = 0; j < L.np; ++j)
      out.interior.values()[spec.domain->index(i, j)] = r[L.col(i, j)];
  return out;
}

std::pair<ScalarField, LinearSolveReport> newton_step(const ProblemSpec& spec,
                                                      const ScalarField& s,
                                                      const SolveConfig&) {
  if (!(s.min() > 0.0)) throw NonAdmissibleError("support function must be positive");
  const Layout L(*spec.domain);
  Eigen::VectorXd r(L.N);
  residual_vector(spec, s, 0.0, L, r);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(L.N) * 10);
  jacobian_triplets(spec, s, 0.0, L, trips);
  LinearSolution lin = solve_sparse(L.N, std::move(trips), -r);
  return {unpack(L, spec.domain, lin.delta), lin.report};
}

SolutionBundle solve(const ProblemSpec& spec, const SolveConfig& config) {
  const Layout L(*spec.domain);
  const bool balanced = balance_exponent(spec);

  ScalarField s = symmetrize(initial_guess(spec));
  const double seed_scale = s.pole() / model_support(spec.domain).pole();
  const double mean_target = mean(s);
  double mu = 0.0;

  SolutionBundle bundle;
  bundle.eigen_mode = balanced;

  const ScalarField phi_start =
      matched_weight(spec.curvature, spec.domain, spec.p, seed_scale);
  const bool skip_continuation = relative_sup_difference(spec.phi, phi_start) < 1e-13;

  const int T = skip_continuation ? 1 : std::max(1, config.continuation_steps);
  for (int stage = 1; stage <= T; ++stage) {
    ProblemSpec blend = spec;
    if (!skip_continuation && stage < T) {
      const double t = static_cast<double>(stage) / T;
      blend.phi = ScalarField(spec.domain, 0.0);
      for (int k = 0; k < blend.phi.size(); ++k)
        blend.phi.values()[k] =
            (1.0 - t) * phi_start.values()[k] + t * spec.phi.values()[k];
    }
    StageResult st =
        newton_stage(blend, config, L, balanced, mean_target, s, mu,
                     bundle.residual_history);
    bundle.iterations += st.iterations;
  }

  bundle.s = s;
  bundle.mu = mu;
  {
    Eigen::VectorXd r(balanced ? L.N + 1 : L.N);
    residual_vector(spec, s, balanced ? mu : 0.0, L, r);
    double m = std::abs(r[0]);
    for (int i = 1; i + 1 < L.nr; ++i)
      for (int j = 0; j < L.np; ++j) m = std::max(m, std::abs(r[L.col(i, j)]));
    bundle.interior_residual_max = m;
  }
  bundle.robin_residual_max = robin_residual(s).max_abs_conormal();
  bundle.admissibility = admissibility(spec.curvature, spherical_hessian(s));
  bundle.residual_floor = residual_floor(*spec.domain, s.max_abs());
  return bundle;
}

} // namespace capillary
