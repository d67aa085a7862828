// Microbenchmarks for the hot paths: tensor assembly, one Newton solve on a
// modest grid, surface reconstruction, and the estimate verifier.

#include <benchmark/benchmark.h>

#include <numbers>

#include "capillary/curvature.hpp"
#include "capillary/domain.hpp"
#include "capillary/estimates.hpp"
#include "capillary/operators.hpp"
#include "capillary/solver.hpp"
#include "capillary/surface.hpp"

namespace {

using namespace capillary;

constexpr double kTheta = std::numbers::pi / 3.0;

DomainPtr bench_domain(int n_rho, int n_phi) { return make_domain(kTheta, 2, n_rho, n_phi); }

void BM_SphericalHessian(benchmark::State& state) {
  DomainPtr d = bench_domain(static_cast<int>(state.range(0)),
                             2 * static_cast<int>(state.range(0)));
  ScalarField s = model_support(d);
  for (auto _ : state) {
    SymTensorField tau = spherical_hessian(s);
    benchmark::DoNotOptimize(tau.rr.data());
  }
}
BENCHMARK(BM_SphericalHessian)->Arg(33)->Arg(65)->Arg(129);

void BM_Solve(benchmark::State& state) {
  DomainPtr d = bench_domain(25, 48);
  CurvatureSpec F = make_curvature(CurvatureKind::SigmaK, 2, 1);
  double p = 1.5;
  ScalarField phi = matched_weight(F, d, p, 1.2);
  for (auto _ : state) {
    SolutionBundle b = solve(make_problem(d, F, p, phi));
    benchmark::DoNotOptimize(b.s.values().data());
  }
}
BENCHMARK(BM_Solve)->Unit(benchmark::kMillisecond);

void BM_InverseGaussMap(benchmark::State& state) {
  DomainPtr d = bench_domain(65, 128);
  ScalarField s = model_support(d);
  for (auto _ : state) {
    EmbeddedSurface surf = inverse_gauss_map(s);
    benchmark::DoNotOptimize(surf.vertices.data());
  }
}
BENCHMARK(BM_InverseGaussMap)->Unit(benchmark::kMillisecond);

void BM_VerifyEstimates(benchmark::State& state) {
  DomainPtr d = bench_domain(33, 64);
  CurvatureSpec F = make_curvature(CurvatureKind::SigmaK, 2, 1);
  double p = 1.5;
  SolutionBundle b = solve(make_problem(d, F, p, ScalarField(d, 1.0)));
  EmbeddedSurface surf = inverse_gauss_map(b.s);
  EstimateSpec est = make_estimate(0.5, p, 1);
  for (auto _ : state) {
    EstimateReport rep = verify_estimates(b.s, surf, est);
    benchmark::DoNotOptimize(rep.max_psi);
  }
}
BENCHMARK(BM_VerifyEstimates)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
