#pragma once

#include <functional>
#include <string>
#include <vector>

#include "capillary/curvature.hpp"
#include "capillary/domain.hpp"
#include "capillary/estimates.hpp"
#include "capillary/solver.hpp"

namespace capillary::cli {

/// Flat key = value run description. One file drives every command; sweep
/// commands additionally read the sweep_* lists.
struct RunConfig {
  double theta = 0.7853981633974483; // pi/4
  int n = 2;
  int k = 1;
  CurvatureKind kind = CurvatureKind::SigmaK;
  double p = 1.5;
  std::string phi = "model"; // model | constant:<v> | even-bump:<a>,<w> | file:<path>
  int n_rho = 33;
  int n_phi = 64;
  SolveConfig solve;
  std::vector<double> gammas{0.5};
  int oracle_nodes = 4096;
  std::string out_dir = ".";
  std::string run_id = "run";
  std::vector<double> sweep_theta;
  std::vector<double> sweep_p;
  std::vector<double> sweep_gamma_frac; // fractions of the open upper bound 2(p-1)/k
};

/// Parses config text; errors carry "<source>:<line>: ..." context.
RunConfig parse_config_text(const std::string& text, const std::string& source_name);
RunConfig parse_config_file(const std::string& path);

/// Materializes the phi named in the config on a domain. All built-ins are
/// positive and exactly even by construction; file weights are validated
/// by the problem constructor.
ScalarField build_weight(const RunConfig& cfg, DomainPtr domain);

/// Axisymmetric profile of the configured phi for the 1-D oracle; rejects
/// azimuth-dependent forms.
std::function<double(double)> weight_profile(const RunConfig& cfg);

/// One sweep combination result. Failures keep the row with a status tag;
/// numeric cells of failed stages stay NaN.
struct SweepRow {
  double theta = 0.0, p = 0.0, gamma = 0.0;
  std::string status = "ok"; // or the failure kind
  int iterations = 0;
  double mu = 0.0;
  double gradient_ratio = 0.0;
  double max_psi = 0.0;
  int boundary_status = 0; // 1 = identity checked, 0 = all nodes degenerate
  double boundary_robust = 0.0;
  double boundary_all = 0.0;
  double target = 0.0;
  double R = 0.0, H = 0.0, r_in = 0.0, r_out = 0.0;
  double h_agreement = 0.0;
  int chain_ok = 0;
  double empirical_c = 0.0;
  double slack_h = 0.0;
};

/// Runs the theta x p x gamma product with the configured grid and weight.
/// Rows are computed independently (jobs > 1 runs them on a thread pool)
/// and returned in deterministic index order.
std::vector<SweepRow> run_sweep(const RunConfig& cfg, int jobs);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

/// Commands; each returns a process exit code and writes its artifacts
/// under out_dir with the run_id prefix. A summary file is written even
/// when a stage fails, naming the stage.
int cmd_solve(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_reconstruct(const RunConfig& cfg);
int cmd_oracle(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg, int jobs);

} // namespace capillary::cli
