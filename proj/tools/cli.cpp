#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "capillary/errors.hpp"
#include "capillary/io.hpp"
#include "capillary/radial.hpp"
#include "capillary/surface.hpp"

namespace capillary::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_at(const std::string& source, int line, const std::string& msg) {
  throw Error(source + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& source, int line, const std::string& key,
                    const std::string& text) {
  try {
    size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail_at(source, line, "value of '" + key + "' is not a number: '" + text + "'");
  }
}

int parse_int(const std::string& source, int line, const std::string& key,
              const std::string& text) {
  try {
    size_t used = 0;
    int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail_at(source, line, "value of '" + key + "' is not an integer: '" + text + "'");
  }
}

std::vector<double> parse_list(const std::string& source, int line, const std::string& key,
                               const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail_at(source, line, "empty entry in list '" + key + "'");
    out.push_back(parse_double(source, line, key, item));
  }
  if (out.empty()) fail_at(source, line, "list '" + key + "' has no entries");
  return out;
}

std::string artifact(const RunConfig& cfg, const std::string& suffix) {
  std::filesystem::create_directories(cfg.out_dir);
  return cfg.out_dir + "/" + cfg.run_id + suffix;
}

std::string failure_kind(const Error& e) {
  if (dynamic_cast<const NonAdmissibleError*>(&e)) return "non_admissible";
  if (dynamic_cast<const SingularLinearizationError*>(&e)) return "singular_linearization";
  if (dynamic_cast<const NoConvergenceError*>(&e)) return "no_convergence";
  if (dynamic_cast<const ConvexityLostError*>(&e)) return "convexity_lost";
  if (dynamic_cast<const ParameterMismatchError*>(&e)) return "parameter_mismatch";
  return "error";
}

std::string kind_name(CurvatureKind kind) {
  return kind == CurvatureKind::SigmaK ? "sigma" : "quotient";
}

using Clock = std::chrono::steady_clock;

std::string elapsed_ms(Clock::time_point start) {
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
  return std::to_string(ms.count());
}

using Entries = std::vector<std::pair<std::string, std::string>>;

void append_config_echo(Entries& e, const RunConfig& cfg) {
  e.emplace_back("theta", format_full(cfg.theta));
  e.emplace_back("n", std::to_string(cfg.n));
  e.emplace_back("k", std::to_string(cfg.k));
  e.emplace_back("kind", kind_name(cfg.kind));
  e.emplace_back("p", format_full(cfg.p));
  e.emplace_back("phi", cfg.phi);
  e.emplace_back("n_rho", std::to_string(cfg.n_rho));
  e.emplace_back("n_phi", std::to_string(cfg.n_phi));
}

std::string summary_path(const RunConfig& cfg, const std::string& command) {
  return artifact(cfg, "." + command + ".summary.txt");
}

void write_failure_summary(const RunConfig& cfg, const std::string& command,
                           const std::string& stage, const Error& e,
                           Clock::time_point start) {
  Entries entries;
  entries.emplace_back("command", command);
  entries.emplace_back("status", "failed");
  entries.emplace_back("stage", stage);
  entries.emplace_back("failure", failure_kind(e));
  entries.emplace_back("message", e.what());
  append_config_echo(entries, cfg);
  entries.emplace_back("wall_ms", elapsed_ms(start));
  write_summary(summary_path(cfg, command), entries);
  std::fprintf(stderr, "%s failed during %s: %s\n", command.c_str(), stage.c_str(),
               e.what());
}

/// Shared front of every command: domain, weight, problem.
ProblemSpec configure_problem(const RunConfig& cfg, DomainPtr& domain_out) {
  domain_out = make_domain(cfg.theta, cfg.n, cfg.n_rho, cfg.n_phi);
  ScalarField phi = build_weight(cfg, domain_out);
  ProblemSpec spec = make_problem(domain_out, make_curvature(cfg.kind, cfg.n, cfg.k),
                                  cfg.p, std::move(phi));
  if (spec.p_outside_guaranteed_range)
    std::fprintf(stderr,
                 "warning: p = %g lies outside (1, k+1]; convexity and estimates "
                 "are not guaranteed in this regime\n",
                 cfg.p);
  return spec;
}

SweepRow sweep_one(const RunConfig& cfg, double theta, double p, double frac) {
  SweepRow row;
  row.theta = theta;
  row.p = p;
  row.gamma = frac * 2.0 * (p - 1.0) / cfg.k;
  row.mu = kNaN;
  row.gradient_ratio = kNaN;
  row.max_psi = kNaN;
  row.boundary_robust = kNaN;
  row.boundary_all = kNaN;
  row.target = kNaN;
  row.R = kNaN;
  row.H = kNaN;
  row.r_in = kNaN;
  row.r_out = kNaN;
  row.h_agreement = kNaN;
  row.empirical_c = kNaN;
  row.slack_h = kNaN;
  try {
    RunConfig local = cfg;
    local.theta = theta;
    local.p = p;
    DomainPtr domain;
    ProblemSpec spec = configure_problem(local, domain);
    row.slack_h = grid_slack(*domain);
    EstimateSpec est = make_estimate(row.gamma, p, cfg.k);
    SolutionBundle bundle = solve(spec, cfg.solve);
    row.iterations = bundle.iterations;
    row.mu = bundle.mu;
    EmbeddedSurface surface = inverse_gauss_map(bundle.s);
    EstimateReport report = verify_estimates(bundle.s, surface, est);
    row.gradient_ratio = report.gradient_ratio;
    row.max_psi = report.max_psi;
    row.boundary_status = report.boundary.status == BoundaryIdentityStatus::Ok ? 1 : 0;
    row.boundary_robust = report.boundary.max_residual_robust;
    row.boundary_all = report.boundary.max_residual_all;
    row.target = report.boundary.target;
    row.R = report.geometric.R;
    row.H = report.geometric.H;
    row.r_in = report.geometric.r_in;
    row.r_out = report.geometric.r_out;
    row.h_agreement = report.geometric.h_agreement;
    row.chain_ok = report.chain.all_ok ? 1 : 0;
    row.empirical_c = report.chain.empirical_c;
  } catch (const Error& e) {
    row.status = failure_kind(e);
  }
  return row;
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& source_name) {
  RunConfig cfg;
  std::stringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail_at(source_name, line_no, "expected key = value, got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail_at(source_name, line_no, "missing key before '='");
    if (value.empty()) fail_at(source_name, line_no, "missing value for '" + key + "'");

    if (key == "theta") {
      cfg.theta = parse_double(source_name, line_no, key, value);
    } else if (key == "n") {
      cfg.n = parse_int(source_name, line_no, key, value);
    } else if (key == "k") {
      cfg.k = parse_int(source_name, line_no, key, value);
    } else if (key == "kind") {
      if (value == "sigma") cfg.kind = CurvatureKind::SigmaK;
      else if (value == "quotient") cfg.kind = CurvatureKind::QuotientSigma;
      else fail_at(source_name, line_no, "kind must be 'sigma' or 'quotient'");
    } else if (key == "p") {
      cfg.p = parse_double(source_name, line_no, key, value);
    } else if (key == "phi") {
      cfg.phi = value;
    } else if (key == "n_rho") {
      cfg.n_rho = parse_int(source_name, line_no, key, value);
    } else if (key == "n_phi") {
      cfg.n_phi = parse_int(source_name, line_no, key, value);
    } else if (key == "newton_tol") {
      cfg.solve.newton_tol = parse_double(source_name, line_no, key, value);
    } else if (key == "max_newton_iters") {
      cfg.solve.max_newton_iters = parse_int(source_name, line_no, key, value);
    } else if (key == "damping_factor") {
      cfg.solve.damping_factor = parse_double(source_name, line_no, key, value);
    } else if (key == "min_step") {
      cfg.solve.min_step = parse_double(source_name, line_no, key, value);
    } else if (key == "continuation_steps") {
      cfg.solve.continuation_steps = parse_int(source_name, line_no, key, value);
    } else if (key == "convexity_floor") {
      cfg.solve.convexity_floor = parse_double(source_name, line_no, key, value);
    } else if (key == "gammas") {
      cfg.gammas = parse_list(source_name, line_no, key, value);
    } else if (key == "oracle_nodes") {
      cfg.oracle_nodes = parse_int(source_name, line_no, key, value);
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else if (key == "run_id") {
      cfg.run_id = value;
    } else if (key == "sweep_theta") {
      cfg.sweep_theta = parse_list(source_name, line_no, key, value);
    } else if (key == "sweep_p") {
      cfg.sweep_p = parse_list(source_name, line_no, key, value);
    } else if (key == "sweep_gamma_frac") {
      cfg.sweep_gamma_frac = parse_list(source_name, line_no, key, value);
    } else {
      fail_at(source_name, line_no, "unknown key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

ScalarField build_weight(const RunConfig& cfg, DomainPtr domain) {
  const std::string& descriptor = cfg.phi;
  CurvatureSpec F = make_curvature(cfg.kind, cfg.n, cfg.k);
  if (descriptor == "model") return matched_weight(F, domain, cfg.p);
  if (descriptor.rfind("constant:", 0) == 0) {
    double v = parse_double("phi", 1, "constant", descriptor.substr(9));
    if (!(v > 0.0)) throw Error("constant weight must be positive");
    return ScalarField(domain, v);
  }
  if (descriptor.rfind("even-bump:", 0) == 0) {
    std::vector<double> args = parse_list("phi", 1, "even-bump", descriptor.substr(10));
    if (args.size() != 2) throw Error("even-bump takes two arguments: amplitude,width");
    double a = args[0], w = args[1];
    if (!(a > 0.0 && a < 1.0)) throw Error("even-bump amplitude must lie in (0, 1)");
    if (!(w > 0.0)) throw Error("even-bump width must be positive");
    ScalarField phi = matched_weight(F, domain, cfg.p);
    const CapDomain& d = phi.domain();
    double theta = d.theta;
    double sigma = w * theta;
    // Radial envelope (sin rho / sin theta)^2 vanishes quadratically at the
    // pole, keeping the perturbed weight smooth there; the second harmonic
    // comes from the tiled metric table so the field stays exactly even.
    for (int i = 0; i < d.n_rho(); ++i) {
      double rho = d.grid.rho[i];
      double envelope = d.metric.sin_rho[i] / std::sin(theta);
      double gauss = std::exp(-(rho - theta) * (rho - theta) / (2.0 * sigma * sigma));
      double radial = a * envelope * envelope * gauss;
      for (int j = 0; j < d.n_phi(); ++j)
        phi.at(i, j) *= 1.0 + radial * d.metric.cos_2phi[j];
    }
    phi.set_pole(phi.at(0, 0));
    return phi;
  }
  if (descriptor.rfind("file:", 0) == 0) return read_field_csv(domain, descriptor.substr(5));
  throw Error("unknown phi form '" + descriptor +
              "' (expected model, constant:<v>, even-bump:<a>,<w> or file:<path>)");
}

std::function<double(double)> weight_profile(const RunConfig& cfg) {
  CurvatureSpec F = make_curvature(cfg.kind, cfg.n, cfg.k);
  if (cfg.phi == "model") {
    double c = identity_value(F);
    double cos_theta = std::cos(cfg.theta);
    double p = cfg.p;
    return [c, cos_theta, p](double rho) {
      return c * std::pow(1.0 - cos_theta * std::cos(rho), 1.0 - p);
    };
  }
  if (cfg.phi.rfind("constant:", 0) == 0) {
    double v = parse_double("phi", 1, "constant", cfg.phi.substr(9));
    if (!(v > 0.0)) throw Error("constant weight must be positive");
    return [v](double) { return v; };
  }
  throw Error("the axisymmetric oracle needs a rotation-invariant weight "
              "(model or constant:<v>), got '" +
              cfg.phi + "'");
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg, int jobs) {
  if (cfg.sweep_theta.empty() || cfg.sweep_p.empty() || cfg.sweep_gamma_frac.empty())
    throw Error("sweep needs sweep_theta, sweep_p and sweep_gamma_frac lists");
  struct Combo {
    double theta, p, frac;
  };
  std::vector<Combo> combos;
  for (double theta : cfg.sweep_theta)
    for (double p : cfg.sweep_p)
      for (double frac : cfg.sweep_gamma_frac) combos.push_back({theta, p, frac});

  std::vector<SweepRow> rows(combos.size());
  int workers = std::max(1, std::min<int>(jobs, static_cast<int>(combos.size())));
  if (workers == 1) {
    for (size_t i = 0; i < combos.size(); ++i)
      rows[i] = sweep_one(cfg, combos[i].theta, combos[i].p, combos[i].frac);
    return rows;
  }
  // Rows are independent; each worker claims indices from a shared counter
  // and writes only its own slot, so the result bytes do not depend on jobs.
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= combos.size()) return;
      rows[i] = sweep_one(cfg, combos[i].theta, combos[i].p, combos[i].frac);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "theta,p,gamma,status,iterations,mu,gradient_ratio,max_psi,boundary_status,"
         "boundary_robust,boundary_all,target,R,H,r_in,r_out,h_agreement,chain_ok,"
         "empirical_c,slack_h\n";
  for (const SweepRow& r : rows) {
    out << format_full(r.theta) << ',' << format_full(r.p) << ',' << format_full(r.gamma)
        << ',' << r.status << ',' << r.iterations << ',' << format_full(r.mu) << ','
        << format_full(r.gradient_ratio) << ',' << format_full(r.max_psi) << ','
        << r.boundary_status << ',' << format_full(r.boundary_robust) << ','
        << format_full(r.boundary_all) << ',' << format_full(r.target) << ','
        << format_full(r.R) << ',' << format_full(r.H) << ',' << format_full(r.r_in)
        << ',' << format_full(r.r_out) << ',' << format_full(r.h_agreement) << ','
        << r.chain_ok << ',' << format_full(r.empirical_c) << ','
        << format_full(r.slack_h) << '\n';
  }
  if (!out) throw Error("short write to '" + path + "'");
}

int cmd_solve(const RunConfig& cfg) {
  auto start = Clock::now();
  std::string stage = "configure";
  try {
    DomainPtr domain;
    ProblemSpec spec = configure_problem(cfg, domain);
    stage = "solve";
    SolutionBundle bundle = solve(spec, cfg.solve);
    stage = "write";
    write_field_csv(bundle.s, artifact(cfg, ".s.csv"));
    Entries entries;
    entries.emplace_back("command", "solve");
    entries.emplace_back("status", "ok");
    append_config_echo(entries, cfg);
    entries.emplace_back("iterations", std::to_string(bundle.iterations));
    entries.emplace_back("interior_residual_max", format_full(bundle.interior_residual_max));
    entries.emplace_back("robin_residual_max", format_full(bundle.robin_residual_max));
    entries.emplace_back("residual_floor", format_full(bundle.residual_floor));
    entries.emplace_back("min_eigenvalue", format_full(bundle.admissibility.min_eigenvalue));
    entries.emplace_back("strictly_convex",
                         bundle.admissibility.strictly_convex ? "yes" : "no");
    entries.emplace_back("eigen_mode", bundle.eigen_mode ? "yes" : "no");
    entries.emplace_back("mu", format_full(bundle.mu));
    entries.emplace_back("s_min", format_full(bundle.s.min()));
    entries.emplace_back("s_max", format_full(bundle.s.max()));
    entries.emplace_back("field_csv", artifact(cfg, ".s.csv"));
    entries.emplace_back("wall_ms", elapsed_ms(start));
    write_summary(summary_path(cfg, "solve"), entries);
    return 0;
  } catch (const Error& e) {
    write_failure_summary(cfg, "solve", stage, e, start);
    return 1;
  }
}

int cmd_verify(const RunConfig& cfg) {
  auto start = Clock::now();
  std::string stage = "configure";
  try {
    DomainPtr domain;
    ProblemSpec spec = configure_problem(cfg, domain);
    std::vector<EstimateSpec> estimates;
    estimates.reserve(cfg.gammas.size());
    for (double gamma : cfg.gammas) estimates.push_back(make_estimate(gamma, cfg.p, cfg.k));
    stage = "read";
    ScalarField s = read_field_csv(domain, artifact(cfg, ".s.csv"));
    stage = "verify";
    EmbeddedSurface surface = inverse_gauss_map(s);
    std::ofstream csv(artifact(cfg, ".verify.csv"));
    if (!csv) throw Error("cannot open verify csv for writing");
    csv << "gamma,beta,max_psi,gradient_ratio,boundary_status,boundary_target,"
           "boundary_robust,boundary_all,robust_nodes,admissible_nodes,R,H,r_in,r_out,"
           "h_agreement,chain_ok,chain_slack,empirical_c,stationarity_status,"
           "stationarity_residual\n";
    bool all_chains_ok = true;
    for (const EstimateSpec& est : estimates) {
      EstimateReport rep = verify_estimates(s, surface, est);
      all_chains_ok = all_chains_ok && rep.chain.all_ok;
      csv << format_full(rep.est.gamma) << ',' << format_full(rep.est.beta) << ','
          << format_full(rep.max_psi) << ',' << format_full(rep.gradient_ratio) << ','
          << (rep.boundary.status == BoundaryIdentityStatus::Ok ? 1 : 0) << ','
          << format_full(rep.boundary.target) << ','
          << format_full(rep.boundary.max_residual_robust) << ','
          << format_full(rep.boundary.max_residual_all) << ','
          << rep.boundary.robust_nodes << ',' << rep.boundary.admissible_nodes << ','
          << format_full(rep.geometric.R) << ',' << format_full(rep.geometric.H) << ','
          << format_full(rep.geometric.r_in) << ',' << format_full(rep.geometric.r_out)
          << ',' << format_full(rep.geometric.h_agreement) << ','
          << (rep.chain.all_ok ? 1 : 0) << ',' << format_full(rep.chain.slack) << ','
          << format_full(rep.chain.empirical_c) << ','
          << static_cast<int>(rep.stationarity.status) << ','
          << format_full(rep.stationarity.residual) << '\n';
    }
    if (!csv) throw Error("short write to verify csv");
    csv.close();
    Entries entries;
    entries.emplace_back("command", "verify");
    entries.emplace_back("status", "ok");
    append_config_echo(entries, cfg);
    entries.emplace_back("gammas", std::to_string(cfg.gammas.size()));
    entries.emplace_back("all_chains_ok", all_chains_ok ? "yes" : "no");
    entries.emplace_back("verify_csv", artifact(cfg, ".verify.csv"));
    entries.emplace_back("wall_ms", elapsed_ms(start));
    write_summary(summary_path(cfg, "verify"), entries);
    if (!all_chains_ok)
      std::fprintf(stderr, "verify: an inequality check failed; see %s\n",
                   artifact(cfg, ".verify.csv").c_str());
    return all_chains_ok ? 0 : 1;
  } catch (const Error& e) {
    write_failure_summary(cfg, "verify", stage, e, start);
    return 1;
  }
}

int cmd_reconstruct(const RunConfig& cfg) {
  auto start = Clock::now();
  std::string stage = "configure";
  try {
    DomainPtr domain;
    ProblemSpec spec = configure_problem(cfg, domain);
    stage = "read";
    ScalarField s = read_field_csv(domain, artifact(cfg, ".s.csv"));
    stage = "reconstruct";
    EmbeddedSurface surface = inverse_gauss_map(s);
    double defect = surface_curvature_check(surface, spec, s);
    stage = "write";
    export_mesh(surface, artifact(cfg, ".mesh"));
    Entries entries;
    entries.emplace_back("command", "reconstruct");
    entries.emplace_back("status", "ok");
    append_config_echo(entries, cfg);
    entries.emplace_back("vertices", std::to_string(surface.vertex_count()));
    entries.emplace_back("triangles", std::to_string(surface.triangles.size()));
    entries.emplace_back("quads", std::to_string(surface.quads.size()));
    entries.emplace_back("curvature_defect", format_full(defect));
    entries.emplace_back("mesh", artifact(cfg, ".mesh"));
    entries.emplace_back("wall_ms", elapsed_ms(start));
    write_summary(summary_path(cfg, "reconstruct"), entries);
    return 0;
  } catch (const Error& e) {
    write_failure_summary(cfg, "reconstruct", stage, e, start);
    return 1;
  }
}

int cmd_oracle(const RunConfig& cfg) {
  auto start = Clock::now();
  std::string stage = "configure";
  try {
    auto profile_fn = weight_profile(cfg);
    stage = "solve";
    RadialProfile profile = solve_radial(cfg.theta, cfg.n, cfg.k, cfg.p, profile_fn,
                                         cfg.solve.newton_tol, cfg.oracle_nodes, cfg.kind);
    stage = "write";
    write_profile_csv(profile, artifact(cfg, ".profile.csv"));
    Entries entries;
    entries.emplace_back("command", "oracle");
    entries.emplace_back("status", "ok");
    append_config_echo(entries, cfg);
    entries.emplace_back("oracle_nodes", std::to_string(cfg.oracle_nodes));
    entries.emplace_back("eigen_mode", profile.eigen_mode ? "yes" : "no");
    entries.emplace_back("mu", format_full(profile.mu));
    // Cross-check against a 2-D solution when this run id already has one.
    std::string field_path = artifact(cfg, ".s.csv");
    if (std::filesystem::exists(field_path)) {
      stage = "compare";
      DomainPtr domain = make_domain(cfg.theta, cfg.n, cfg.n_rho, cfg.n_phi);
      SolutionBundle bundle;
      bundle.s = read_field_csv(domain, field_path);
      entries.emplace_back("deviation_vs_2d", format_full(compare_to_2d(profile, bundle)));
    }
    entries.emplace_back("profile_csv", artifact(cfg, ".profile.csv"));
    entries.emplace_back("wall_ms", elapsed_ms(start));
    write_summary(summary_path(cfg, "oracle"), entries);
    return 0;
  } catch (const Error& e) {
    write_failure_summary(cfg, "oracle", stage, e, start);
    return 1;
  }
}

int cmd_sweep(const RunConfig& cfg, int jobs) {
  auto start = Clock::now();
  std::string stage = "sweep";
  try {
    std::vector<SweepRow> rows = run_sweep(cfg, jobs);
    stage = "write";
    write_sweep_csv(rows, artifact(cfg, ".sweep.csv"));
    int failed = 0;
    for (const SweepRow& r : rows)
      if (r.status != "ok") ++failed;
    Entries entries;
    entries.emplace_back("command", "sweep");
    entries.emplace_back("status", "ok");
    append_config_echo(entries, cfg);
    entries.emplace_back("rows", std::to_string(rows.size()));
    entries.emplace_back("failed_rows", std::to_string(failed));
    entries.emplace_back("sweep_csv", artifact(cfg, ".sweep.csv"));
    entries.emplace_back("wall_ms", elapsed_ms(start));
    write_summary(summary_path(cfg, "sweep"), entries);
    return 0;
  } catch (const Error& e) {
    write_failure_summary(cfg, "sweep", stage, e, start);
    return 1;
  }
}

} // namespace capillary::cli
