#include "urf/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "urf/problem.hpp"
#include "urf/spectral.hpp"

namespace urf {

namespace {

namespace fs = std::filesystem;

int input_error(const std::string& message) {
  std::cerr << "error: " << message << '\n';
  return kExitInput;
}

struct Prepared {
  Scenario scenario;
  Configuration config;
  DesignProblem problem;
  SolveParams params;
  double tau = 1e-6;
};

// Shared scenario -> problem setup for design and sweep.
Prepared prepare(const std::string& scenario_path, std::optional<double> tau_override,
                 std::optional<std::uint64_t> seed_override,
                 std::optional<int> max_iter_override) {
  Prepared prep;
  prep.scenario = load_scenario(scenario_path);
  prep.config = prep.scenario.materialize(seed_override);
  prep.problem = build_problem(prep.config, prep.scenario.alpha, prep.scenario.beta,
                               prep.scenario.gamma);
  prep.params = prep.scenario.solver;
  if (max_iter_override) prep.params.max_iter = *max_iter_override;
  prep.tau = tau_override ? *tau_override : prep.scenario.tau_rel;
  if (!(prep.tau > 0.0 && prep.tau < 1.0)) throw ScenarioError("tau must lie in (0, 1)");
  return prep;
}

DesignResult run_design(const Prepared& prep, const VectorXd& stress,
                        const SolveReport& report) {
  DesignResult result;
  result.config = prep.config;
  result.alpha = prep.problem.alpha;
  result.beta = prep.problem.beta;
  result.gamma = prep.problem.gamma;
  result.tau_rel = prep.tau;
  result.stress_vector = stress;
  result.stress_raw = assemble_stress(prep.problem.ordering, stress);
  result.stress_normalized = normalize_stress(result.stress_raw);

  const double top = sym_eig(result.stress_raw).eigenvalues.tail(1)(0);
  result.edges = effective_edges(prep.problem.ordering, VectorXd(stress / top), prep.tau);

  RigidityTolerances tols;
  tols.edge = prep.tau;
  result.certificate = verify_urf(result.stress_normalized, prep.config, tols);
  result.spectrum_normalized = result.certificate.spectrum;
  result.solve = report;
  result.sim_defaults = prep.scenario.sim;
  return result;
}

}  // namespace

int cmd_design(const std::string& scenario_path, const DesignOptions& options) {
  Prepared prep;
  try {
    prep = prepare(scenario_path, options.tau_override, options.seed_override,
                   options.max_iter_override);
  } catch (const std::exception& error) {
    return input_error(error.what());
  }

  const auto [stress, report] = solve_p1(prep.problem, prep.params);
  if (report.status == SolveStatus::kInfeasibleDetected)
    return input_error("problem detected infeasible (check beta > gamma)");
  if (report.status == SolveStatus::kMaxIter) {
    std::cerr << "solver stopped at max_iter=" << prep.params.max_iter
              << " without converging (primal=" << report.primal_residual
              << ", dual=" << report.dual_residual << ")\n";
    return kExitSolver;
  }

  const DesignResult result = run_design(prep, stress, report);

  const fs::path out_dir(options.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  {
    std::ofstream out(out_dir / "design.json");
    if (!out) return input_error("cannot write " + (out_dir / "design.json").string());
    out << design_result_to_json(result);
  }
  write_matrix_csv(out_dir / "stress.csv", result.stress_normalized);
  write_edges_csv(out_dir / "edges.csv", result.edges);

  std::cout << "alpha=" << format_double(result.alpha) << " edges=" << result.edges.count
            << " lambda_min_nonzero=" << format_double(result.certificate.lambda_min_nonzero)
            << " kappa=" << format_double(result.certificate.condition_number)
            << " iterations=" << report.iterations
            << " certificate=" << (result.certificate.pass() ? "pass" : "FAIL") << '\n';
  return result.certificate.pass() ? kExitOk : kExitCertificate;
}

int cmd_verify(const std::string& stress_csv_path, const std::string& scenario_path) {
  MatrixXd omega;
  Configuration config;
  try {
    omega = read_matrix_csv(stress_csv_path);
    config = load_scenario(scenario_path).materialize();
  } catch (const std::exception& error) {
    return input_error(error.what());
  }

  RigidityCertificate cert;
  try {
    cert = verify_urf(omega, config);
  } catch (const std::exception& error) {
    return input_error(error.what());
  }
  std::cout << "psd_ok=" << (cert.psd_ok ? "true" : "false")
            << " rank_ok=" << (cert.rank_ok ? "true" : "false")
            << " nullspace_ok=" << (cert.nullspace_ok ? "true" : "false")
            << " lambda_min_nonzero=" << format_double(cert.lambda_min_nonzero)
            << " condition_number=" << format_double(cert.condition_number)
            << " edges=" << cert.edges_effective
            << " verdict=" << (cert.pass() ? "pass" : "FAIL") << '\n';
  return cert.pass() ? kExitOk : kExitCertificate;
}

int cmd_spectrum(const std::string& stress_csv_path, const SpectrumOptions& options) {
  SpectrumReport report;
  try {
    const MatrixXd omega = read_matrix_csv(stress_csv_path);
    report = spectrum_report(omega, options.dimension);
  } catch (const std::exception& error) {
    return input_error(error.what());
  }

  nlohmann::json spectrum = nlohmann::json::array();
  for (Eigen::Index k = 0; k < report.spectrum.size(); ++k)
    spectrum.push_back(report.spectrum(k));
  nlohmann::json root{{"spectrum", spectrum},
                      {"lambda_min_nonzero", report.lambda_min_nonzero},
                      {"condition_number", std::isfinite(report.condition_number)
                                               ? nlohmann::json(report.condition_number)
                                               : nlohmann::json(nullptr)},
                      {"rigid", report.rigid}};
  const std::string text = root.dump(2) + "\n";
  if (options.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(options.out_path);
    if (!out) return input_error("cannot write " + options.out_path);
    out << text;
  }
  return kExitOk;
}

int cmd_simulate(const std::string& design_json_path, const SimulateOptions& options) {
  DesignResult design;
  try {
    design = load_design_result(design_json_path);
  } catch (const std::exception& error) {
    return input_error(error.what());
  }
  if (!design.certificate.pass() && !options.force) {
    std::cerr << "design certificate failed; pass --force to simulate anyway\n";
    return kExitCertificate;
  }

  SimConfig sim = design.sim_defaults;
  if (options.t_end) sim.t_end = *options.t_end;
  if (options.samples) sim.samples = *options.samples;
  if (options.perturbation_scale) sim.perturbation_scale = *options.perturbation_scale;
  if (options.seed) sim.seed = *options.seed;
  try {
    if (options.init_mode) sim.init_mode = init_mode_from_string(*options.init_mode);
    const SimTrace trace = simulate(design.stress_normalized, design.config, sim);
    const RateEstimate rate = estimate_rate(trace);
    write_trace_csv(options.out_path, trace, rate.rate);
    std::cout << "samples=" << sim.samples << " t_end=" << format_double(sim.t_end)
              << " rate=" << format_double(rate.rate)
              << (rate.lower_bound ? " (lower bound)" : "") << '\n';
  } catch (const std::exception& error) {
    return input_error(error.what());
  }
  return kExitOk;
}

int cmd_sweep(const std::string& scenario_path, const std::vector<double>& alphas,
              const SweepOptions& options) {
  if (alphas.empty()) return input_error("--alphas must list at least one value");
  for (const double alpha : alphas)
    if (!(alpha > 0.0)) return input_error("every alpha must be positive");

  Prepared prep;
  try {
    prep = prepare(scenario_path, options.tau_override, options.seed_override,
                   options.max_iter_override);
  } catch (const std::exception& error) {
    return input_error(error.what());
  }

  std::ofstream out(options.out_path);
  if (!out) return input_error("cannot write " + options.out_path);
  out << "alpha,M,lambda_min_nonzero,kappa,objective,iterations\n";

  bool any_max_iter = false;
  for (const double alpha : alphas) {
    DesignProblem problem = prep.problem;  // geometry reused, only alpha varies
    problem.alpha = alpha;
    const auto [stress, report] = solve_p1(problem, prep.params);
    any_max_iter |= report.status != SolveStatus::kOptimal;

    const MatrixXd omega = assemble_stress(problem.ordering, stress);
    const EigenDecomposition eig = sym_eig(omega);
    const double top = eig.eigenvalues(eig.eigenvalues.size() - 1);
    double lambda = 0.0, kappa = std::numeric_limits<double>::infinity();
    int m = 0;
    if (top > 0.0) {
      const SpectrumReport spectrum = spectrum_report(omega / top, prep.config.dimension);
      lambda = spectrum.lambda_min_nonzero;
      kappa = spectrum.condition_number;
      m = effective_edges(problem.ordering, stress, prep.tau).count;
    }
    out << format_double(alpha) << ',' << m << ',' << format_double(lambda) << ','
        << format_double(kappa) << ',' << format_double(report.objective) << ','
        << report.iterations << '\n';
  }
  return any_max_iter ? kExitSolver : kExitOk;
}

}  // namespace urf
