// Command-line front end for the stress design toolkit: design, verify,
// spectrum, simulate, and sweep over scenario files.

#include <CLI11.hpp>
#include <iostream>

#include "urf/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sparse stress matrix design for affine formation control"};
  app.require_subcommand(1);

  std::string scenario_path, stress_path, design_path;

  auto* design = app.add_subcommand("design", "Design, certify, and export a stress matrix");
  urf::DesignOptions design_opts;
  design->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  design->add_option("--out", design_opts.out_dir, "Output directory (default .)");
  double design_tau = 0.0;
  auto* design_tau_opt =
      design->add_option("--tau", design_tau, "Relative edge threshold override");
  std::uint64_t design_seed = 0;
  auto* design_seed_opt = design->add_option("--seed-override", design_seed,
                                             "Replace the random-generator seed");
  int design_max_iter = 0;
  auto* design_iter_opt =
      design->add_option("--max-iter", design_max_iter, "Solver iteration cap override");

  auto* verify = app.add_subcommand("verify", "Check a stress matrix against a scenario");
  verify->add_option("stress", stress_path, "stress.csv to verify")->required();
  verify->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalue report of a stress matrix");
  urf::SpectrumOptions spectrum_opts;
  spectrum->add_option("stress", stress_path, "stress.csv to analyze")->required();
  spectrum->add_option("--out", spectrum_opts.out_path, "Output file (default stdout)");
  spectrum->add_option("--dimension", spectrum_opts.dimension,
                       "Ambient dimension D (default 2)");

  auto* simulate = app.add_subcommand("simulate", "Run the consensus dynamics of a design");
  urf::SimulateOptions sim_opts;
  simulate->add_option("design", design_path, "design.json from `design`")->required();
  simulate->add_option("--out", sim_opts.out_path, "Trace CSV path (default trace.csv)");
  double sim_t_end = 0.0;
  auto* t_end_opt = simulate->add_option("--t-end", sim_t_end, "Simulation horizon");
  int sim_samples = 0;
  auto* samples_opt = simulate->add_option("--samples", sim_samples, "Number of samples");
  std::string sim_init;
  auto* init_opt = simulate->add_option(
      "--init", sim_init, "at-target | perturbed-orthogonal | perturbed-free");
  double sim_scale = 0.0;
  auto* scale_opt = simulate->add_option("--scale", sim_scale, "Perturbation magnitude");
  std::uint64_t sim_seed = 0;
  auto* sim_seed_opt = simulate->add_option("--seed-override", sim_seed, "Perturbation seed");
  simulate->add_flag("--force", sim_opts.force, "Simulate even if the certificate failed");

  auto* sweep = app.add_subcommand("sweep", "Solve across a list of alpha values");
  urf::SweepOptions sweep_opts;
  std::vector<double> alphas;
  sweep->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  sweep->add_option("--alphas", alphas, "Alpha values, one solve per value")
      ->required()
      ->expected(-1);
  sweep->add_option("--out", sweep_opts.out_path, "Sweep CSV path (default sweep.csv)");
  double sweep_tau = 0.0;
  auto* sweep_tau_opt = sweep->add_option("--tau", sweep_tau, "Relative edge threshold");
  std::uint64_t sweep_seed = 0;
  auto* sweep_seed_opt =
      sweep->add_option("--seed-override", sweep_seed, "Replace the random-generator seed");
  int sweep_max_iter = 0;
  auto* sweep_iter_opt =
      sweep->add_option("--max-iter", sweep_max_iter, "Solver iteration cap override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : urf::kExitInput;
  }

  try {
    if (design->parsed()) {
      if (*design_tau_opt) design_opts.tau_override = design_tau;
      if (*design_seed_opt) design_opts.seed_override = design_seed;
      if (*design_iter_opt) design_opts.max_iter_override = design_max_iter;
      return urf::cmd_design(scenario_path, design_opts);
    }
    if (verify->parsed()) return urf::cmd_verify(stress_path, scenario_path);
    if (spectrum->parsed()) return urf::cmd_spectrum(stress_path, spectrum_opts);
    if (simulate->parsed()) {
      if (*t_end_opt) sim_opts.t_end = sim_t_end;
      if (*samples_opt) sim_opts.samples = sim_samples;
      if (*init_opt) sim_opts.init_mode = sim_init;
      if (*scale_opt) sim_opts.perturbation_scale = sim_scale;
      if (*sim_seed_opt) sim_opts.seed = sim_seed;
      return urf::cmd_simulate(design_path, sim_opts);
    }
    if (sweep->parsed()) {
      if (*sweep_tau_opt) sweep_opts.tau_override = sweep_tau;
      if (*sweep_seed_opt) sweep_opts.seed_override = sweep_seed;
      if (*sweep_iter_opt) sweep_opts.max_iter_override = sweep_max_iter;
      return urf::cmd_sweep(scenario_path, alphas, sweep_opts);
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return urf::kExitInput;
  }
  return urf::kExitInput;
}
