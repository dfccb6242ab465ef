#pragma once

#include <optional>
#include <string>
#include <vector>

#include "urf/scenario.hpp"

namespace urf {

// Exit-code contract shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;        // parse/validation failure
inline constexpr int kExitCertificate = 3;  // rigidity certificate failed
inline constexpr int kExitSolver = 4;       // solver stopped at max-iter

struct DesignOptions {
  std::string out_dir = ".";
  std::optional<double> tau_override;
  std::optional<std::uint64_t> seed_override;
  std::optional<int> max_iter_override;
};

/// Full pipeline: scenario -> problem -> solve -> normalize -> certify.
/// Writes design.json, stress.csv (normalized), edges.csv into out_dir.
int cmd_design(const std::string& scenario_path, const DesignOptions& options);

/// Certificate of a stress matrix (stress.csv) against a scenario's
/// configuration. Exit 0 on pass, 3 on fail.
int cmd_verify(const std::string& stress_csv_path, const std::string& scenario_path);

struct SpectrumOptions {
  std::string out_path;  // empty: print to stdout
  int dimension = 2;
};

int cmd_spectrum(const std::string& stress_csv_path, const SpectrumOptions& options);

struct SimulateOptions {
  std::string out_path = "trace.csv";
  std::optional<double> t_end;
  std::optional<int> samples;
  std::optional<std::string> init_mode;
  std::optional<double> perturbation_scale;
  std::optional<std::uint64_t> seed;
  bool force = false;  // simulate even if the stored certificate failed
};

/// Simulates the consensus dynamics of a design.json and writes trace.csv
/// with a `# rate=` footer.
int cmd_simulate(const std::string& design_json_path, const SimulateOptions& options);

struct SweepOptions {
  std::string out_path = "sweep.csv";
  std::optional<double> tau_override;
  std::optional<std::uint64_t> seed_override;
  std::optional<int> max_iter_override;
};

/// Independent solves across the alpha list; one CSV row per alpha in
/// input order.
int cmd_sweep(const std::string& scenario_path, const std::vector<double>& alphas,
              const SweepOptions& options);

}  // namespace urf
