#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include "urf/core.hpp"
#include "urf/rigidity.hpp"
#include "urf/sim.hpp"
#include "urf/solver.hpp"

namespace urf {

/// Malformed or inconsistent scenario/result input; message names the field.
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PolygonSpec {
  int n = 0;
  double radius = 1.0;
};

struct RandomSpec {
  int n = 0;
  int d = 2;
  std::uint64_t seed = 0;  // mandatory in scenario files
};

struct ExplicitPositions {
  int dimension = 0;
  MatrixXd positions;  // D x N
};

/// One design task as described by a UTF-8 JSON scenario file. Unknown
/// fields are rejected.
struct Scenario {
  std::variant<ExplicitPositions, PolygonSpec, RandomSpec> source;
  std::optional<double> alpha;  // default: just under alpha_max
  double beta = 1.0;
  double gamma = 0.1;
  SolveParams solver;
  SimConfig sim;
  double tau_rel = 1e-6;

  Configuration materialize(std::optional<std::uint64_t> seed_override = std::nullopt) const;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);

/// Everything cmd_design produces; serializes to design.json and back
/// losslessly (doubles survive the round trip bit-exactly).
struct DesignResult {
  Configuration config;
  double alpha = 0.0;
  double beta = 1.0;
  double gamma = 0.1;
  double tau_rel = 1e-6;
  VectorXd stress_vector;       // raw solution over the canonical ordering
  MatrixXd stress_raw;          // B diag(w) B^T
  MatrixXd stress_normalized;   // unit spectral norm
  EffectiveEdges edges;         // pruned, weights from the normalized stress
  VectorXd spectrum_normalized;
  RigidityCertificate certificate;
  SolveReport solve;
  SimConfig sim_defaults;
};

std::string design_result_to_json(const DesignResult& result);
DesignResult design_result_from_json(const std::string& json_text);
DesignResult load_design_result(const std::filesystem::path& path);

// CSV formats: matrices as full-precision comma-separated rows; edge lists
// with an `i,j,weight` header; traces with a `t,delta` header and a final
// `# rate=<value>` comment line.
void write_matrix_csv(const std::filesystem::path& path, const MatrixXd& m);
MatrixXd read_matrix_csv(const std::filesystem::path& path);
void write_edges_csv(const std::filesystem::path& path, const EffectiveEdges& edges);
void write_trace_csv(const std::filesystem::path& path, const SimTrace& trace, double rate);

/// Shortest string that parses back to exactly the same double.
std::string format_double(double value);

const char* to_string(InitMode mode);
InitMode init_mode_from_string(const std::string& name);

}  // namespace urf
