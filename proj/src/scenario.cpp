#include "urf/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace urf {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message) { throw ScenarioError(message); }

void reject_unknown(const json& object, const char* where,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* name : allowed)
      if (key == name) {
        known = true;
        break;
      }
    if (!known) fail(std::string("unknown field `") + key + "` in " + where);
  }
}

double require_number(const json& object, const char* where, const char* key) {
  if (!object.contains(key)) fail(std::string(where) + " is missing `" + key + "`");
  const json& value = object.at(key);
  if (!value.is_number()) fail(std::string(where) + ".`" + key + "` must be a number");
  return value.get<double>();
}

int require_int(const json& object, const char* where, const char* key) {
  if (!object.contains(key)) fail(std::string(where) + " is missing `" + key + "`");
  const json& value = object.at(key);
  if (!value.is_number_integer()) fail(std::string(where) + ".`" + key + "` must be an integer");
  return value.get<int>();
}

double optional_number(const json& object, const char* where, const char* key,
                       double fallback) {
  if (!object.contains(key)) return fallback;
  const json& value = object.at(key);
  if (!value.is_number()) fail(std::string(where) + ".`" + key + "` must be a number");
  return value.get<double>();
}

// JSON has no infinity; non-finite values are stored as null
json finite_or_null(double value) {
  return std::isfinite(value) ? json(value) : json(nullptr);
}

double double_or_infinity(const json& value) {
  return value.is_null() ? std::numeric_limits<double>::infinity() : value.get<double>();
}

std::uint64_t require_seed(const json& object, const char* where) {
  if (!object.contains("seed")) fail(std::string(where) + ".seed is mandatory");
  const json& value = object.at("seed");
  if (!value.is_number_integer() && !value.is_number_unsigned())
    fail(std::string(where) + ".seed must be an integer");
  return value.get<std::uint64_t>();
}

json parse_text(const std::string& text) {
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded()) fail("input is not valid JSON");
  return parsed;
}

SolveParams parse_solver(const json& object) {
  reject_unknown(object, "solver", {"rho", "max_iter", "eps_abs", "eps_rel", "over_relaxation"});
  SolveParams params;
  params.rho = optional_number(object, "solver", "rho", params.rho);
  if (object.contains("max_iter")) params.max_iter = require_int(object, "solver", "max_iter");
  params.eps_abs = optional_number(object, "solver", "eps_abs", params.eps_abs);
  params.eps_rel = optional_number(object, "solver", "eps_rel", params.eps_rel);
  params.over_relaxation =
      optional_number(object, "solver", "over_relaxation", params.over_relaxation);
  if (params.max_iter < 1) fail("solver.max_iter must be at least 1");
  if (params.eps_abs <= 0.0 || params.eps_rel <= 0.0) fail("solver tolerances must be positive");
  if (params.over_relaxation < 1.0 || params.over_relaxation > 1.8)
    fail("solver.over_relaxation must lie in [1, 1.8]");
  return params;
}

SimConfig parse_sim(const json& object) {
  reject_unknown(object, "sim", {"t_end", "samples", "init_mode", "perturbation_scale", "seed"});
  SimConfig sim;
  sim.t_end = optional_number(object, "sim", "t_end", sim.t_end);
  if (object.contains("samples")) sim.samples = require_int(object, "sim", "samples");
  if (object.contains("init_mode")) {
    const json& mode = object.at("init_mode");
    if (!mode.is_string()) fail("sim.init_mode must be a string");
    sim.init_mode = init_mode_from_string(mode.get<std::string>());
  }
  if (object.contains("perturbation_scale"))
    sim.perturbation_scale = require_number(object, "sim", "perturbation_scale");
  if (object.contains("seed")) sim.seed = require_seed(object, "sim");
  if (!(sim.t_end > 0.0)) fail("sim.t_end must be positive");
  if (sim.samples < 2) fail("sim.samples must be at least 2");
  if (sim.perturbation_scale && *sim.perturbation_scale < 0.0)
    fail("sim.perturbation_scale must be nonnegative");
  return sim;
}

MatrixXd parse_positions(const json& rows, int dimension) {
  if (!rows.is_array() || rows.empty()) fail("positions must be a nonempty array");
  const auto n = rows.size();
  MatrixXd positions(dimension, static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const json& row = rows.at(k);
    if (!row.is_array() || row.size() != static_cast<std::size_t>(dimension))
      fail("each position must list exactly `dimension` coordinates");
    for (int c = 0; c < dimension; ++c) {
      if (!row.at(c).is_number()) fail("position coordinates must be numbers");
      positions(c, static_cast<Eigen::Index>(k)) = row.at(c).get<double>();
    }
  }
  return positions;
}

json certificate_to_json(const RigidityCertificate& cert) {
  return json{{"pass", cert.pass()},
              {"psd_ok", cert.psd_ok},
              {"rank_ok", cert.rank_ok},
              {"nullspace_ok", cert.nullspace_ok},
              {"lambda_min_nonzero", cert.lambda_min_nonzero},
              {"condition_number", finite_or_null(cert.condition_number)},
              {"edges_effective", cert.edges_effective},
              {"generic_assumed", cert.generic_assumed},
              {"tolerances",
               {{"psd", cert.tolerances.psd},
                {"nullspace", cert.tolerances.nullspace},
                {"rank", cert.tolerances.rank},
                {"edge", cert.tolerances.edge}}}};
}

RigidityCertificate certificate_from_json(const json& object) {
  RigidityCertificate cert;
  cert.psd_ok = object.at("psd_ok").get<bool>();
  cert.rank_ok = object.at("rank_ok").get<bool>();
  cert.nullspace_ok = object.at("nullspace_ok").get<bool>();
  cert.lambda_min_nonzero = object.at("lambda_min_nonzero").get<double>();
  cert.condition_number = double_or_infinity(object.at("condition_number"));
  cert.edges_effective = object.at("edges_effective").get<int>();
  cert.generic_assumed = object.at("generic_assumed").get<bool>();
  const json& tols = object.at("tolerances");
  cert.tolerances.psd = tols.at("psd").get<double>();
  cert.tolerances.nullspace = tols.at("nullspace").get<double>();
  cert.tolerances.rank = tols.at("rank").get<double>();
  cert.tolerances.edge = tols.at("edge").get<double>();
  return cert;
}

json matrix_to_json(const MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXd matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) fail("matrix must be a nonempty array of rows");
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.at(0).size());
  MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const json& row = rows.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != c) fail("matrix rows have unequal length");
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
  }
  return m;
}

json vector_to_json(const VectorXd& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

VectorXd vector_from_json(const json& values) {
  VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = values.at(static_cast<std::size_t>(k)).get<double>();
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) fail("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return buffer.str();
}

}  // namespace

const char* to_string(InitMode mode) {
  switch (mode) {
    case InitMode::kAtTarget: return "at-target";
    case InitMode::kPerturbedOrthogonal: return "perturbed-orthogonal";
    case InitMode::kPerturbedFree: return "perturbed-free";
  }
  return "unknown";
}

InitMode init_mode_from_string(const std::string& name) {
  if (name == "at-target") return InitMode::kAtTarget;
  if (name == "perturbed-orthogonal") return InitMode::kPerturbedOrthogonal;
  if (name == "perturbed-free") return InitMode::kPerturbedFree;
  fail("unknown init_mode `" + name + "`");
}

Scenario parse_scenario(const std::string& json_text) {
  const json root = parse_text(json_text);
  if (!root.is_object()) fail("scenario root must be a JSON object");
  reject_unknown(root, "scenario",
                 {"dimension", "positions", "polygon", "random", "alpha", "beta", "gamma",
                  "solver", "sim", "tau_rel"});

  const int sources = int(root.contains("positions")) + int(root.contains("polygon")) +
                      int(root.contains("random"));
  if (sources != 1) fail("exactly one of `positions`, `polygon`, `random` is required");

  Scenario scenario;
  if (root.contains("positions")) {
    if (!root.contains("dimension")) fail("`dimension` is required with explicit positions");
    const int dimension = require_int(root, "scenario", "dimension");
    if (dimension < 1) fail("dimension must be positive");
    scenario.source = ExplicitPositions{dimension, parse_positions(root.at("positions"), dimension)};
  } else if (root.contains("polygon")) {
    const json& spec = root.at("polygon");
    reject_unknown(spec, "polygon", {"n", "radius"});
    PolygonSpec polygon;
    polygon.n = require_int(spec, "polygon", "n");
    polygon.radius = optional_number(spec, "polygon", "radius", 1.0);
    if (root.contains("dimension") && require_int(root, "scenario", "dimension") != 2)
      fail("polygon scenarios are two-dimensional");
    scenario.source = polygon;
  } else {
    const json& spec = root.at("random");
    reject_unknown(spec, "random", {"n", "d", "seed"});
    RandomSpec random;
    random.n = require_int(spec, "random", "n");
    random.d = require_int(spec, "random", "d");
    random.seed = require_seed(spec, "random");
    if (root.contains("dimension") && require_int(root, "scenario", "dimension") != random.d)
      fail("`dimension` conflicts with random.d");
    scenario.source = random;
  }

  if (root.contains("alpha")) {
    scenario.alpha = require_number(root, "scenario", "alpha");
    if (!(*scenario.alpha > 0.0)) fail("alpha must be positive");
  }
  scenario.beta = optional_number(root, "scenario", "beta", scenario.beta);
  scenario.gamma = optional_number(root, "scenario", "gamma", scenario.gamma);
  if (!(scenario.beta > scenario.gamma && scenario.gamma > 0.0))
    fail("hyperparameters must satisfy beta > gamma > 0");
  scenario.tau_rel = optional_number(root, "scenario", "tau_rel", scenario.tau_rel);
  if (!(scenario.tau_rel > 0.0 && scenario.tau_rel < 1.0)) fail("tau_rel must lie in (0, 1)");
  if (root.contains("solver")) scenario.solver = parse_solver(root.at("solver"));
  if (root.contains("sim")) scenario.sim = parse_sim(root.at("sim"));
  return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path));
}

Configuration Scenario::materialize(std::optional<std::uint64_t> seed_override) const {
  if (const auto* explicit_pos = std::get_if<ExplicitPositions>(&source)) {
    if (seed_override) fail("--seed-override requires a random scenario");
    return make_configuration(explicit_pos->dimension, explicit_pos->positions);
  }
  if (const auto* polygon = std::get_if<PolygonSpec>(&source)) {
    if (seed_override) fail("--seed-override requires a random scenario");
    return regular_polygon(polygon->n, polygon->radius);
  }
  const auto& random = std::get<RandomSpec>(source);
  return random_generic(random.n, random.d, seed_override ? *seed_override : random.seed);
}

std::string design_result_to_json(const DesignResult& result) {
  json edges = json::array();
  for (int k = 0; k < result.edges.count; ++k)
    edges.push_back({{"i", result.edges.edges[k].i},
                     {"j", result.edges.edges[k].j},
                     {"weight", result.edges.weights(k)}});

  json positions = json::array();
  for (int k = 0; k < result.config.count(); ++k) {
    json row = json::array();
    for (int c = 0; c < result.config.dimension; ++c)
      row.push_back(result.config.positions(c, k));
    positions.push_back(std::move(row));
  }

  const json root{
      {"configuration", {{"dimension", result.config.dimension}, {"positions", positions}}},
      {"hyperparameters",
       {{"alpha", result.alpha},
        {"beta", result.beta},
        {"gamma", result.gamma},
        {"tau_rel", result.tau_rel}}},
      {"solve",
       {{"status", to_string(result.solve.status)},
        {"iterations", result.solve.iterations},
        {"primal_residual", result.solve.primal_residual},
        {"dual_residual", result.solve.dual_residual},
        {"objective", result.solve.objective},
        {"feasibility",
         {{"lambda_min_kernel", result.solve.feasibility.lambda_min_kernel},
          {"lambda_max_stress", result.solve.feasibility.lambda_max_stress},
          {"equilibrium_inf", result.solve.feasibility.equilibrium_inf}}}}},
      {"stress_vector", vector_to_json(result.stress_vector)},
      {"stress_matrix_raw", matrix_to_json(result.stress_raw)},
      {"stress_matrix_normalized", matrix_to_json(result.stress_normalized)},
      {"edges", edges},
      {"edge_count", result.edges.count},
      {"spectrum_normalized", vector_to_json(result.spectrum_normalized)},
      {"certificate", certificate_to_json(result.certificate)},
      {"sim_defaults",
       {{"t_end", result.sim_defaults.t_end},
        {"samples", result.sim_defaults.samples},
        {"init_mode", to_string(result.sim_defaults.init_mode)},
        {"seed", result.sim_defaults.seed}}}};
  return root.dump(2) + "\n";
}

DesignResult design_result_from_json(const std::string& json_text) {
  const json root = parse_text(json_text);
  try {
    DesignResult result;
    const json& config = root.at("configuration");
    const int dimension = config.at("dimension").get<int>();
    result.config =
        make_configuration(dimension, parse_positions(config.at("positions"), dimension));

    const json& hyper = root.at("hyperparameters");
    result.alpha = hyper.at("alpha").get<double>();
    result.beta = hyper.at("beta").get<double>();
    result.gamma = hyper.at("gamma").get<double>();
    result.tau_rel = hyper.at("tau_rel").get<double>();

    const json& solve = root.at("solve");
    const std::string status = solve.at("status").get<std::string>();
    result.solve.status = status == "optimal"    ? SolveStatus::kOptimal
                          : status == "max-iter" ? SolveStatus::kMaxIter
                                                 : SolveStatus::kInfeasibleDetected;
    result.solve.iterations = solve.at("iterations").get<int>();
    result.solve.primal_residual = solve.at("primal_residual").get<double>();
    result.solve.dual_residual = solve.at("dual_residual").get<double>();
    result.solve.objective = solve.at("objective").get<double>();
    const json& feas = solve.at("feasibility");
    result.solve.feasibility.lambda_min_kernel = feas.at("lambda_min_kernel").get<double>();
    result.solve.feasibility.lambda_max_stress = feas.at("lambda_max_stress").get<double>();
    result.solve.feasibility.equilibrium_inf = feas.at("equilibrium_inf").get<double>();

    result.stress_vector = vector_from_json(root.at("stress_vector"));
    result.stress_raw = matrix_from_json(root.at("stress_matrix_raw"));
    result.stress_normalized = matrix_from_json(root.at("stress_matrix_normalized"));

    for (const json& edge : root.at("edges")) {
      result.edges.edges.push_back({edge.at("i").get<int>(), edge.at("j").get<int>()});
    }
    result.edges.count = root.at("edge_count").get<int>();
    result.edges.weights.resize(result.edges.count);
    for (int k = 0; k < result.edges.count; ++k)
      result.edges.weights(k) = root.at("edges").at(k).at("weight").get<double>();

    result.spectrum_normalized = vector_from_json(root.at("spectrum_normalized"));
    result.certificate = certificate_from_json(root.at("certificate"));

    const json& sim = root.at("sim_defaults");
    result.sim_defaults.t_end = sim.at("t_end").get<double>();
    result.sim_defaults.samples = sim.at("samples").get<int>();
    result.sim_defaults.init_mode = init_mode_from_string(sim.at("init_mode").get<std::string>());
    result.sim_defaults.seed = sim.at("seed").get<std::uint64_t>();
    return result;
  } catch (const json::exception& error) {
    fail(std::string("malformed design result: ") + error.what());
  }
}

DesignResult load_design_result(const std::filesystem::path& path) {
  return design_result_from_json(read_file(path));
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_matrix_csv(const std::filesystem::path& path, const MatrixXd& m) {
  std::ofstream out(path);
  if (!out) fail("cannot write " + path.string());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &used);
      } catch (const std::exception&) {
        fail(path.string() + ":" + std::to_string(line_number) + ": not a number: `" + cell + "`");
      }
      row.push_back(value);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      fail(path.string() + ":" + std::to_string(line_number) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(path.string() + ": empty matrix");
  MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_edges_csv(const std::filesystem::path& path, const EffectiveEdges& edges) {
  std::ofstream out(path);
  if (!out) fail("cannot write " + path.string());
  out << "i,j,weight\n";
  for (int k = 0; k < edges.count; ++k)
    out << edges.edges[k].i << ',' << edges.edges[k].j << ','
        << format_double(edges.weights(k)) << '\n';
}

void write_trace_csv(const std::filesystem::path& path, const SimTrace& trace, double rate) {
  std::ofstream out(path);
  if (!out) fail("cannot write " + path.string());
  out << "t,delta\n";
  for (Eigen::Index k = 0; k < trace.times.size(); ++k)
    out << format_double(trace.times(k)) << ',' << format_double(trace.delta(k)) << '\n';
  out << "# rate=" << format_double(rate) << '\n';
}

}  // namespace urf
