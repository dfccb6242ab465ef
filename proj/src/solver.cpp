#include "urf/solver.hpp"

#include <Eigen/Cholesky>
#include <array>
#include <cmath>
#include <limits>

#include "urf/spectral.hpp"

namespace urf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

VectorXd soft_threshold(const VectorXd& v, double t) {
  return v.array().sign() * (v.array().abs() - t).max(0.0);
}

double objective_value(const DesignProblem& problem, const VectorXd& w) {
  return w.lpNorm<1>() - problem.alpha * problem.psi.dot(w);
}

struct Feas {
  Feasibility values;
  bool ok(double gamma, double beta, double slack) const {
    return values.lambda_min_kernel >= gamma - slack &&
           values.lambda_max_stress <= beta + slack && values.equilibrium_inf <= slack;
  }
};

Feas measure_feasibility(const DesignProblem& problem, const VectorXd& w) {
  const MatrixXd lift_kernel =
      problem.psi_mat * w.asDiagonal() * problem.psi_mat.transpose();
  const MatrixXd lift_stress =
      problem.incidence_mat * w.asDiagonal() * problem.incidence_mat.transpose();
  Feas f;
  f.values.lambda_min_kernel = sym_eig(lift_kernel).eigenvalues(0);
  const VectorXd stress_eigs = sym_eig(lift_stress).eigenvalues;
  f.values.lambda_max_stress = stress_eigs(stress_eigs.size() - 1);
  f.values.equilibrium_inf = (problem.e_mat * w).lpNorm<Eigen::Infinity>();
  return f;
}

// Consensus variables and scaled duals of one ADMM run, stored full-length
// so a restricted re-solve can warm-start from them.
struct AdmmState {
  VectorXd omega, z1, z2, u1, u2;
  MatrixXd x, y, ux, uy;
};

struct CoreResult {
  VectorXd candidate;  // kernel-projected iterate, full length
  AdmmState state;
  SolveStatus status = SolveStatus::kMaxIter;
  int iterations = 0;
  double primal_residual = kInf;
  double dual_residual = kInf;
};

VectorXd scatter(const VectorXd& packed, const std::vector<int>& cols, Eigen::Index full) {
  VectorXd out = VectorXd::Zero(full);
  for (std::size_t k = 0; k < cols.size(); ++k) out(cols[k]) = packed(k);
  return out;
}

// One operator-splitting run of the design program, restricted to the edge
// columns in `cols`. Stops on standard ADMM residuals, then certifies the
// kernel-projected iterate against the feasibility slack before accepting;
// on rejection the tolerances are tightened and the iteration continues.
CoreResult admm_core(const DesignProblem& problem, const SolveParams& params, bool use_l1,
                     const std::vector<int>& cols, const AdmmState* warm) {
  const auto mbar = problem.incidence_mat.cols();
  const auto m = static_cast<Eigen::Index>(cols.size());
  const auto n1 = problem.psi_mat.rows();
  const auto n = problem.incidence_mat.rows();
  const double orel = params.over_relaxation;
  const double gamma = problem.gamma;
  const double beta = problem.beta;
  const double slack = 0.5 * kFeasTolerance * beta;

  MatrixXd psi_m(n1, m), inc_m(n, m), e_m(problem.e_mat.rows(), m);
  VectorXd psi_v(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    psi_m.col(k) = problem.psi_mat.col(cols[k]);
    inc_m.col(k) = problem.incidence_mat.col(cols[k]);
    e_m.col(k) = problem.e_mat.col(cols[k]);
    psi_v(k) = problem.psi(cols[k]);
  }

  // projector onto ker(E) restricted to the kept columns
  const EigenDecomposition egram = sym_eig(e_m.transpose() * e_m);
  const double epeak = egram.eigenvalues.size() ? egram.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  Eigen::Index kdim = 0;
  while (kdim < m && std::abs(egram.eigenvalues(kdim)) <= 1e-10 * std::max(epeak, 1e-300))
    ++kdim;
  const MatrixXd kbasis = egram.eigenvectors.leftCols(kdim);
  const MatrixXd ker_proj = kbasis * kbasis.transpose();

  // omega-update system: 2I + (Psi^T Psi)^{.2} + (B^T B)^{.2}, factored once
  MatrixXd h = 2.0 * MatrixXd::Identity(m, m);
  h += (psi_m.transpose() * psi_m).array().square().matrix();
  h += (inc_m.transpose() * inc_m).array().square().matrix();
  const Eigen::LLT<MatrixXd> h_factor(h);

  const auto lift1 = [&](const VectorXd& v) -> MatrixXd {
    return psi_m * v.asDiagonal() * psi_m.transpose();
  };
  const auto lift2 = [&](const VectorXd& v) -> MatrixXd {
    return inc_m * v.asDiagonal() * inc_m.transpose();
  };
  const auto adj1 = [&](const MatrixXd& s) -> VectorXd {
    return (s * psi_m).cwiseProduct(psi_m).colwise().sum().transpose();
  };
  const auto adj2 = [&](const MatrixXd& s) -> VectorXd {
    return (s * inc_m).cwiseProduct(inc_m).colwise().sum().transpose();
  };

  VectorXd omega = VectorXd::Zero(m), z1 = VectorXd::Zero(m), z2 = VectorXd::Zero(m);
  VectorXd u1 = VectorXd::Zero(m), u2 = VectorXd::Zero(m);
  MatrixXd x = MatrixXd::Zero(n1, n1), y = MatrixXd::Zero(n, n);
  MatrixXd ux = MatrixXd::Zero(n1, n1), uy = MatrixXd::Zero(n, n);
  if (warm) {
    for (Eigen::Index k = 0; k < m; ++k) {
      omega(k) = warm->omega(cols[k]);
      z1(k) = warm->z1(cols[k]);
      z2(k) = warm->z2(cols[k]);
      u1(k) = warm->u1(cols[k]);
      u2(k) = warm->u2(cols[k]);
    }
    x = warm->x;
    y = warm->y;
    ux = warm->ux;
    uy = warm->uy;
  }

  const double dim_primal = std::sqrt(double(2 * m + n1 * n1 + n * n));
  const double dim_dual = std::sqrt(double(m));
  double eps_abs = params.eps_abs;
  double eps_rel = params.eps_rel;
  const double rho = params.rho;

  CoreResult result;
  for (int it = 0; it < params.max_iter; ++it) {
    const VectorXd rhs = (z1 - u1) + (z2 - u2) + adj1(x - ux) + adj2(y - uy);
    omega = h_factor.solve(rhs);
    const MatrixXd lo1 = lift1(omega);
    const MatrixXd lo2 = lift2(omega);

    const VectorXd h1 = orel * omega + (1.0 - orel) * z1;
    const VectorXd h2 = orel * omega + (1.0 - orel) * z2;
    const MatrixXd hx = orel * lo1 + (1.0 - orel) * x;
    const MatrixXd hy = orel * lo2 + (1.0 - orel) * y;

    const VectorXd z1_old = z1, z2_old = z2;
    const MatrixXd x_old = x, y_old = y;
    if (use_l1)
      z1 = soft_threshold(h1 + u1 + (problem.alpha / rho) * psi_v, 1.0 / rho);
    else
      z1 = h1 + u1 + (problem.alpha / rho) * psi_v;
    z2 = ker_proj * (h2 + u2);
    x = clamp_eigs(hx + ux, gamma, kInf);
    y = clamp_eigs(hy + uy, 0.0, beta);

    u1 += h1 - z1;
    u2 += h2 - z2;
    ux += hx - x;
    uy += hy - y;

    const double r = std::sqrt((omega - z1).squaredNorm() + (omega - z2).squaredNorm() +
                               (lo1 - x).squaredNorm() + (lo2 - y).squaredNorm());
    const double s =
        rho * ((z1 - z1_old) + (z2 - z2_old) + adj1(x - x_old) + adj2(y - y_old)).norm();
    result.primal_residual = r;
    result.dual_residual = s;
    result.iterations = it + 1;

    const double ax_norm =
        std::sqrt(2.0 * omega.squaredNorm() + lo1.squaredNorm() + lo2.squaredNorm());
    const double z_norm =
        std::sqrt(z1.squaredNorm() + z2.squaredNorm() + x.squaredNorm() + y.squaredNorm());
    const double dual_scale = rho * (u1 + u2 + adj1(ux) + adj2(uy)).norm();
    if (r <= dim_primal * eps_abs + eps_rel * std::max(ax_norm, z_norm) &&
        s <= dim_dual * eps_abs + eps_rel * dual_scale) {
      const VectorXd cand = scatter(ker_proj * omega, cols, mbar);
      if (measure_feasibility(problem, cand).ok(gamma, beta, slack)) {
        result.candidate = cand;
        result.status = SolveStatus::kOptimal;
        break;
      }
      // residuals converged but the iterate does not certify yet
      eps_abs *= 0.25;
      eps_rel *= 0.25;
    }
  }
  if (result.status != SolveStatus::kOptimal)
    result.candidate = scatter(ker_proj * omega, cols, mbar);

  result.state.omega = scatter(omega, cols, mbar);
  result.state.z1 = scatter(z1, cols, mbar);
  result.state.z2 = scatter(z2, cols, mbar);
  result.state.u1 = scatter(u1, cols, mbar);
  result.state.u2 = scatter(u2, cols, mbar);
  result.state.x = x;
  result.state.y = y;
  result.state.ux = ux;
  result.state.uy = uy;
  return result;
}

std::vector<int> all_columns(Eigen::Index mbar) {
  std::vector<int> cols(mbar);
  for (Eigen::Index k = 0; k < mbar; ++k) cols[k] = static_cast<int>(k);
  return cols;
}

std::vector<int> support_above(const VectorXd& w, double cut) {
  std::vector<int> cols;
  for (Eigen::Index k = 0; k < w.size(); ++k)
    if (std::abs(w(k)) > cut) cols.push_back(static_cast<int>(k));
  return cols;
}

SolveReport make_report(const DesignProblem& problem, const CoreResult& core, int total_iters,
                        const VectorXd& returned) {
  SolveReport report;
  report.status = core.status;
  report.iterations = total_iters;
  report.primal_residual = core.primal_residual;
  report.dual_residual = core.dual_residual;
  report.objective = objective_value(problem, returned);
  report.feasibility = measure_feasibility(problem, returned).values;
  return report;
}

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kMaxIter: return "max-iter";
    case SolveStatus::kInfeasibleDetected: return "infeasible-detected";
  }
  return "unknown";
}

std::pair<VectorXd, SolveReport> solve_p1(const DesignProblem& problem,
                                          const SolveParams& params) {
  if (params.max_iter < 1 || params.eps_abs <= 0.0 || params.eps_rel <= 0.0 ||
      params.rho <= 0.0)
    throw std::invalid_argument("invalid solver parameters");
  const auto mbar = problem.incidence_mat.cols();
  if (problem.gamma > problem.beta) {
    VectorXd zero = VectorXd::Zero(mbar);
    SolveReport report;
    report.status = SolveStatus::kInfeasibleDetected;
    report.objective = 0.0;
    report.feasibility = measure_feasibility(problem, zero).values;
    return {std::move(zero), report};
  }

  CoreResult base = admm_core(problem, params, true, all_columns(mbar), nullptr);
  int total_iters = base.iterations;
  if (base.status != SolveStatus::kOptimal)
    return {base.candidate, make_report(problem, base, total_iters, base.candidate)};

  // The converged iterate can carry edges that are artifacts of finite
  // tolerance. Try the sparsest plausible support first: drop relatively
  // small entries, re-solve restricted to the rest (warm started), and keep
  // the result only if it certifies and does not worsen the objective.
  const double base_obj = objective_value(problem, base.candidate);
  const double obj_slack = 1e-4 * std::max(1.0, std::abs(base_obj));
  const double peak = base.candidate.cwiseAbs().maxCoeff();
  CoreResult* chosen = &base;
  CoreResult refined;
  if (peak > 0.0) {
    for (const double tau : std::array{1e-3, 1e-4, 1e-5}) {
      const std::vector<int> cols = support_above(base.candidate, tau * peak);
      if (cols.size() == static_cast<std::size_t>(mbar) || cols.empty()) break;
      CoreResult trial = admm_core(problem, params, true, cols, &base.state);
      total_iters += trial.iterations;
      if (trial.status == SolveStatus::kOptimal &&
          objective_value(problem, trial.candidate) <= base_obj + obj_slack) {
        refined = std::move(trial);
        chosen = &refined;
        break;
      }
    }
  }
  return {chosen->candidate, make_report(problem, *chosen, total_iters, chosen->candidate)};
}

PolishResult polish(const DesignProblem& problem, const VectorXd& stress, double tau_rel,
                    const SolveParams& params) {
  if (stress.size() != problem.incidence_mat.cols())
    throw std::invalid_argument("stress vector length does not match problem");
  PolishResult result;
  result.stress = stress;
  const double peak = stress.cwiseAbs().maxCoeff();
  const std::vector<int> cols =
      peak > 0.0 ? support_above(stress, tau_rel * peak) : std::vector<int>{};
  if (cols.empty()) {
    result.report = make_report(problem, CoreResult{}, 0, stress);
    return result;
  }
  CoreResult core = admm_core(problem, params, false, cols, nullptr);
  if (core.status == SolveStatus::kOptimal) {
    result.stress = core.candidate;
    result.polished = true;
  }
  result.report = make_report(problem, core, core.iterations, result.stress);
  return result;
}

MatrixXd normalize_stress(const MatrixXd& omega) {
  const EigenDecomposition eig = sym_eig(omega);
  const double top = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (!(top > 0.0)) throw std::invalid_argument("stress matrix must be nonzero and PSD");
  return omega / top;
}

}  // namespace urf
