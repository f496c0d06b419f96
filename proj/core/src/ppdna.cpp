#include "matreg/ppdna.hpp"

#include "matreg/model.hpp"

#include <chrono>
#include <cmath>

namespace matreg {

namespace {

double matrix_penalty_at_prox(const MatrixPenalty& phi, const MatrixProx& eval) {
  if (phi.kind == MatrixPenaltyKind::NuclearNorm)
    return phi.rho * std::get<SvdCertificate>(eval.certificate).output_nuclear_norm();
  return phi.rho * eval.value.cwiseAbs().sum();
}

double elapsed_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void PpdnaConfig::validate() const {
  if (nu <= 0.0) throw std::invalid_argument("PpdnaConfig: nu must be positive");
  if (!(0.0 < sigma0 && sigma0 <= sigma_max))
    throw std::invalid_argument("PpdnaConfig: need 0 < sigma0 <= sigma_max");
  if (sigma_growth < 1.0) throw std::invalid_argument("PpdnaConfig: sigma_growth must be >= 1");
  if (eps0 < 0.0 || eps_decay < 0.0 || eps_decay >= 1.0)
    throw std::invalid_argument("PpdnaConfig: eps schedule must be geometric with decay in [0,1)");
  if (kkt_tol <= 0.0) throw std::invalid_argument("PpdnaConfig: kkt_tol must be positive");
  if (max_outer < 1) throw std::invalid_argument("PpdnaConfig: max_outer must be positive");
  inner.validate();
}

DualPoint eval_dual_point(const ProblemSpec& problem, const OuterState& state,
                          const Vector& xi, double nu, bool with_gradient) {
  const DesignData& d = problem.data;
  const double sigma = state.sigma;
  const double c = sigma / nu;

  const Vector xtxi = d.x_design.transpose() * xi;
  const Matrix b_in = state.b_mat - sigma * mat_map(xtxi, d.mat_rows, d.mat_cols);
  const Vector g_in = state.gamma_vec - sigma * (d.z_design.transpose() * xi);
  const Vector s_in = state.s_vec + c * xi;

  DualPoint point;
  point.prox_b = prox_matrix_penalty(problem.penalty.matrix_penalty, b_in, sigma);
  point.prox_g = prox_vector_penalty(problem.penalty.vector_penalty, g_in, sigma);
  point.prox_s = prox_squared_loss_scaled(s_in, d.response, c);

  const double env_phi = sigma * matrix_penalty_at_prox(problem.penalty.matrix_penalty, point.prox_b) +
                         0.5 * (point.prox_b.value - b_in).squaredNorm();
  const double env_psi =
      sigma * vector_penalty_value(problem.penalty.vector_penalty, point.prox_g.value) +
      0.5 * (point.prox_g.value - g_in).squaredNorm();
  const double env_h = c * 0.5 * (point.prox_s - d.response).squaredNorm() +
                       0.5 * (point.prox_s - s_in).squaredNorm();

  point.phi = (env_phi + env_psi + nu * env_h -
               0.5 * (b_in.squaredNorm() + g_in.squaredNorm() + nu * s_in.squaredNorm()) +
               0.5 * (state.b_mat.squaredNorm() + state.gamma_vec.squaredNorm() +
                      nu * state.s_vec.squaredNorm())) /
              sigma;

  if (with_gradient) complete_dual_gradient(problem, state, xi, nu, point);
  return point;
}

void complete_dual_gradient(const ProblemSpec& problem, const OuterState& state,
                            const Vector& /*xi*/, double /*nu*/, DualPoint& point) {
  (void)state;
  const DesignData& d = problem.data;
  point.pred_candidate = d.x_design * vec_map(point.prox_b.value);
  point.pred_candidate.noalias() += d.z_design * point.prox_g.value;
  point.grad = point.pred_candidate - point.prox_s;
  point.has_gradient = true;
}

double eval_dual_objective(const ProblemSpec& problem, const OuterState& state,
                           const Vector& xi, double nu) {
  return eval_dual_point(problem, state, xi, nu, false).phi;
}

Vector eval_dual_gradient(const ProblemSpec& problem, const OuterState& state,
                          const Vector& xi, double nu) {
  return eval_dual_point(problem, state, xi, nu, true).grad;
}

KktResiduals kkt_residuals(const ProblemSpec& problem, const CoefficientPair& coeff,
                           const Vector& s, const Vector& xi) {
  const DesignData& d = problem.data;
  const Vector xtxi = d.x_design.transpose() * xi;
  const Matrix u_dual = -mat_map(xtxi, d.mat_rows, d.mat_cols);
  const Vector beta_dual = -(d.z_design.transpose() * xi);
  const Vector& w_dual = xi;

  KktResiduals res;
  const Vector pred = predict(d, coeff);
  res.primal = (pred - s).norm() / (1.0 + s.norm());

  const double rd1 = (mat_map(xtxi, d.mat_rows, d.mat_cols) + u_dual).norm() /
                     (1.0 + u_dual.norm());
  const double rd2 = (d.z_design.transpose() * xi + beta_dual).norm() / (1.0 + beta_dual.norm());
  const double rd3 = (w_dual - xi).norm() / (1.0 + xi.norm());
  res.dual = std::max({rd1, rd2, rd3});

  const Matrix pb = prox_matrix_penalty(problem.penalty.matrix_penalty,
                                        coeff.b_mat + u_dual, 1.0).value;
  const Vector pg = prox_vector_penalty(problem.penalty.vector_penalty,
                                        coeff.gamma_vec + beta_dual, 1.0).value;
  const Vector ps = 0.5 * (s + w_dual + d.response);
  const double rc1 = (pb - coeff.b_mat).norm() / (1.0 + coeff.b_mat.norm());
  const double rc2 = (pg - coeff.gamma_vec).norm() / (1.0 + coeff.gamma_vec.norm());
  const double rc3 = (ps - s).norm() / (1.0 + s.norm());
  res.complementarity = std::max({rc1, rc2, rc3});

  res.eta = std::max({res.primal, res.dual, res.complementarity});
  return res;
}

double subproblem_primal_objective(const ProblemSpec& problem, const OuterState& state,
                                   double nu, const DualPoint& point) {
  if (!point.has_gradient)
    throw std::invalid_argument("subproblem_primal_objective: dual point lacks prediction cache");
  const double sigma = state.sigma;
  const Vector residual = point.pred_candidate - problem.data.response;
  double g = 0.5 * residual.squaredNorm();
  g += matrix_penalty_at_prox(problem.penalty.matrix_penalty, point.prox_b);
  g += vector_penalty_value(problem.penalty.vector_penalty, point.prox_g.value);
  g += (point.prox_b.value - state.b_mat).squaredNorm() / (2.0 * sigma);
  g += (point.prox_g.value - state.gamma_vec).squaredNorm() / (2.0 * sigma);
  g += nu / (2.0 * sigma) * (point.pred_candidate - state.s_vec).squaredNorm();
  return g;
}

SubproblemGap check_stop_subproblem(const ProblemSpec& problem, const OuterState& state,
                                    double nu, const DualPoint& point, double eps_k) {
  SubproblemGap result;
  result.gap = subproblem_primal_objective(problem, state, nu, point) - point.phi;
  result.tolerance = eps_k * eps_k / (2.0 * state.sigma);
  // Machine-precision floor: tiny eps_k eventually demands gaps below what
  // float64 objective evaluation can resolve.
  const double floor = 1e-13 * (1.0 + std::abs(point.phi));
  result.accepted = result.gap <= std::max(result.tolerance, floor);
  return result;
}

OuterState primal_update(const OuterState& state, const PpdnaConfig& config,
                         const DualPoint& point, const Vector& xi_new) {
  OuterState next;
  next.b_mat = point.prox_b.value;
  next.gamma_vec = point.prox_g.value;
  next.s_vec = point.prox_s;
  next.xi_vec = xi_new;
  next.sigma = std::min(config.sigma_growth * state.sigma, config.sigma_max);
  next.iteration = state.iteration + 1;
  return next;
}

PpdnaResult solve_ppdna(const ProblemSpec& problem, const PpdnaConfig& config,
                        const std::optional<CoefficientPair>& warm_start) {
  problem.validate();
  config.validate();
  const DesignData& d = problem.data;
  const auto t0 = std::chrono::steady_clock::now();

  OuterState state;
  if (warm_start) {
    state.b_mat = warm_start->b_mat;
    state.gamma_vec = warm_start->gamma_vec;
  } else {
    state.b_mat = Matrix::Zero(d.mat_rows, d.mat_cols);
    state.gamma_vec = Vector::Zero(d.n_vector());
  }
  state.s_vec = predict(d, {state.b_mat, state.gamma_vec});
  state.xi_vec = Vector::Zero(d.n_samples());
  state.sigma = config.sigma0;

  const bool robj_stop =
      config.robj_tol >= 0.0 && std::isfinite(config.obj_star);
  const double grad_floor = 1e-13 * (1.0 + d.response.norm());

  PpdnaResult out;
  out.report.status = SolveStatus::IterationLimit;
  for (int k = 0; k < config.max_outer; ++k) {
    const double eps_k = config.eps0 * std::pow(config.eps_decay, k);
    double grad_tol =
        std::max(std::min(0.1, eps_k) / std::max(1.0, std::sqrt(state.sigma)), grad_floor);

    SsnResult inner = solve_ssn(problem, state, config.nu, config.inner, grad_tol);
    long inner_iters = inner.iterations;
    long cg_iters = inner.cg_iterations;

    // Gap confirmation per the inexactness rule; tighten and resume if needed.
    SubproblemGap gap = check_stop_subproblem(problem, state, config.nu, inner.point, eps_k);
    for (int retry = 0; !gap.accepted && retry < 3; ++retry) {
      grad_tol = std::max(grad_tol * 0.1, grad_floor);
      OuterState restart = state;
      restart.xi_vec = inner.xi;
      SsnResult refined = solve_ssn(problem, restart, config.nu, config.inner, grad_tol);
      if (refined.iterations == 0) break;
      inner_iters += refined.iterations;
      cg_iters += refined.cg_iterations;
      inner = std::move(refined);
      gap = check_stop_subproblem(problem, state, config.nu, inner.point, eps_k);
    }

    if (!inner.xi.allFinite())
      throw std::runtime_error("solve_ppdna: inner solver produced non-finite iterate, last |grad| = " +
                               std::to_string(inner.point.grad.norm()));

    state = primal_update(state, config, inner.point, inner.xi);

    const CoefficientPair coeff{state.b_mat, state.gamma_vec};
    const KktResiduals kkt = kkt_residuals(problem, coeff, state.s_vec, state.xi_vec);
    const double obj = objective(problem, coeff);

    TraceRecord rec;
    rec.iteration = state.iteration;
    rec.objective = obj;
    rec.eta_kkt = kkt.eta;
    rec.dual_objective = inner.point.phi;
    rec.seconds = elapsed_seconds(t0);
    rec.inner_iterations = static_cast<int>(inner_iters);
    rec.cg_iterations = cg_iters;
    out.report.trace.push_back(rec);
    out.report.iterations = state.iteration;
    out.report.inner_iterations += inner_iters;
    out.report.eta_kkt = kkt.eta;
    out.report.objective = obj;
    if (inner.line_search_failed) out.report.message = "line-search fallback used";

    if (kkt.eta < config.kkt_tol) {
      out.report.status = SolveStatus::Converged;
      break;
    }
    if (robj_stop && rel_obj(obj, config.obj_star) < config.robj_tol) {
      out.report.status = SolveStatus::Converged;
      out.report.message = "relative-objective target reached";
      break;
    }
    if (rec.seconds > config.time_limit_seconds) {
      out.report.status = SolveStatus::TimeLimit;
      break;
    }
  }
  out.report.seconds = elapsed_seconds(t0);
  out.coeff = {state.b_mat, state.gamma_vec};
  return out;
}

}  // namespace matreg
