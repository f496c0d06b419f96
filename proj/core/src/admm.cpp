#include "matreg/admm.hpp"

#include "matreg/model.hpp"
#include "matreg/prox.hpp"

#include <Eigen/Cholesky>

#include <chrono>
#include <cmath>

namespace matreg {

void AdmmConfig::validate() const {
  if (sigma <= 0.0) throw std::invalid_argument("AdmmConfig: sigma must be positive");
  const double golden = 0.5 * (1.0 + std::sqrt(5.0));
  if (!(step_tau > 0.0 && step_tau < golden))
    throw std::invalid_argument("AdmmConfig: step_tau must lie in (0, (1+sqrt(5))/2)");
  if (max_iter < 1) throw std::invalid_argument("AdmmConfig: max_iter must be positive");
  if (kkt_tol <= 0.0) throw std::invalid_argument("AdmmConfig: kkt_tol must be positive");
}

namespace {

struct FullKkt {
  double primal, dual, complementarity, eta;
};

FullKkt admm_kkt(const ProblemSpec& problem, const Matrix& B, const Vector& gamma,
                 const Vector& s, const Vector& xi, const Vector& w, const Matrix& U,
                 const Vector& beta, const Matrix& xtxi_mat, const Vector& ztxi) {
  const DesignData& d = problem.data;
  FullKkt res{};
  const Vector pred = d.x_design * vec_map(B) + d.z_design * gamma;
  res.primal = (pred - s).norm() / (1.0 + s.norm());
  const double rd1 = (xtxi_mat + U).norm() / (1.0 + U.norm());
  const double rd2 = (ztxi + beta).norm() / (1.0 + beta.norm());
  const double rd3 = (w - xi).norm() / (1.0 + xi.norm());
  res.dual = std::max({rd1, rd2, rd3});
  const Matrix pb = prox_matrix_penalty(problem.penalty.matrix_penalty, B + U, 1.0).value;
  const Vector pg = prox_vector_penalty(problem.penalty.vector_penalty, gamma + beta, 1.0).value;
  const Vector ps = 0.5 * (s + w + d.response);
  const double rc1 = (pb - B).norm() / (1.0 + B.norm());
  const double rc2 = (pg - gamma).norm() / (1.0 + gamma.norm());
  const double rc3 = (ps - s).norm() / (1.0 + s.norm());
  res.complementarity = std::max({rc1, rc2, rc3});
  res.eta = std::max({res.primal, res.dual, res.complementarity});
  return res;
}

}  // namespace

AdmmResult solve_admm(const ProblemSpec& problem, const AdmmConfig& config) {
  problem.validate();
  config.validate();
  const DesignData& d = problem.data;
  const Index n = d.n_samples();
  const double sig = config.sigma;
  const double tau = config.step_tau;
  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  // Cached SPD factorization for the xi-update.
  Matrix gram = Matrix::Identity(n, n);
  gram.noalias() += d.x_design * d.x_design.transpose();
  gram.noalias() += d.z_design * d.z_design.transpose();
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("solve_admm: factorization of I + XX^T + ZZ^T failed");

  Vector xi = Vector::Zero(n), w = Vector::Zero(n);
  Matrix U = Matrix::Zero(d.mat_rows, d.mat_cols);
  Vector beta = Vector::Zero(d.n_vector());
  Matrix B = Matrix::Zero(d.mat_rows, d.mat_cols);
  Vector gamma = Vector::Zero(d.n_vector());
  Vector s = Vector::Zero(n);

  const bool robj_stop = config.robj_tol >= 0.0 && std::isfinite(config.obj_star);

  AdmmResult out;
  out.report.status = SolveStatus::IterationLimit;
  for (long k = 0; k < config.max_iter; ++k) {
    // (1) xi-update through the cached factorization
    const Matrix bu = B / sig - U;
    Vector rhs = d.x_design * vec_map(bu);
    rhs.noalias() += d.z_design * (gamma / sig - beta);
    rhs += w - s / sig;
    xi = llt.solve(rhs);

    // (2) (w, U, beta) via the Moreau decompositions
    const Vector xtxi = d.x_design.transpose() * xi;
    const Matrix xtxi_mat = mat_map(xtxi, d.mat_rows, d.mat_cols);
    const Vector ztxi = d.z_design.transpose() * xi;

    const Vector prox_h = prox_squared_loss_scaled(sig * xi + s, d.response, sig);
    w = xi + s / sig - prox_h / sig;

    const Matrix prox_phi =
        prox_matrix_penalty(problem.penalty.matrix_penalty, B - sig * xtxi_mat, sig).value;
    U = B / sig - xtxi_mat - prox_phi / sig;

    const Vector prox_psi =
        prox_vector_penalty(problem.penalty.vector_penalty, gamma - sig * ztxi, sig).value;
    beta = gamma / sig - ztxi - prox_psi / sig;

    // (3) multiplier updates with step tau*sigma
    B -= tau * sig * (xtxi_mat + U);
    gamma -= tau * sig * (ztxi + beta);
    s -= tau * sig * (w - xi);

    const FullKkt kkt = admm_kkt(problem, B, gamma, s, xi, w, U, beta, xtxi_mat, ztxi);
    const double obj = objective(problem, {B, gamma});

    if ((k + 1) % config.trace_stride == 0 || kkt.eta < config.kkt_tol) {
      TraceRecord rec;
      rec.iteration = static_cast<int>(k + 1);
      rec.objective = obj;
      rec.eta_kkt = kkt.eta;
      rec.seconds = elapsed();
      out.report.trace.push_back(rec);
    }
    out.report.iterations = static_cast<int>(k + 1);
    out.report.eta_kkt = kkt.eta;
    out.report.objective = obj;

    if (kkt.eta < config.kkt_tol) {
      out.report.status = SolveStatus::Converged;
      break;
    }
    if (robj_stop && rel_obj(obj, config.obj_star) < config.robj_tol) {
      out.report.status = SolveStatus::Converged;
      out.report.message = "relative-objective target reached";
      break;
    }
    if (elapsed() > config.time_limit_seconds) {
      out.report.status = SolveStatus::TimeLimit;
      break;
    }
  }
  out.report.seconds = elapsed();
  out.coeff = {B, gamma};
  return out;
}

}  // namespace matreg
