#include "matreg/ssn.hpp"

#include "matreg/linalg.hpp"
#include "matreg/model.hpp"
#include "matreg/ppdna.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace matreg {

void SsnConfig::validate() const {
  if (!(mu > 0.0 && mu < 0.5)) throw std::invalid_argument("SsnConfig: mu must be in (0, 0.5)");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("SsnConfig: tau must be in (0, 1]");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("SsnConfig: eta must be in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("SsnConfig: delta must be in (0, 1)");
  if (max_inner < 1 || cg_max < 1)
    throw std::invalid_argument("SsnConfig: iteration limits must be positive");
}

HessianOperator make_hessian_operator(const DesignData& data, const DualPoint& point,
                                      double sigma, double nu) {
  HessianOperator op;
  op.data = &data;
  op.matrix_cert = &point.prox_b.certificate;
  op.sigma = sigma;
  op.nu = nu;

  if (const auto* l1 = std::get_if<L1Certificate>(op.matrix_cert)) {
    op.use_x_active = true;
    Index count = 0;
    for (Index j = 0; j < l1->active_mask.size(); ++j) count += l1->active_mask[j] ? 1 : 0;
    op.x_active.resize(data.n_samples(), count);
    Index c = 0;
    for (Index j = 0; j < l1->active_mask.size(); ++j)
      if (l1->active_mask[j]) op.x_active.col(c++) = data.x_design.col(j);
  }

  op.active_columns = vector_jacobian_support(point.prox_g.certificate);
  const Index na = static_cast<Index>(op.active_columns.size());
  op.z_active.resize(data.n_samples(), na);
  for (Index c = 0; c < na; ++c)
    op.z_active.col(c) = data.z_design.col(op.active_columns[static_cast<size_t>(c)]);

  // Position of each global coordinate within the active set.
  std::vector<Index> a_pos(static_cast<size_t>(data.n_vector()), -1);
  for (Index c = 0; c < na; ++c) a_pos[static_cast<size_t>(op.active_columns[static_cast<size_t>(c)])] = c;

  if (const auto* fused = std::get_if<FusedCertificate>(&point.prox_g.certificate)) {
    op.vector_part = HessianOperator::VectorPart::Blocks;
    for (const auto& [b, e] : fused->tv_blocks) {
      if (!fused->post_l1_mask[b]) continue;  // mask is constant per TV block
      op.blocks.push_back({a_pos[static_cast<size_t>(b)], a_pos[static_cast<size_t>(e - 1)] + 1});
    }
  } else if (const auto* sgl = std::get_if<GroupCertificate>(&point.prox_g.certificate)) {
    op.vector_part = HessianOperator::VectorPart::Groups;
    for (size_t l = 0; l < sgl->states.size(); ++l) {
      const auto& state = sgl->states[l];
      if (!state.survives) continue;
      HessianOperator::GroupShrink group;
      const auto& idx = sgl->partition.groups[l];
      for (size_t j = 0; j < idx.size(); ++j) {
        if (!state.inner_mask[static_cast<Index>(j)]) continue;
        group.pos.push_back(a_pos[static_cast<size_t>(idx[j])]);
        group.w.conservativeResize(group.w.size() + 1);
        group.w[group.w.size() - 1] = state.inner_value[static_cast<Index>(j)];
      }
      const double cw = sgl->lambda_prime * sgl->partition.weights[l];
      group.scale = 1.0 - cw / state.residual_norm;
      group.coeff = cw / std::pow(state.residual_norm, 3);
      op.groups.push_back(std::move(group));
    }
  } else {
    op.vector_part = HessianOperator::VectorPart::Identity;
  }
  return op;
}

namespace {

Vector restricted_vector_jacobian(const HessianOperator& op, const Vector& t) {
  switch (op.vector_part) {
    case HessianOperator::VectorPart::Identity:
      return t;
    case HessianOperator::VectorPart::Blocks: {
      Vector out(t.size());
      for (const auto& blk : op.blocks) {
        const double mean = t.segment(blk.begin, blk.end - blk.begin).mean();
        out.segment(blk.begin, blk.end - blk.begin).setConstant(mean);
      }
      return out;
    }
    case HessianOperator::VectorPart::Groups: {
      Vector out = Vector::Zero(t.size());
      for (const auto& g : op.groups) {
        Vector u(static_cast<Index>(g.pos.size()));
        for (size_t j = 0; j < g.pos.size(); ++j) u[static_cast<Index>(j)] = t[g.pos[j]];
        const Vector r = g.scale * u + g.coeff * g.w * g.w.dot(u);
        for (size_t j = 0; j < g.pos.size(); ++j) out[g.pos[j]] = r[static_cast<Index>(j)];
      }
      return out;
    }
  }
  return t;
}

}  // namespace

Vector HessianOperator::apply(const Vector& u) const {
  const DesignData& d = *data;
  Vector out = -(sigma / (nu + sigma)) * u;

  if (use_x_active) {
    if (x_active.cols() > 0)
      out.noalias() -= sigma * (x_active * (x_active.transpose() * u));
  } else {
    const auto& cert = std::get<SvdCertificate>(*matrix_cert);
    const Vector xtu = d.x_design.transpose() * u;
    const Matrix w = nuclear_jacobian_apply(cert, mat_map(xtu, d.mat_rows, d.mat_cols));
    out.noalias() -= sigma * (d.x_design * vec_map(w));
  }

  if (z_active.cols() > 0) {
    const Vector t = restricted_vector_jacobian(*this, z_active.transpose() * u);
    out.noalias() -= sigma * (z_active * t);
    z_column_touches += z_active.cols();
  }
  return out;
}

Matrix HessianOperator::apply_block(const Matrix& U) const {
  const DesignData& d = *data;
  Matrix out = -(sigma / (nu + sigma)) * U;

  if (use_x_active) {
    if (x_active.cols() > 0)
      out.noalias() -= sigma * (x_active * (x_active.transpose() * U));
  } else {
    const auto& cert = std::get<SvdCertificate>(*matrix_cert);
    const Matrix xtu = d.x_design.transpose() * U;
    Matrix wmat(xtu.rows(), xtu.cols());
    for (Index j = 0; j < U.cols(); ++j) {
      const Matrix w = nuclear_jacobian_apply(cert, mat_map(xtu.col(j), d.mat_rows, d.mat_cols));
      wmat.col(j) = vec_map(w);
    }
    out.noalias() -= sigma * (d.x_design * wmat);
  }

  if (z_active.cols() > 0) {
    Matrix t = z_active.transpose() * U;
    for (Index j = 0; j < t.cols(); ++j) t.col(j) = restricted_vector_jacobian(*this, t.col(j));
    out.noalias() -= sigma * (z_active * t);
    z_column_touches += z_active.cols() * U.cols();
  }
  return out;
}

Vector hessian_apply(const HessianOperator& op, const Vector& u) { return op.apply(u); }

NewtonDirection newton_direction(const HessianOperator& op, const Vector& grad,
                                 const SsnConfig& config) {
  const Index n = grad.size();
  const double gnorm = grad.norm();
  const double cap =
      std::max(std::min(config.eta, std::pow(gnorm, 1.0 + config.tau)), 3e-14 * gnorm);

  NewtonDirection result;
  if (n <= config.direct_threshold) {
    const Matrix a = -op.apply_block(Matrix::Identity(n, n));
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() == Eigen::Success) {
      result.direction = llt.solve(grad);
    } else {
      result.direction = Eigen::LDLT<Matrix>(a).solve(grad);
    }
    result.residual_norm = (a * result.direction - grad).norm();
    return result;
  }

  // Conjugate gradients on (-H) d = grad.
  Vector x = Vector::Zero(n);
  Vector r = grad;
  Vector p = r;
  double rs = r.squaredNorm();
  long it = 0;
  while (std::sqrt(rs) > cap && it < config.cg_max) {
    const Vector ap = -op.apply(p);
    const double denom = p.dot(ap);
    if (denom <= 0.0) break;  // numerical loss of definiteness
    const double alpha = rs / denom;
    x.noalias() += alpha * p;
    ++it;
    if (it % 50 == 0) {
      r = grad + op.apply(x);  // periodic true-residual refresh
    } else {
      r.noalias() -= alpha * ap;
    }
    const double rs_new = r.squaredNorm();
    p = r + (rs_new / rs) * p;
    rs = rs_new;
  }
  result.direction = std::move(x);
  result.cg_iterations = it;
  result.residual_norm = std::sqrt(rs);
  result.hit_cap = it >= config.cg_max;
  return result;
}

ArmijoResult armijo_ascent(const ProblemSpec& problem, const OuterState& state, double nu,
                           const Vector& xi, const DualPoint& point, const Vector& direction,
                           const SsnConfig& config) {
  const double slope = point.grad.dot(direction);
  ArmijoResult result;
  double step = 1.0;
  for (int m = 0; m <= config.max_backtracks; ++m) {
    Vector trial = xi + step * direction;
    DualPoint trial_point = eval_dual_point(problem, state, trial, nu, false);
    if (trial_point.phi >= point.phi + config.mu * step * slope) {
      result.step = step;
      result.xi_next = std::move(trial);
      result.point_next = std::move(trial_point);
      result.backtracks = m;
      return result;
    }
    step *= config.delta;
  }
  result.failed = true;
  return result;
}

SsnResult solve_ssn(const ProblemSpec& problem, const OuterState& state, double nu,
                    const SsnConfig& config, double grad_tol) {
  config.validate();
  SsnResult result;
  result.xi = state.xi_vec;
  result.point = eval_dual_point(problem, state, result.xi, nu, true);
  result.gradient_norms.push_back(result.point.grad.norm());

  double gram_norm = -1.0;  // lazy bound for the gradient fallback step
  double best_gnorm = result.gradient_norms.front();
  int stalled = 0;

  for (int j = 0; j < config.max_inner; ++j) {
    const double gnorm = result.point.grad.norm();
    if (gnorm <= grad_tol) break;
    if (stalled >= 3) break;  // machine-precision floor reached

    const HessianOperator op =
        make_hessian_operator(problem.data, result.point, state.sigma, nu);
    NewtonDirection nd = newton_direction(op, result.point.grad, config);
    result.cg_iterations += nd.cg_iterations;
    Vector d = std::move(nd.direction);
    if (result.point.grad.dot(d) <= 0.0) d = result.point.grad;

    const double phi_before = result.point.phi;
    ArmijoResult ls = armijo_ascent(problem, state, nu, result.xi, result.point, d, config);
    if (ls.failed) {
      result.line_search_failed = true;
      if (gram_norm < 0.0) gram_norm = design_gram_norm(problem.data);
      const double lip = state.sigma * gram_norm + state.sigma / (nu + state.sigma);
      const double step = 1.0 / std::max(lip, 1e-12);
      result.xi += step * result.point.grad;
      result.point = eval_dual_point(problem, state, result.xi, nu, true);
    } else {
      result.xi = std::move(ls.xi_next);
      result.point = std::move(ls.point_next);
      complete_dual_gradient(problem, state, result.xi, nu, result.point);
    }
    ++result.iterations;
    const double gnorm_new = result.point.grad.norm();
    result.gradient_norms.push_back(gnorm_new);
    const bool phi_stuck =
        result.point.phi - phi_before <= 1e-14 * (1.0 + std::abs(phi_before));
    if (gnorm_new < 0.7 * best_gnorm) {
      best_gnorm = gnorm_new;
      stalled = 0;
    } else if (phi_stuck) {
      ++stalled;
    } else {
      stalled = 0;
    }
  }
  return result;
}

}  // namespace matreg
