#include "matreg/prox.hpp"

#include "matreg/model.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace matreg {

double SvdCertificate::output_nuclear_norm() const {
  double s = 0.0;
  for (Index i = 0; i < singular_values.size(); ++i)
    s += std::max(singular_values[i] - threshold, 0.0);
  return s;
}

Vector prox_squared_loss_scaled(const Vector& u, const Vector& y, double c) {
  if (c <= 0.0) throw std::invalid_argument("prox_squared_loss_scaled: c must be positive");
  if (u.size() != y.size())
    throw std::invalid_argument("prox_squared_loss_scaled: length mismatch");
  return (u + c * y) / (1.0 + c);
}

VectorProx prox_l1(const Vector& v, double t) {
  if (t < 0.0) throw std::invalid_argument("prox_l1: negative threshold");
  L1Certificate cert;
  cert.threshold = t;
  cert.active_mask = v.array().abs() > t;
  Vector value(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]) - t;
    value[i] = a > 0.0 ? (v[i] > 0.0 ? a : -a) : 0.0;
  }
  return {std::move(value), std::move(cert)};
}

Vector l1_jacobian_apply(const L1Certificate& cert, const Vector& u) {
  if (cert.active_mask.size() != u.size())
    throw std::invalid_argument("l1_jacobian_apply: length mismatch");
  return cert.active_mask.select(u.array(), 0.0).matrix();
}

MatrixProx prox_nuclear(const Matrix& Y, double t) {
  if (t < 0.0) throw std::invalid_argument("prox_nuclear: negative threshold");
  if (!Y.allFinite()) throw std::invalid_argument("prox_nuclear: non-finite input");

  const bool transposed = Y.rows() > Y.cols();
  Matrix flipped;
  if (transposed) flipped = Y.transpose();
  const Matrix& oriented = transposed ? flipped : Y;

  Eigen::BDCSVD<Matrix> svd(oriented, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SvdCertificate cert;
  cert.left = svd.matrixU();
  cert.right = svd.matrixV();
  cert.singular_values = svd.singularValues();
  cert.threshold = t;
  cert.transposed = transposed;
  for (Index i = 0; i < cert.singular_values.size(); ++i) {
    const double s = cert.singular_values[i];
    if (s > t)
      cert.alpha1.push_back(i);
    else if (s == t)
      cert.alpha2.push_back(i);
    else
      cert.alpha3.push_back(i);
  }

  Vector shrunk = (cert.singular_values.array() - t).max(0.0).matrix();
  Matrix value = cert.left * shrunk.asDiagonal() * cert.right.transpose();
  if (transposed) value.transposeInPlace();
  return {std::move(value), std::move(cert)};
}

namespace {

// Entrywise factors of the Clarke element for the singular-value threshold.
// Nonzero entries exist only in rows/columns meeting alpha1.
void build_gamma_factors(const SvdCertificate& c, Matrix& g_sym, Matrix& g_skew) {
  const Index a = c.singular_values.size();
  const double t = c.threshold;
  const Vector& s = c.singular_values;
  g_sym.setZero(a, a);
  g_skew.setZero(a, a);
  for (Index i : c.alpha1) {
    for (Index j = 0; j < a; ++j) {
      const double omega = (s[i] - t + std::max(s[j] - t, 0.0)) / (s[i] + s[j]);
      g_skew(i, j) = omega;
      g_skew(j, i) = omega;
    }
    for (Index j : c.alpha1) g_sym(i, j) = 1.0;
    for (Index j : c.alpha2) {
      g_sym(i, j) = 1.0;
      g_sym(j, i) = 1.0;
    }
    for (Index j : c.alpha3) {
      const double tau = (s[i] - t) / (s[i] - s[j]);
      g_sym(i, j) = tau;
      g_sym(j, i) = tau;
    }
  }
}

Matrix nuclear_jacobian_apply_oriented(const SvdCertificate& c, const Matrix& H) {
  const Index a = c.left.rows();
  if (c.alpha1.empty()) return Matrix::Zero(H.rows(), H.cols());

  Matrix g_sym, g_skew;
  build_gamma_factors(c, g_sym, g_skew);

  const Matrix HV1 = H * c.right;           // a x a after projection below
  const Matrix H1 = c.left.transpose() * HV1;
  const Matrix sym = 0.5 * (H1 + H1.transpose());
  const Matrix skew = 0.5 * (H1 - H1.transpose());
  Matrix core = g_sym.cwiseProduct(sym) + g_skew.cwiseProduct(skew);
  Matrix result = c.left * (core * c.right.transpose());

  // V2 block: Gamma_{alpha beta} has row-constant entries mu_i on alpha1 rows
  // only, so its action is U D_mu U^T H (I - V1 V1^T) with no V2 materialized.
  const Index r = static_cast<Index>(c.alpha1.size());
  Matrix u_active(a, r);
  Vector mu(r);
  for (Index k = 0; k < r; ++k) {
    const Index i = c.alpha1[static_cast<size_t>(k)];
    u_active.col(k) = c.left.col(i);
    mu[k] = (c.singular_values[i] - c.threshold) / c.singular_values[i];
  }
  const Matrix residual = H - HV1 * c.right.transpose();
  result.noalias() += u_active * (mu.asDiagonal() * (u_active.transpose() * residual));
  return result;
}

}  // namespace

Matrix nuclear_jacobian_apply(const SvdCertificate& cert, const Matrix& H) {
  if (H.rows() != cert.rows() || H.cols() != cert.cols())
    throw std::invalid_argument("nuclear_jacobian_apply: shape mismatch");
  if (cert.transposed) return nuclear_jacobian_apply_oriented(cert, H.transpose()).transpose();
  return nuclear_jacobian_apply_oriented(cert, H);
}

Vector tv_prox(const Vector& v, double t, std::vector<std::pair<Index, Index>>* blocks) {
  if (t < 0.0) throw std::invalid_argument("tv_prox: negative level");
  const Index p = v.size();
  Vector out(p);
  if (p == 0) {
    if (blocks) blocks->clear();
    return out;
  }
  if (t == 0.0 || p == 1) {
    out = v;
    if (blocks) {
      blocks->clear();
      for (Index i = 0; i < p; ++i) blocks->emplace_back(i, i + 1);
    }
    return out;
  }

  // Taut-string segment method (Condat's direct algorithm): walk the tube of
  // radius t around the running sums, emitting a constant segment whenever the
  // string must jump.
  Index k = 0, seg_start = 0, last_lo = 0, last_hi = 0;
  double u_lo = t, u_hi = -t;
  double v_lo = v[0] - t, v_hi = v[0] + t;
  for (;;) {
    while (k == p - 1) {
      if (u_lo < 0.0) {  // lower value too high, negative jump
        do out[seg_start++] = v_lo; while (seg_start <= last_lo);
        last_lo = k = seg_start;
        v_lo = v[k];
        u_lo = t;
        u_hi = v[k] + t - v_hi;
      } else if (u_hi > 0.0) {  // upper value too low, positive jump
        do out[seg_start++] = v_hi; while (seg_start <= last_hi);
        last_hi = k = seg_start;
        v_hi = v[k];
        u_hi = -t;
        u_lo = v[k] - t - v_lo;
      } else {
        v_lo += u_lo / static_cast<double>(k - seg_start + 1);
        do out[seg_start++] = v_lo; while (seg_start <= k);
        if (blocks) {
          blocks->clear();
          Index b = 0;
          while (b < p) {
            Index e = b + 1;
            while (e < p && out[e] == out[b]) ++e;
            blocks->emplace_back(b, e);
            b = e;
          }
        }
        return out;
      }
    }
    u_lo += v[k + 1] - v_lo;
    if (u_lo < -t) {  // negative jump
      do out[seg_start++] = v_lo; while (seg_start <= last_lo);
      last_lo = last_hi = k = seg_start;
      v_lo = v[k];
      v_hi = v[k] + 2.0 * t;
      u_lo = t;
      u_hi = -t;
      continue;
    }
    u_hi += v[k + 1] - v_hi;
    if (u_hi > t) {  // positive jump
      do out[seg_start++] = v_hi; while (seg_start <= last_hi);
      last_lo = last_hi = k = seg_start;
      v_hi = v[k];
      v_lo = v[k] - 2.0 * t;
      u_lo = t;
      u_hi = -t;
      continue;
    }
    ++k;
    if (u_lo >= t) {
      last_lo = k;
      v_lo += (u_lo - t) / static_cast<double>(k - seg_start + 1);
      u_lo = t;
    }
    if (u_hi <= -t) {
      last_hi = k;
      v_hi += (u_hi + t) / static_cast<double>(k - seg_start + 1);
      u_hi = -t;
    }
  }
}

VectorProx prox_fused(const Vector& v, double lambda, double lambda_prime) {
  if (lambda < 0.0 || lambda_prime < 0.0)
    throw std::invalid_argument("prox_fused: negative level");
  FusedCertificate cert;
  cert.lambda = lambda;
  cert.lambda_prime = lambda_prime;
  const Vector tv = tv_prox(v, lambda_prime, &cert.tv_blocks);
  cert.post_l1_mask = tv.array().abs() > lambda;
  Vector value(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(tv[i]) - lambda;
    value[i] = a > 0.0 ? (tv[i] > 0.0 ? a : -a) : 0.0;
  }
  return {std::move(value), std::move(cert)};
}

Vector fused_jacobian_apply(const FusedCertificate& cert, const Vector& u) {
  if (cert.post_l1_mask.size() != u.size())
    throw std::invalid_argument("fused_jacobian_apply: length mismatch");
  Vector out(u.size());
  for (const auto& [b, e] : cert.tv_blocks) {
    const double mean = u.segment(b, e - b).mean();
    for (Index i = b; i < e; ++i) out[i] = cert.post_l1_mask[i] ? mean : 0.0;
  }
  return out;
}

VectorProx prox_sgl(const Vector& v, double lambda, double lambda_prime,
                    const GroupPartition& partition) {
  if (lambda < 0.0 || lambda_prime < 0.0) throw std::invalid_argument("prox_sgl: negative level");
  partition.validate(v.size());

  GroupCertificate cert;
  cert.partition = partition;
  cert.lambda = lambda;
  cert.lambda_prime = lambda_prime;
  Vector value = Vector::Zero(v.size());
  for (size_t l = 0; l < partition.groups.size(); ++l) {
    const auto& idx = partition.groups[l];
    GroupCertificate::GroupState state;
    state.inner_mask.resize(static_cast<Index>(idx.size()));
    state.inner_value.resize(static_cast<Index>(idx.size()));
    for (size_t j = 0; j < idx.size(); ++j) {
      const double vi = v[idx[j]];
      const double a = std::abs(vi) - lambda;
      state.inner_mask[static_cast<Index>(j)] = std::abs(vi) > lambda;
      state.inner_value[static_cast<Index>(j)] = a > 0.0 ? (vi > 0.0 ? a : -a) : 0.0;
    }
    state.residual_norm = state.inner_value.norm();
    state.survives = state.residual_norm > lambda_prime * partition.weights[l];
    if (state.survives) {
      const double shrink = 1.0 - lambda_prime * partition.weights[l] / state.residual_norm;
      for (size_t j = 0; j < idx.size(); ++j)
        value[idx[j]] = shrink * state.inner_value[static_cast<Index>(j)];
    }
    cert.states.push_back(std::move(state));
  }
  return {std::move(value), std::move(cert)};
}

Vector sgl_jacobian_apply(const GroupCertificate& cert, const Vector& u) {
  Vector out = Vector::Zero(u.size());
  for (size_t l = 0; l < cert.states.size(); ++l) {
    const auto& state = cert.states[l];
    if (!state.survives) continue;
    const auto& idx = cert.partition.groups[l];
    if (!idx.empty() && idx.back() >= u.size())
      throw std::invalid_argument("sgl_jacobian_apply: length mismatch");
    const double cw = cert.lambda_prime * cert.partition.weights[l];
    const double norm = state.residual_norm;
    const double scale = 1.0 - cw / norm;
    Vector masked(static_cast<Index>(idx.size()));
    for (size_t j = 0; j < idx.size(); ++j)
      masked[static_cast<Index>(j)] = state.inner_mask[static_cast<Index>(j)] ? u[idx[j]] : 0.0;
    const double corr = cw / (norm * norm * norm) * state.inner_value.dot(masked);
    for (size_t j = 0; j < idx.size(); ++j)
      out[idx[j]] = scale * masked[static_cast<Index>(j)] +
                    corr * state.inner_value[static_cast<Index>(j)];
  }
  return out;
}

double moreau_envelope(const MatrixPenalty& phi, const Matrix& x, double t) {
  if (t <= 0.0) throw std::invalid_argument("moreau_envelope: t must be positive");
  const MatrixProx eval = prox_matrix_penalty(phi, x, t);
  double penalty;
  if (phi.kind == MatrixPenaltyKind::NuclearNorm)
    penalty = phi.rho * std::get<SvdCertificate>(eval.certificate).output_nuclear_norm();
  else
    penalty = phi.rho * eval.value.cwiseAbs().sum();
  return t * penalty + 0.5 * (eval.value - x).squaredNorm();
}

double moreau_envelope(const VectorPenalty& psi, const Vector& x, double t) {
  if (t <= 0.0) throw std::invalid_argument("moreau_envelope: t must be positive");
  const VectorProx eval = prox_vector_penalty(psi, x, t);
  return t * vector_penalty_value(psi, eval.value) + 0.5 * (eval.value - x).squaredNorm();
}

double moreau_envelope_squared_loss(const Vector& x, const Vector& y, double c) {
  const Vector p = prox_squared_loss_scaled(x, y, c);
  return c * 0.5 * (p - y).squaredNorm() + 0.5 * (p - x).squaredNorm();
}

MatrixProx prox_matrix_penalty(const MatrixPenalty& phi, const Matrix& Y, double sigma) {
  switch (phi.kind) {
    case MatrixPenaltyKind::NuclearNorm:
      return prox_nuclear(Y, sigma * phi.rho);
    case MatrixPenaltyKind::ElementwiseL1: {
      VectorProx flat = prox_l1(vec_map(Y), sigma * phi.rho);
      return {mat_map(flat.value, Y.rows(), Y.cols()),
              std::get<L1Certificate>(std::move(flat.certificate))};
    }
  }
  throw std::invalid_argument("prox_matrix_penalty: unsupported penalty kind");
}

VectorProx prox_vector_penalty(const VectorPenalty& psi, const Vector& v, double sigma) {
  switch (psi.kind) {
    case VectorPenaltyKind::Lasso:
      return prox_l1(v, sigma * psi.lambda);
    case VectorPenaltyKind::FusedLasso:
      return prox_fused(v, sigma * psi.lambda, sigma * psi.lambda_prime);
    case VectorPenaltyKind::SparseGroupLasso:
      return prox_sgl(v, sigma * psi.lambda, sigma * psi.lambda_prime, psi.partition);
  }
  throw std::invalid_argument("prox_vector_penalty: unsupported penalty kind");
}

Matrix matrix_jacobian_apply(const MatrixCertificate& cert, const Matrix& H) {
  if (const auto* svd = std::get_if<SvdCertificate>(&cert))
    return nuclear_jacobian_apply(*svd, H);
  const auto& l1 = std::get<L1Certificate>(cert);
  if (l1.active_mask.size() != H.size())
    throw std::invalid_argument("matrix_jacobian_apply: shape mismatch");
  Vector masked = l1_jacobian_apply(l1, vec_map(H));
  return mat_map(masked, H.rows(), H.cols());
}

Vector vector_jacobian_apply(const VectorCertificate& cert, const Vector& u) {
  if (const auto* l1 = std::get_if<L1Certificate>(&cert)) return l1_jacobian_apply(*l1, u);
  if (const auto* fused = std::get_if<FusedCertificate>(&cert))
    return fused_jacobian_apply(*fused, u);
  return sgl_jacobian_apply(std::get<GroupCertificate>(cert), u);
}

std::vector<Index> vector_jacobian_support(const VectorCertificate& cert) {
  std::vector<Index> support;
  if (const auto* l1 = std::get_if<L1Certificate>(&cert)) {
    for (Index i = 0; i < l1->active_mask.size(); ++i)
      if (l1->active_mask[i]) support.push_back(i);
  } else if (const auto* fused = std::get_if<FusedCertificate>(&cert)) {
    for (Index i = 0; i < fused->post_l1_mask.size(); ++i)
      if (fused->post_l1_mask[i]) support.push_back(i);
  } else {
    const auto& sgl = std::get<GroupCertificate>(cert);
    for (size_t l = 0; l < sgl.states.size(); ++l) {
      if (!sgl.states[l].survives) continue;
      const auto& idx = sgl.partition.groups[l];
      for (size_t j = 0; j < idx.size(); ++j)
        if (sgl.states[l].inner_mask[static_cast<Index>(j)]) support.push_back(idx[j]);
    }
    std::sort(support.begin(), support.end());
  }
  return support;
}

}  // namespace matreg
