#include "matreg/model.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace matreg {

void DesignData::validate() const {
  const Index n = response.size();
  if (n < 1) throw std::invalid_argument("DesignData: empty response");
  if (x_design.rows() != n || z_design.rows() != n)
    throw std::invalid_argument("DesignData: row counts of X, Z, y disagree");
  if (mat_rows <= 0 || mat_cols <= 0)
    throw std::invalid_argument("DesignData: matrix shape must be positive");
  if (x_design.cols() != mat_rows * mat_cols)
    throw std::invalid_argument("DesignData: x_design column count != m*q");
  if (!x_design.allFinite() || !z_design.allFinite() || !response.allFinite())
    throw std::invalid_argument("DesignData: non-finite entries");
}

void GroupPartition::validate(Index p) const {
  if (groups.size() != weights.size())
    throw std::invalid_argument("GroupPartition: one weight per group required");
  std::vector<char> seen(static_cast<size_t>(p), 0);
  Index covered = 0;
  for (size_t l = 0; l < groups.size(); ++l) {
    if (weights[l] <= 0.0) throw std::invalid_argument("GroupPartition: weights must be positive");
    for (Index i : groups[l]) {
      if (i < 0 || i >= p || seen[static_cast<size_t>(i)])
        throw std::invalid_argument("GroupPartition: groups must form a disjoint cover of [p]");
      seen[static_cast<size_t>(i)] = 1;
      ++covered;
    }
  }
  if (covered != p) throw std::invalid_argument("GroupPartition: groups must cover all of [p]");
}

GroupPartition GroupPartition::contiguous(Index p, Index g) {
  if (g < 1 || g > p) throw std::invalid_argument("GroupPartition: need 1 <= g <= p");
  GroupPartition part;
  const Index base = p / g;
  const Index extra = p % g;
  Index pos = 0;
  for (Index l = 0; l < g; ++l) {
    const Index size = base + (l < extra ? 1 : 0);
    std::vector<Index> idx(static_cast<size_t>(size));
    for (Index j = 0; j < size; ++j) idx[static_cast<size_t>(j)] = pos + j;
    pos += size;
    part.groups.push_back(std::move(idx));
    part.weights.push_back(std::sqrt(static_cast<double>(size)));
  }
  return part;
}

void PenaltySpec::validate(Index p) const {
  if (matrix_penalty.rho < 0.0) throw std::invalid_argument("PenaltySpec: rho must be >= 0");
  if (vector_penalty.lambda < 0.0 || vector_penalty.lambda_prime < 0.0)
    throw std::invalid_argument("PenaltySpec: penalty levels must be >= 0");
  if (vector_penalty.kind == VectorPenaltyKind::SparseGroupLasso)
    vector_penalty.partition.validate(p);
}

void ProblemSpec::validate() const {
  data.validate();
  penalty.validate(data.n_vector());
}

double nuclear_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(M);
  return svd.singularValues().sum();
}

double matrix_penalty_value(const MatrixPenalty& phi, const Matrix& B) {
  switch (phi.kind) {
    case MatrixPenaltyKind::NuclearNorm:
      return phi.rho * nuclear_norm(B);
    case MatrixPenaltyKind::ElementwiseL1:
      return phi.rho * B.cwiseAbs().sum();
  }
  throw std::invalid_argument("matrix_penalty_value: unsupported penalty kind");
}

double vector_penalty_value(const VectorPenalty& psi, const Vector& gamma) {
  switch (psi.kind) {
    case VectorPenaltyKind::Lasso:
      return psi.lambda * gamma.cwiseAbs().sum();
    case VectorPenaltyKind::FusedLasso: {
      double tv = 0.0;
      for (Index i = 0; i + 1 < gamma.size(); ++i) tv += std::abs(gamma[i] - gamma[i + 1]);
      return psi.lambda * gamma.cwiseAbs().sum() + psi.lambda_prime * tv;
    }
    case VectorPenaltyKind::SparseGroupLasso: {
      double group = 0.0;
      for (size_t l = 0; l < psi.partition.groups.size(); ++l) {
        double sq = 0.0;
        for (Index i : psi.partition.groups[l]) sq += gamma[i] * gamma[i];
        group += psi.partition.weights[l] * std::sqrt(sq);
      }
      return psi.lambda * gamma.cwiseAbs().sum() + psi.lambda_prime * group;
    }
  }
  throw std::invalid_argument("vector_penalty_value: unsupported penalty kind");
}

double penalty_value(const PenaltySpec& penalty, const CoefficientPair& coeff) {
  return matrix_penalty_value(penalty.matrix_penalty, coeff.b_mat) +
         vector_penalty_value(penalty.vector_penalty, coeff.gamma_vec);
}

Vector predict(const DesignData& data, const CoefficientPair& coeff) {
  if (coeff.b_mat.rows() != data.mat_rows || coeff.b_mat.cols() != data.mat_cols ||
      coeff.gamma_vec.size() != data.n_vector())
    throw std::invalid_argument("predict: coefficient dimensions do not match data");
  return data.x_design * vec_map(coeff.b_mat) + data.z_design * coeff.gamma_vec;
}

double objective(const ProblemSpec& problem, const CoefficientPair& coeff) {
  const Vector r = predict(problem.data, coeff) - problem.data.response;
  return 0.5 * r.squaredNorm() + penalty_value(problem.penalty, coeff);
}

namespace {

void standardize_matrix(Matrix& A, Vector& mean, Vector& scale) {
  const Index n = A.rows();
  mean = A.colwise().mean();
  A.rowwise() -= mean.transpose();
  scale.resize(A.cols());
  for (Index j = 0; j < A.cols(); ++j) {
    const double sd = std::sqrt(A.col(j).squaredNorm() / static_cast<double>(n - 1));
    scale[j] = (sd > 1e-12) ? sd : 1.0;  // constant columns: centered, scale 1
    A.col(j) /= scale[j];
  }
}

}  // namespace

StandardizedData standardize_columns(const DesignData& data, bool also_response) {
  if (data.n_samples() < 2)
    throw std::invalid_argument("standardize_columns: need at least two samples");
  StandardizedData out;
  out.data = data;
  standardize_matrix(out.data.x_design, out.transform.x_mean, out.transform.x_scale);
  standardize_matrix(out.data.z_design, out.transform.z_mean, out.transform.z_scale);
  if (also_response) {
    const Index n = data.n_samples();
    out.transform.y_mean = out.data.response.mean();
    out.data.response.array() -= out.transform.y_mean;
    const double sd =
        std::sqrt(out.data.response.squaredNorm() / static_cast<double>(n - 1));
    out.transform.y_scale = (sd > 1e-12) ? sd : 1.0;
    out.data.response /= out.transform.y_scale;
    out.transform.response_standardized = true;
  }
  return out;
}

}  // namespace matreg
