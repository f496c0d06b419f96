#pragma once

#include "matreg/types.hpp"

namespace matreg {

/// Column-major stacking of M into a vector of length m*q.
inline Vector vec_map(const Matrix& M) {
  return Eigen::Map<const Vector>(M.data(), M.size());
}

/// Adjoint of vec_map: reshape v back into an m x q matrix.
inline Matrix mat_map(const Eigen::Ref<const Vector>& v, Index m, Index q) {
  if (v.size() != m * q) throw std::invalid_argument("mat_map: length(v) != m*q");
  return Eigen::Map<const Matrix>(v.data(), m, q);
}

double nuclear_norm(const Matrix& M);

double matrix_penalty_value(const MatrixPenalty& phi, const Matrix& B);
double vector_penalty_value(const VectorPenalty& psi, const Vector& gamma);
double penalty_value(const PenaltySpec& penalty, const CoefficientPair& coeff);

/// X vec(B) + Z gamma.
Vector predict(const DesignData& data, const CoefficientPair& coeff);

/// 0.5*||X vec(B) + Z gamma - y||^2 + phi(B) + psi(gamma).
double objective(const ProblemSpec& problem, const CoefficientPair& coeff);

struct Standardization {
  Vector x_mean, x_scale;
  Vector z_mean, z_scale;
  double y_mean = 0.0;
  double y_scale = 1.0;
  bool response_standardized = false;
};

struct StandardizedData {
  DesignData data;
  Standardization transform;
};

/// Center each column of x_design/z_design and scale to unit sample standard
/// deviation (constant columns are centered and kept at scale 1). The response
/// gets the same treatment when also_response is set.
StandardizedData standardize_columns(const DesignData& data, bool also_response);

}  // namespace matreg
