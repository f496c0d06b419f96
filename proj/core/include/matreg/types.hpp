#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace matreg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using BoolArray = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Observations for the joint matrix/vector regression model.
/// Row i of x_design is vec(X_i) transposed (column-major stacking).
struct DesignData {
  Matrix x_design;   // n x (m*q)
  Matrix z_design;   // n x p
  Vector response;   // n
  Index mat_rows = 0;
  Index mat_cols = 0;

  Index n_samples() const { return response.size(); }
  Index n_vector() const { return z_design.cols(); }
  Index n_mat_entries() const { return mat_rows * mat_cols; }

  void validate() const;
};

/// Decision variables: matrix coefficient B and vector coefficient gamma.
struct CoefficientPair {
  Matrix b_mat;      // m x q
  Vector gamma_vec;  // p

  static CoefficientPair zero(Index m, Index q, Index p) {
    return {Matrix::Zero(m, q), Vector::Zero(p)};
  }
};

enum class MatrixPenaltyKind { NuclearNorm, ElementwiseL1 };

struct MatrixPenalty {
  MatrixPenaltyKind kind = MatrixPenaltyKind::NuclearNorm;
  double rho = 0.0;

  static MatrixPenalty nuclear(double rho) { return {MatrixPenaltyKind::NuclearNorm, rho}; }
  static MatrixPenalty elementwise_l1(double rho) { return {MatrixPenaltyKind::ElementwiseL1, rho}; }
};

/// Disjoint cover of {0..p-1} with one positive weight per group.
struct GroupPartition {
  std::vector<std::vector<Index>> groups;
  std::vector<double> weights;

  Index num_groups() const { return static_cast<Index>(groups.size()); }
  void validate(Index p) const;

  /// p split into g contiguous groups of near-equal size, weight sqrt(|G_l|).
  static GroupPartition contiguous(Index p, Index g);
};

enum class VectorPenaltyKind { Lasso, FusedLasso, SparseGroupLasso };

struct VectorPenalty {
  VectorPenaltyKind kind = VectorPenaltyKind::Lasso;
  double lambda = 0.0;
  double lambda_prime = 0.0;  // fused / sparse group only
  GroupPartition partition;   // sparse group only

  static VectorPenalty lasso(double lambda) { return {VectorPenaltyKind::Lasso, lambda, 0.0, {}}; }
  static VectorPenalty fused(double lambda, double lambda_prime) {
    return {VectorPenaltyKind::FusedLasso, lambda, lambda_prime, {}};
  }
  static VectorPenalty sparse_group(double lambda, double lambda_prime, GroupPartition partition) {
    return {VectorPenaltyKind::SparseGroupLasso, lambda, lambda_prime, std::move(partition)};
  }
};

/// Closed description of the matrix penalty phi and vector penalty psi.
struct PenaltySpec {
  MatrixPenalty matrix_penalty;
  VectorPenalty vector_penalty;

  void validate(Index p) const;
};

/// Full problem instance. The loss is fixed as h(s) = 0.5 * ||s - y||^2.
struct ProblemSpec {
  DesignData data;
  PenaltySpec penalty;

  void validate() const;
};

}  // namespace matreg
