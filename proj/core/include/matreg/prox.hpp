#pragma once

#include "matreg/types.hpp"

#include <utility>
#include <variant>

namespace matreg {

/// Diagonal 0/1 Jacobian pattern of the soft-threshold map.
/// The boundary |v_i| == threshold takes the zero element.
struct L1Certificate {
  BoolArray active_mask;
  double threshold = 0.0;
};

/// SVD factors and index sets behind a singular-value soft-threshold.
/// Stored in the orientation with rows <= cols; `transposed` records whether
/// the input was flipped. Only the thin factors are kept: left is a x a,
/// right holds the leading a right singular vectors (b x a, a = min(m,q)).
struct SvdCertificate {
  Matrix left;             // U
  Matrix right;            // V1
  Vector singular_values;  // nonincreasing, length a
  double threshold = 0.0;  // effective nuclear threshold
  bool transposed = false;
  std::vector<Index> alpha1;  // sigma_i >  threshold
  std::vector<Index> alpha2;  // sigma_i == threshold
  std::vector<Index> alpha3;  // sigma_i <  threshold

  Index rows() const { return transposed ? right.rows() : left.rows(); }
  Index cols() const { return transposed ? left.rows() : right.rows(); }
  /// Nuclear norm of the prox output: sum of (sigma_i - threshold)_+.
  double output_nuclear_norm() const;
};

/// Constancy blocks of the total-variation stage plus the mask of the
/// subsequent soft-threshold.
struct FusedCertificate {
  std::vector<std::pair<Index, Index>> tv_blocks;  // half-open [begin, end)
  BoolArray post_l1_mask;
  double lambda = 0.0;
  double lambda_prime = 0.0;
};

/// Per-group state of the sparse-group-lasso prox.
struct GroupCertificate {
  struct GroupState {
    BoolArray inner_mask;   // soft-threshold pattern within the group
    bool survives = false;  // ||soft(v_Gl)|| > lambda' * w_l
    double residual_norm = 0.0;
    Vector inner_value;     // soft(v_Gl)
  };
  std::vector<GroupState> states;
  GroupPartition partition;
  double lambda = 0.0;
  double lambda_prime = 0.0;
};

using MatrixCertificate = std::variant<SvdCertificate, L1Certificate>;
using VectorCertificate = std::variant<L1Certificate, FusedCertificate, GroupCertificate>;

struct MatrixProx {
  Matrix value;
  MatrixCertificate certificate;
};

struct VectorProx {
  Vector value;
  VectorCertificate certificate;
};

/// Prox of c*h at u for the squared loss h(s) = 0.5*||s - y||^2:
/// (u + c*y) / (1 + c).
Vector prox_squared_loss_scaled(const Vector& u, const Vector& y, double c);

/// Coordinatewise soft-threshold at level t.
VectorProx prox_l1(const Vector& v, double t);
Vector l1_jacobian_apply(const L1Certificate& cert, const Vector& u);

/// Singular value soft-threshold at level t (prox of t*||.||_*).
MatrixProx prox_nuclear(const Matrix& Y, double t);
/// One Clarke-Jacobian element of the singular-value soft-threshold applied
/// to H; linear, self-adjoint, positive semidefinite.
Matrix nuclear_jacobian_apply(const SvdCertificate& cert, const Matrix& H);

/// Exact 1D total-variation prox (taut-string segment method). When blocks is
/// non-null the constancy segments are written there as half-open ranges.
Vector tv_prox(const Vector& v, double t, std::vector<std::pair<Index, Index>>* blocks);

/// Fused-lasso prox: soft-threshold at lambda applied to the TV prox at
/// lambda_prime.
VectorProx prox_fused(const Vector& v, double lambda, double lambda_prime);
Vector fused_jacobian_apply(const FusedCertificate& cert, const Vector& u);

/// Sparse-group-lasso prox: blockwise shrinkage of the inner soft-threshold.
VectorProx prox_sgl(const Vector& v, double lambda, double lambda_prime,
                    const GroupPartition& partition);
Vector sgl_jacobian_apply(const GroupCertificate& cert, const Vector& u);

/// Moreau envelope of t*phi / t*psi / c*h at x: value of the prox problem.
double moreau_envelope(const MatrixPenalty& phi, const Matrix& x, double t);
double moreau_envelope(const VectorPenalty& psi, const Vector& x, double t);
double moreau_envelope_squared_loss(const Vector& x, const Vector& y, double c);

/// Prox of sigma*phi at Y, with certificate.
MatrixProx prox_matrix_penalty(const MatrixPenalty& phi, const Matrix& Y, double sigma);
/// Prox of sigma*psi at v, with certificate.
VectorProx prox_vector_penalty(const VectorPenalty& psi, const Vector& v, double sigma);

Matrix matrix_jacobian_apply(const MatrixCertificate& cert, const Matrix& H);
Vector vector_jacobian_apply(const VectorCertificate& cert, const Vector& u);

/// Active coordinates of the vector-penalty Jacobian: indices whose column of
/// the (surrogate) Jacobian is nonzero. Drives the second-order sparsity of
/// the Newton system.
std::vector<Index> vector_jacobian_support(const VectorCertificate& cert);

}  // namespace matreg
