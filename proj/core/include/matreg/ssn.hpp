#pragma once

#include "matreg/dual.hpp"

namespace matreg {

/// Parameters of the semismooth Newton inner solver.
struct SsnConfig {
  double mu = 1e-4;     // Armijo constant, in (0, 0.5)
  double tau = 0.5;     // inexactness exponent, in (0, 1]
  double eta = 0.005;   // CG residual cap, in (0, 1)
  double delta = 0.5;   // backtracking ratio, in (0, 1)
  int max_inner = 100;
  int cg_max = 500;
  Index direct_threshold = 128;  // dense Newton solve when n <= threshold
  int max_backtracks = 50;

  void validate() const;
};

/// One element of the generalized Hessian of the dual subproblem objective,
/// kept in operator form (self-adjoint, negative definite). The Z-part
/// touches only the active columns of Z (second-order sparsity); the matrix
/// part uses gathered X columns for the elementwise-L1 penalty and the
/// low-rank SVD structure for the nuclear norm. References the certificates
/// of the DualPoint it was assembled from; use within that point's lifetime.
struct HessianOperator {
  const DesignData* data = nullptr;
  const MatrixCertificate* matrix_cert = nullptr;
  double sigma = 0.0;
  double nu = 0.0;

  std::vector<Index> active_columns;  // support of the vector-penalty Jacobian
  Matrix z_active;                    // gathered Z columns, n x |A|
  Matrix x_active;                    // gathered X columns (elementwise-L1 matrix penalty)
  bool use_x_active = false;

  // Restricted action of the vector-penalty Jacobian on the A-subvector.
  struct BlockAverage {
    Index begin, end;  // positions within active_columns
  };
  struct GroupShrink {
    std::vector<Index> pos;  // positions within active_columns
    double scale = 0.0;
    double coeff = 0.0;
    Vector w;
  };
  enum class VectorPart { Identity, Blocks, Groups } vector_part = VectorPart::Identity;
  std::vector<BlockAverage> blocks;
  std::vector<GroupShrink> groups;

  mutable long z_column_touches = 0;  // instrumentation for the sparsity contract

  Vector apply(const Vector& u) const;
  Matrix apply_block(const Matrix& U) const;
};

HessianOperator make_hessian_operator(const DesignData& data, const DualPoint& point,
                                      double sigma, double nu);

/// Action of the generalized Hessian element on u.
Vector hessian_apply(const HessianOperator& op, const Vector& u);

struct NewtonDirection {
  Vector direction;
  long cg_iterations = 0;
  double residual_norm = 0.0;
  bool hit_cap = false;
};

/// Approximate solve of H d = -grad, i.e. (-H) d = grad with -H SPD, to the
/// residual cap min(eta, ||grad||^(1+tau)). Dense factorization for small n,
/// matrix-free conjugate gradients otherwise.
NewtonDirection newton_direction(const HessianOperator& op, const Vector& grad,
                                 const SsnConfig& config);

struct ArmijoResult {
  double step = 0.0;
  Vector xi_next;
  DualPoint point_next;  // value-only evaluation at xi_next
  int backtracks = 0;
  bool failed = false;
};

/// Backtracking line search for the ascent condition
/// Phi(xi + step d) >= Phi(xi) + mu * step * <grad, d>.
ArmijoResult armijo_ascent(const ProblemSpec& problem, const OuterState& state, double nu,
                           const Vector& xi, const DualPoint& point, const Vector& direction,
                           const SsnConfig& config);

struct SsnResult {
  Vector xi;
  DualPoint point;  // full evaluation at the returned xi
  int iterations = 0;
  long cg_iterations = 0;
  std::vector<double> gradient_norms;  // per iterate, including the start
  bool line_search_failed = false;
};

/// Maximize the dual subproblem objective from state.xi_vec until the
/// gradient norm falls below grad_tol (or max_inner steps).
SsnResult solve_ssn(const ProblemSpec& problem, const OuterState& state, double nu,
                    const SsnConfig& config, double grad_tol);

}  // namespace matreg
