#pragma once

#include "matreg/prox.hpp"
#include "matreg/types.hpp"

namespace matreg {

/// Outer-iteration state of the preconditioned proximal point algorithm.
/// s_vec starts at X vec(B0) + Z gamma0 and afterwards carries the loss-prox
/// output of the previous primal update.
struct OuterState {
  Matrix b_mat;
  Vector gamma_vec;
  Vector s_vec;
  Vector xi_vec;
  double sigma = 1.0;
  int iteration = 0;
};

/// Dual subproblem objective, gradient, and the three cached prox
/// evaluations at a point xi. The prox certificates feed the generalized
/// Hessian; pred_candidate = X vec(prox_b) + Z prox_g is reused by the
/// primal update and the duality-gap test.
struct DualPoint {
  double phi = 0.0;
  bool has_gradient = false;
  Vector grad;
  MatrixProx prox_b;
  VectorProx prox_g;
  Vector prox_s;
  Vector pred_candidate;
};

/// Evaluate Phi_k (and optionally its gradient) at xi for the subproblem
/// anchored at state. The three prox inputs are
///   B^k - sigma mat(X^T xi),  gamma^k - sigma Z^T xi,  s^k + (sigma/nu) xi.
DualPoint eval_dual_point(const ProblemSpec& problem, const OuterState& state,
                          const Vector& xi, double nu, bool with_gradient);

/// Fill in the gradient of a value-only DualPoint.
void complete_dual_gradient(const ProblemSpec& problem, const OuterState& state,
                            const Vector& xi, double nu, DualPoint& point);

/// Phi_k(xi).
double eval_dual_objective(const ProblemSpec& problem, const OuterState& state,
                           const Vector& xi, double nu);

/// grad Phi_k(xi) = X vec(Prox_{sigma phi}(.)) + Z Prox_{sigma psi}(.) - Prox_{sigma h/nu}(.).
Vector eval_dual_gradient(const ProblemSpec& problem, const OuterState& state,
                          const Vector& xi, double nu);

}  // namespace matreg
