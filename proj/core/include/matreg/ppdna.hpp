#pragma once

#include "matreg/dual.hpp"
#include "matreg/report.hpp"
#include "matreg/ssn.hpp"

#include <optional>

namespace matreg {

/// Parameters of the outer preconditioned proximal point algorithm.
/// eps_k = eps0 * eps_decay^k is the (summable) subproblem inexactness
/// schedule; sigma_k grows geometrically up to sigma_max.
struct PpdnaConfig {
  double nu = 1.0;
  double sigma0 = 1.0;
  double sigma_max = 1e6;
  double sigma_growth = 3.0;
  double eps0 = 0.1;
  double eps_decay = 0.5;
  double kkt_tol = 1e-6;
  int max_outer = 100;
  SsnConfig inner;

  // Optional benchmark-gap stop used by the efficiency studies: active when
  // robj_tol >= 0 and obj_star is finite.
  double obj_star = std::numeric_limits<double>::quiet_NaN();
  double robj_tol = -1.0;
  double time_limit_seconds = 3600.0;

  void validate() const;
};

struct KktResiduals {
  double primal = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;
  double eta = 0.0;
};

/// KKT residuals of the full optimality system with the dual variables
/// reconstructed from xi as U = -mat(X^T xi), beta = -Z^T xi, w = xi, which
/// makes the dual-infeasibility term identically zero for solver iterates.
KktResiduals kkt_residuals(const ProblemSpec& problem, const CoefficientPair& coeff,
                           const Vector& s, const Vector& xi);

/// Subproblem objective G_k at the primal candidate recovered from a dual
/// point (its three prox values), including the proximal quadratic terms.
double subproblem_primal_objective(const ProblemSpec& problem, const OuterState& state,
                                   double nu, const DualPoint& point);

struct SubproblemGap {
  double gap = 0.0;
  double tolerance = 0.0;
  bool accepted = false;
};

/// Duality-gap stopping test: G_k(B+, gamma+) - Phi_k(xi+) <= eps_k^2 / (2 sigma_k).
SubproblemGap check_stop_subproblem(const ProblemSpec& problem, const OuterState& state,
                                    double nu, const DualPoint& point, double eps_k);

/// Advance the outer state: adopt the three prox values at xi_new, grow sigma
/// per schedule, increment the iteration counter.
OuterState primal_update(const OuterState& state, const PpdnaConfig& config,
                         const DualPoint& point, const Vector& xi_new);

struct PpdnaResult {
  CoefficientPair coeff;
  SolverReport report;
};

/// Outer preconditioned proximal point loop with the semismooth Newton inner
/// solver. Stops when eta_KKT < kkt_tol, the optional relative-objective
/// target is met, or max_outer is reached.
PpdnaResult solve_ppdna(const ProblemSpec& problem, const PpdnaConfig& config,
                        const std::optional<CoefficientPair>& warm_start = std::nullopt);

}  // namespace matreg
