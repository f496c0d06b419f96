#pragma once

#include "matreg/report.hpp"
#include "matreg/types.hpp"

namespace matreg {

/// ADMM on the dual problem, with the xi-update solved through a cached
/// factorization of I + X X^T + Z Z^T.
struct AdmmConfig {
  double sigma = 1.0;        // augmented Lagrangian parameter
  double step_tau = 1.618;   // over-relaxation, in (0, (1+sqrt(5))/2)
  long max_iter = 20000;
  double kkt_tol = 1e-6;

  // Optional benchmark-gap stop: active when robj_tol >= 0 and obj_star finite.
  double obj_star = std::numeric_limits<double>::quiet_NaN();
  double robj_tol = -1.0;
  double time_limit_seconds = 3600.0;
  int trace_stride = 1;

  void validate() const;
};

struct AdmmResult {
  CoefficientPair coeff;
  SolverReport report;
};

AdmmResult solve_admm(const ProblemSpec& problem, const AdmmConfig& config);

}  // namespace matreg
