#pragma once

#include "matreg/report.hpp"
#include "matreg/types.hpp"

namespace matreg {

/// Accelerated proximal gradient on the primal problem with momentum
/// extrapolation and a monotone restart on objective increase.
struct ApgConfig {
  long max_iter = 200000;
  double kkt_tol = 1e-8;
  int kkt_stride = 1;  // evaluate the KKT residual every this many iterations

  double obj_star = std::numeric_limits<double>::quiet_NaN();
  double robj_tol = -1.0;
  double time_limit_seconds = 3600.0;
  int trace_stride = 1;

  void validate() const;
};

struct ApgResult {
  CoefficientPair coeff;
  SolverReport report;
};

ApgResult solve_apg(const ProblemSpec& problem, const ApgConfig& config);

}  // namespace matreg
