#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace matreg {

enum class SolveStatus { Converged, IterationLimit, TimeLimit, Failed };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::IterationLimit: return "iteration-limit";
    case SolveStatus::TimeLimit: return "time-limit";
    case SolveStatus::Failed: return "failed";
  }
  return "unknown";
}

/// One per-iteration trace record; wall-clock is seconds since solve start.
struct TraceRecord {
  int iteration = 0;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double eta_kkt = std::numeric_limits<double>::quiet_NaN();
  double dual_objective = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
  int inner_iterations = 0;
  long cg_iterations = 0;
};

struct SolverReport {
  SolveStatus status = SolveStatus::Failed;
  int iterations = 0;
  long inner_iterations = 0;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double eta_kkt = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
  std::vector<TraceRecord> trace;
  std::string message;
};

/// Relative objective gap to a benchmark value: (obj - obj*) / (1 + |obj*|).
inline double rel_obj(double obj, double obj_star) {
  return (obj - obj_star) / (1.0 + std::abs(obj_star));
}

}  // namespace matreg
