#include "matreg/experiments.hpp"

#include "matreg/linalg.hpp"
#include "matreg/model.hpp"

#include <cmath>

namespace matreg {

std::vector<double> GridSpec::values() const {
  if (points < 1) throw std::invalid_argument("GridSpec: need at least one grid point");
  std::vector<double> vals(static_cast<size_t>(points));
  if (points == 1) {
    vals[0] = alpha_max;
    return vals;
  }
  if (log_scale) {
    const double lo = std::log10(alpha_min), hi = std::log10(alpha_max);
    for (int i = 0; i < points; ++i)
      vals[static_cast<size_t>(i)] =
          std::pow(10.0, lo + (hi - lo) * static_cast<double>(i) / (points - 1));
  } else {
    for (int i = 0; i < points; ++i)
      vals[static_cast<size_t>(i)] =
          alpha_min + (alpha_max - alpha_min) * static_cast<double>(i) / (points - 1);
  }
  return vals;
}

PenaltyLevels tuning_values(const DesignData& data, Estimator estimator, double alpha_mat,
                            double alpha_vec, double alpha_vec_prime) {
  if (data.n_samples() < 1) throw std::invalid_argument("tuning_values: empty data");
  const Vector xty = data.x_design.transpose() * data.response;
  const Vector zty = data.z_design.transpose() * data.response;
  const double z_inf = zty.size() > 0 ? zty.cwiseAbs().maxCoeff() : 0.0;

  PenaltyLevels levels;
  if (estimator == Estimator::VML) {
    levels.rho = alpha_mat * (xty.size() > 0 ? xty.cwiseAbs().maxCoeff() : 0.0);
  } else {
    const Matrix xty_mat = mat_map(xty, data.mat_rows, data.mat_cols);
    levels.rho = alpha_mat * spectral_norm_power(xty_mat);
  }
  levels.lambda = alpha_vec * z_inf;
  levels.lambda_prime = (alpha_vec_prime >= 0.0 ? alpha_vec_prime : alpha_vec) * z_inf;
  return levels;
}

PenaltySpec make_penalty(Estimator estimator, const PenaltyLevels& levels, Index p,
                         Index groups) {
  PenaltySpec spec;
  switch (estimator) {
    case Estimator::VML:
      spec.matrix_penalty = MatrixPenalty::elementwise_l1(levels.rho);
      spec.vector_penalty = VectorPenalty::lasso(levels.lambda);
      break;
    case Estimator::NL:
      spec.matrix_penalty = MatrixPenalty::nuclear(levels.rho);
      spec.vector_penalty = VectorPenalty::lasso(levels.lambda);
      break;
    case Estimator::NFL:
      spec.matrix_penalty = MatrixPenalty::nuclear(levels.rho);
      spec.vector_penalty = VectorPenalty::fused(levels.lambda, levels.lambda_prime);
      break;
    case Estimator::NSGL:
      spec.matrix_penalty = MatrixPenalty::nuclear(levels.rho);
      spec.vector_penalty = VectorPenalty::sparse_group(
          levels.lambda, levels.lambda_prime, GroupPartition::contiguous(p, groups));
      break;
  }
  return spec;
}

}  // namespace matreg
