#include "matreg/metrics.hpp"

#include "matreg/model.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace matreg {

double rmse_y(const DesignData& test_data, const CoefficientPair& coeff) {
  const Vector diff = test_data.response - predict(test_data, coeff);
  return diff.norm() / std::sqrt(static_cast<double>(test_data.n_samples()));
}

double error_b(const Matrix& b_true, const Matrix& b_hat) {
  if (b_true.rows() != b_hat.rows() || b_true.cols() != b_hat.cols())
    throw std::invalid_argument("error_b: shape mismatch");
  return (b_true - b_hat).norm() / std::sqrt(static_cast<double>(b_true.size()));
}

double error_gamma(const Vector& g_true, const Vector& g_hat) {
  if (g_true.size() != g_hat.size()) throw std::invalid_argument("error_gamma: shape mismatch");
  return (g_true - g_hat).norm() / std::sqrt(static_cast<double>(g_true.size()));
}

int rank_estimate(const Matrix& B, double tol_rel) {
  if (B.size() == 0) return 0;
  if (!B.allFinite()) throw std::invalid_argument("rank_estimate: non-finite input");
  Eigen::BDCSVD<Matrix> svd(B);
  const Vector& s = svd.singularValues();
  if (s.size() == 0) return 0;
  const double cutoff = tol_rel * std::max(s[0], 1.0);
  int rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s[i] > cutoff) ++rank;
  return rank;
}

double nonsparsity(const Vector& gamma, double tol_abs) {
  if (gamma.size() == 0) return 0.0;
  Index active = 0;
  for (Index i = 0; i < gamma.size(); ++i)
    if (std::abs(gamma[i]) > tol_abs) ++active;
  return static_cast<double>(active) / static_cast<double>(gamma.size());
}

EvalReport evaluate(const DesignData& test_data, const Matrix& b_true, const Vector& g_true,
                    const CoefficientPair& estimate) {
  EvalReport report;
  report.rmse_y = rmse_y(test_data, estimate);
  report.error_b = error_b(b_true, estimate.b_mat);
  report.error_gamma = error_gamma(g_true, estimate.gamma_vec);
  report.rank_hat = rank_estimate(estimate.b_mat);
  report.nonsparsity_gamma = nonsparsity(estimate.gamma_vec);
  return report;
}

}  // namespace matreg
