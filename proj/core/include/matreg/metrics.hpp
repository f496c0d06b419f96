#pragma once

#include "matreg/types.hpp"

namespace matreg {

struct EvalReport {
  double rmse_y = 0.0;
  double error_b = 0.0;
  double error_gamma = 0.0;
  int rank_hat = 0;
  double nonsparsity_gamma = 0.0;
};

/// ||y_test - predict(test_data, coeff)|| / sqrt(n).
double rmse_y(const DesignData& test_data, const CoefficientPair& coeff);

/// ||B_true - B_hat||_F / sqrt(m*q).
double error_b(const Matrix& b_true, const Matrix& b_hat);

/// ||gamma_true - gamma_hat|| / sqrt(p).
double error_gamma(const Vector& g_true, const Vector& g_hat);

/// Count of singular values above tol_rel * max(sigma_1, 1).
int rank_estimate(const Matrix& B, double tol_rel = 1e-8);

/// Fraction of entries with |gamma_i| > tol_abs.
double nonsparsity(const Vector& gamma, double tol_abs = 1e-8);

EvalReport evaluate(const DesignData& test_data, const Matrix& b_true, const Vector& g_true,
                    const CoefficientPair& estimate);

}  // namespace matreg
