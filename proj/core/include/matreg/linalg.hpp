#pragma once

#include "matreg/types.hpp"

#include <functional>

namespace matreg {

/// Largest singular value of M by power iteration on M^T M.
double spectral_norm_power(const Matrix& M, double rel_tol = 1e-10, int max_iter = 10000);

/// Largest eigenvalue of a symmetric PSD operator on R^n given by its action.
double operator_norm_power(Index n, const std::function<Vector(const Vector&)>& apply,
                           double rel_tol = 1e-8, int max_iter = 1000);

/// Largest eigenvalue of X X^T + Z Z^T (the joint design Gram in sample space).
double design_gram_norm(const DesignData& data, double rel_tol = 1e-8);

}  // namespace matreg
