#pragma once

#include "matreg/types.hpp"

#include <random>
#include <string>

namespace matreg {

enum class ShapeKind { Square, Triangle, Circle, Heart };

/// True-coefficient schemes for the vector part: S1 sparsity (g=10, one
/// entry of 5 per group), S2 local constancy (g=10, leading ten ones per
/// group), S3 group structure (g=20, alternating +-1 in the first ten groups).
enum class GammaScheme { S1, S2, S3 };

Index gamma_scheme_groups(GammaScheme scheme);

/// Binary mask whose support draws the named shape, centered, spanning half
/// of the grid's linear extent.
Matrix gen_shape_matrix(ShapeKind kind, Index m, Index q);

/// B = B1 B2^T with independent Bernoulli(pi) factors,
/// pi = sqrt(1 - (1-s)^(1/r)); rank(B) <= r and expected non-sparsity s.
Matrix gen_lowrank_matrix(Index m, Index q, Index r, double s, std::mt19937_64& rng);

Vector gen_gamma(GammaScheme scheme, Index p, std::mt19937_64& rng);

/// Standard-normal design entries; y_i = <X_i,B> + <z_i,gamma> + N(0, noise_sd^2).
DesignData gen_samples(const Matrix& B, const Vector& gamma, Index n, double noise_sd,
                       std::mt19937_64& rng);

/// Load y (single column), Z (n x p), X (n x m*q, row i = vec(X_i)) from CSV
/// files. Missing cells impute to 0; the result is unstandardized.
DesignData load_csv_dataset(const std::string& path_y, const std::string& path_z,
                            const std::string& path_x, Index m, Index q);

}  // namespace matreg
