#pragma once

#include "matreg/model.hpp"
#include "matreg/prox.hpp"
#include "matreg/types.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <functional>
#include <random>

namespace testutil {

using matreg::BoolArray;
using matreg::Index;
using matreg::Matrix;
using matreg::Vector;

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(gen);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen); }
  Vector vec(Index n, double scale = 1.0) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = scale * normal();
    return v;
  }
  Matrix mat(Index m, Index q, double scale = 1.0) {
    Matrix a(m, q);
    for (Index j = 0; j < q; ++j)
      for (Index i = 0; i < m; ++i) a(i, j) = scale * normal();
    return a;
  }
};

/// Minimizer of a convex scalar function on [lo, hi] by golden-section search.
inline double golden_section(const std::function<double(double)>& f, double lo, double hi) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 300 && (b - a) > 1e-14 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Independent minimization of 0.5*(z-v)^2 + t*|z| per coordinate.
inline Vector oracle_prox_l1(const Vector& v, double t) {
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double vi = v[i];
    out[i] = golden_section([&](double z) { return 0.5 * (z - vi) * (z - vi) + t * std::abs(z); },
                            -std::abs(vi) - t - 1.0, std::abs(vi) + t + 1.0);
  }
  return out;
}

/// Independent minimization of 0.5*(s-y)^2 + (1/(2c))*(s-u)^2 per coordinate.
inline Vector oracle_prox_squared_loss(const Vector& u, const Vector& y, double c) {
  Vector out(u.size());
  for (Index i = 0; i < u.size(); ++i) {
    const double ui = u[i], yi = y[i];
    const double lo = std::min(ui, yi) - 1.0, hi = std::max(ui, yi) + 1.0;
    out[i] = golden_section(
        [&](double s) { return 0.5 * (s - yi) * (s - yi) + (s - ui) * (s - ui) / (2.0 * c); }, lo,
        hi);
  }
  return out;
}

inline double nuclear_moreau_objective(const Matrix& M, const Matrix& Y, double t) {
  Eigen::JacobiSVD<Matrix> svd(M);
  return t * svd.singularValues().sum() + 0.5 * (M - Y).squaredNorm();
}

/// Numeric minimization of t*||M||_* + 0.5*||M - Y||_F^2: spectral reduction
/// (the minimizer shares Y's singular vectors by the trace inequality), each
/// singular value then solved by golden-section. Validity of the reduction is
/// re-checked by random-direction descent sampling at the returned point.
inline Matrix oracle_prox_nuclear(const Matrix& Y, double t, Rng& rng,
                                  double* worst_direction_gain = nullptr) {
  Eigen::JacobiSVD<Matrix> svd(Y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector s = svd.singularValues();
  Vector shrunk(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    const double si = s[i];
    shrunk[i] = golden_section(
        [&](double z) { return t * std::abs(z) + 0.5 * (z - si) * (z - si); }, 0.0, si + t + 1.0);
  }
  Matrix result = svd.matrixU() * shrunk.asDiagonal() * svd.matrixV().transpose();
  if (worst_direction_gain) {
    const double f0 = nuclear_moreau_objective(result, Y, t);
    double worst = 0.0;
    for (int trial = 0; trial < 32; ++trial) {
      Matrix dir = rng.mat(Y.rows(), Y.cols());
      dir /= dir.norm();
      const double eps = 1e-4;
      worst = std::max(worst, f0 - nuclear_moreau_objective(result + eps * dir, Y, t));
      worst = std::max(worst, f0 - nuclear_moreau_objective(result - eps * dir, Y, t));
    }
    *worst_direction_gain = worst;
  }
  return result;
}

/// Plain subgradient descent on the nuclear Moreau objective with the
/// strongly-convex step schedule 2/(k+1); slow but fully independent.
inline Matrix oracle_prox_nuclear_subgradient(const Matrix& Y, double t, long iterations) {
  Matrix m = Matrix::Zero(Y.rows(), Y.cols());
  for (long k = 1; k <= iterations; ++k) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Matrix grad = t * svd.matrixU() * svd.matrixV().transpose() + (m - Y);
    m -= (2.0 / static_cast<double>(k + 1)) * grad;
  }
  return m;
}

inline Vector soft_threshold(const Vector& v, double t) {
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]) - t;
    out[i] = a > 0.0 ? (v[i] > 0.0 ? a : -a) : 0.0;
  }
  return out;
}

/// Numeric minimization of the fused-lasso prox objective through its smooth
/// box-constrained dual, solved by accelerated projected gradient ascent.
inline Vector oracle_prox_fused(const Vector& v, double lambda, double lambda_prime) {
  const Index p = v.size();
  if (p <= 1 || lambda_prime == 0.0) return soft_threshold(v, lambda);
  const auto dt = [&](const Vector& u) {
    Vector r = Vector::Zero(p);
    for (Index i = 0; i + 1 < p; ++i) {
      r[i] -= u[i];
      r[i + 1] += u[i];
    }
    return r;
  };
  Vector u = Vector::Zero(p - 1), z = u;
  double tk = 1.0;
  int stable = 0;
  for (long k = 0; k < 400000 && stable < 50; ++k) {
    const Vector x = soft_threshold(v - dt(z), lambda);
    Vector g(p - 1);
    for (Index i = 0; i + 1 < p; ++i) g[i] = x[i + 1] - x[i];
    Vector u_next = z + g / 4.0;
    for (Index i = 0; i + 1 < p; ++i)
      u_next[i] = std::clamp(u_next[i], -lambda_prime, lambda_prime);
    const double tk_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    z = u_next + ((tk - 1.0) / tk_next) * (u_next - u);
    stable = (u_next - u).lpNorm<Eigen::Infinity>() <= 1e-15 * (1.0 + u.norm()) ? stable + 1 : 0;
    u = u_next;
    tk = tk_next;
  }
  return soft_threshold(v - dt(u), lambda);
}

/// Numeric minimization of the sparse-group-lasso prox objective through its
/// ball-constrained dual (one ball per group), accelerated projected ascent.
inline Vector oracle_prox_sgl(const Vector& v, double lambda, double lambda_prime,
                              const matreg::GroupPartition& partition) {
  const Index p = v.size();
  Vector u = Vector::Zero(p), z = u;
  double tk = 1.0;
  int stable = 0;
  const auto project = [&](Vector& w) {
    for (size_t l = 0; l < partition.groups.size(); ++l) {
      const double radius = lambda_prime * partition.weights[l];
      double sq = 0.0;
      for (Index i : partition.groups[l]) sq += w[i] * w[i];
      const double norm = std::sqrt(sq);
      if (norm > radius && norm > 0.0)
        for (Index i : partition.groups[l]) w[i] *= radius / norm;
    }
  };
  for (long k = 0; k < 400000 && stable < 50; ++k) {
    const Vector x = soft_threshold(v - z, lambda);
    Vector u_next = z + 0.9 * x;
    project(u_next);
    const double tk_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    z = u_next + ((tk - 1.0) / tk_next) * (u_next - u);
    stable = (u_next - u).lpNorm<Eigen::Infinity>() <= 1e-15 * (1.0 + u.norm()) ? stable + 1 : 0;
    u = u_next;
    tk = tk_next;
  }
  return soft_threshold(v - u, lambda);
}

/// Value of the full prox objective t*psi(x) + 0.5*||x - v||^2.
inline double vector_prox_objective(const matreg::VectorPenalty& psi, const Vector& x,
                                    const Vector& v, double t) {
  return t * matreg::vector_penalty_value(psi, x) + 0.5 * (x - v).squaredNorm();
}

/// Central finite difference of a vector map along a direction.
inline Vector central_difference(const std::function<Vector(const Vector&)>& f, const Vector& x,
                                 const Vector& dir, double eps) {
  return (f(x + eps * dir) - f(x - eps * dir)) / (2.0 * eps);
}

inline Matrix central_difference_mat(const std::function<Matrix(const Matrix&)>& f,
                                     const Matrix& x, const Matrix& dir, double eps) {
  return (f(x + eps * dir) - f(x - eps * dir)) / (2.0 * eps);
}

/// Random small problem instance; kind selects the estimator family
/// (0 = elementwise-L1 + lasso, 1 = nuclear + lasso, 2 = nuclear + fused,
/// 3 = nuclear + sparse group lasso). level_scale sets the penalty levels as
/// fractions of the data-driven maxima.
inline matreg::ProblemSpec random_problem(Rng& rng, Index n, Index m, Index q, Index p, int kind,
                                          double level_scale = 0.2) {
  matreg::ProblemSpec problem;
  problem.data.mat_rows = m;
  problem.data.mat_cols = q;
  problem.data.x_design = rng.mat(n, m * q);
  problem.data.z_design = rng.mat(n, p);
  problem.data.response = rng.vec(n, 2.0);

  const Vector xty = problem.data.x_design.transpose() * problem.data.response;
  const Vector zty = problem.data.z_design.transpose() * problem.data.response;
  const double z_inf = zty.cwiseAbs().maxCoeff();
  const double lambda = level_scale * z_inf;
  double rho;
  if (kind == 0) {
    rho = level_scale * xty.cwiseAbs().maxCoeff();
    problem.penalty.matrix_penalty = matreg::MatrixPenalty::elementwise_l1(rho);
  } else {
    Eigen::JacobiSVD<Matrix> svd(matreg::mat_map(xty, m, q));
    rho = level_scale * svd.singularValues()[0];
    problem.penalty.matrix_penalty = matreg::MatrixPenalty::nuclear(rho);
  }
  switch (kind) {
    case 2:
      problem.penalty.vector_penalty = matreg::VectorPenalty::fused(lambda, lambda);
      break;
    case 3: {
      matreg::GroupPartition part = matreg::GroupPartition::contiguous(p, std::max<Index>(2, p / 5));
      problem.penalty.vector_penalty =
          matreg::VectorPenalty::sparse_group(lambda, lambda, std::move(part));
      break;
    }
    default:
      problem.penalty.vector_penalty = matreg::VectorPenalty::lasso(lambda);
  }
  return problem;
}

/// Generic-point check: no singular value within margin of the threshold.
inline bool nuclear_generic(const matreg::SvdCertificate& cert, double margin = 1e-4) {
  for (Index i = 0; i < cert.singular_values.size(); ++i)
    if (std::abs(cert.singular_values[i] - cert.threshold) < margin) return false;
  return true;
}

inline bool l1_generic(const Vector& v, double t, double margin = 1e-4) {
  for (Index i = 0; i < v.size(); ++i)
    if (std::abs(std::abs(v[i]) - t) < margin) return false;
  return true;
}

}  // namespace testutil
