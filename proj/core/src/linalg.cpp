#include "matreg/linalg.hpp"

#include <cmath>

namespace matreg {

namespace {

Vector deterministic_start(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * static_cast<double>((i % 7) - 3);
  v.normalize();
  return v;
}

}  // namespace

double spectral_norm_power(const Matrix& M, double rel_tol, int max_iter) {
  if (M.size() == 0) return 0.0;
  Vector v = deterministic_start(M.cols());
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector mv = M * v;
    const double next = mv.norm();
    if (next == 0.0) return 0.0;
    v.noalias() = M.transpose() * mv;
    v /= v.norm();
    if (it > 0 && std::abs(next - estimate) <= rel_tol * next) return next;
    estimate = next;
  }
  return estimate;
}

double operator_norm_power(Index n, const std::function<Vector(const Vector&)>& apply,
                           double rel_tol, int max_iter) {
  Vector v = deterministic_start(n);
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector av = apply(v);
    const double next = av.norm();
    if (next == 0.0) return 0.0;
    v = av / next;
    if (it > 0 && std::abs(next - estimate) <= rel_tol * next) return next;
    estimate = next;
  }
  return estimate;
}

double design_gram_norm(const DesignData& data, double rel_tol) {
  return operator_norm_power(data.n_samples(), [&](const Vector& u) -> Vector {
    Vector out = data.x_design * (data.x_design.transpose() * u);
    out.noalias() += data.z_design * (data.z_design.transpose() * u);
    return out;
  }, rel_tol);
}

}  // namespace matreg
