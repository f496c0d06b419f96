#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

#include "matreg/metrics.hpp"
#include "matreg/model.hpp"
#include "matreg/prox.hpp"

using namespace matreg;
using testutil::Rng;

TEST_CASE("rmse_y: perfect prediction, hand example, per-sample consistency") {
  Rng rng(91);
  DesignData d;
  d.mat_rows = 2;
  d.mat_cols = 2;
  d.x_design = rng.mat(2, 4);
  d.z_design = rng.mat(2, 3);
  const CoefficientPair c{rng.mat(2, 2), rng.vec(3)};
  d.response = predict(d, c);
  CHECK(rmse_y(d, c) == doctest::Approx(0.0));

  d.response = Vector::Zero(2);
  d.response << 3.0, 4.0;
  const CoefficientPair zero = CoefficientPair::zero(2, 2, 3);
  DesignData zd = d;
  zd.x_design.setZero();
  zd.z_design.setZero();
  CHECK(rmse_y(zd, zero) == doctest::Approx(5.0 / std::sqrt(2.0)));

  // loop recomputation on a random instance
  DesignData big;
  big.mat_rows = 3;
  big.mat_cols = 2;
  big.x_design = rng.mat(9, 6);
  big.z_design = rng.mat(9, 4);
  big.response = rng.vec(9);
  const CoefficientPair cc{rng.mat(3, 2), rng.vec(4)};
  double acc = 0.0;
  const Vector pred = predict(big, cc);
  for (Index i = 0; i < 9; ++i) acc += std::pow(big.response[i] - pred[i], 2);
  CHECK(rmse_y(big, cc) == doctest::Approx(std::sqrt(acc / 9.0)));
}

TEST_CASE("error_b and error_gamma: identity, all-ones shift, recomputation") {
  Rng rng(92);
  const Matrix b = rng.mat(4, 5);
  CHECK(error_b(b, b) == doctest::Approx(0.0));
  CHECK(error_b(b, b + Matrix::Ones(4, 5)) == doctest::Approx(1.0));
  const Vector g = rng.vec(6);
  CHECK(error_gamma(g, g) == doctest::Approx(0.0));
  const Vector g2 = rng.vec(6);
  CHECK(error_gamma(g, g2) == doctest::Approx((g - g2).norm() / std::sqrt(6.0)));
  CHECK_THROWS_AS(error_b(b, Matrix::Zero(3, 5)), std::invalid_argument);
}

TEST_CASE("rank_estimate: zero matrix, tiny singular value, certificate cross-check") {
  CHECK(rank_estimate(Matrix::Zero(4, 4)) == 0);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1e-12;
  CHECK(rank_estimate(d) == 1);

  Rng rng(93);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix y = rng.mat(4, 6, 2.0);
    const MatrixProx eval = prox_nuclear(y, rng.uniform(0.3, 1.5));
    const auto& cert = std::get<SvdCertificate>(eval.certificate);
    CHECK(rank_estimate(eval.value) == static_cast<int>(cert.alpha1.size()));
  }
}

TEST_CASE("nonsparsity: zero vector, ones, prox-mask agreement") {
  CHECK(nonsparsity(Vector::Zero(5)) == doctest::Approx(0.0));
  CHECK(nonsparsity(Vector::Ones(5)) == doctest::Approx(1.0));

  Rng rng(94);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector v = rng.vec(12, 2.0);
    const VectorProx eval = prox_l1(v, rng.uniform(0.2, 1.5));
    const auto& cert = std::get<L1Certificate>(eval.certificate);
    double frac = 0.0;
    for (Index i = 0; i < 12; ++i) frac += cert.active_mask[i] ? 1.0 : 0.0;
    CHECK(nonsparsity(eval.value) == doctest::Approx(frac / 12.0));
  }
}

TEST_CASE("rmse is invariant to sample permutation") {
  Rng rng(95);
  DesignData d;
  d.mat_rows = 2;
  d.mat_cols = 3;
  d.x_design = rng.mat(8, 6);
  d.z_design = rng.mat(8, 4);
  d.response = rng.vec(8);
  const CoefficientPair c{rng.mat(2, 3), rng.vec(4)};
  const double base = rmse_y(d, c);

  std::vector<Index> perm = {3, 1, 7, 0, 5, 2, 6, 4};
  DesignData shuffled = d;
  for (Index i = 0; i < 8; ++i) {
    shuffled.x_design.row(i) = d.x_design.row(perm[static_cast<size_t>(i)]);
    shuffled.z_design.row(i) = d.z_design.row(perm[static_cast<size_t>(i)]);
    shuffled.response[i] = d.response[perm[static_cast<size_t>(i)]];
  }
  CHECK(rmse_y(shuffled, c) == doctest::Approx(base));
}
